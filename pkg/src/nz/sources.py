"""Physical constants and charge/current density models, in geometric units.

Geometric units rescale the field vectors by the elementary charge,
D -> D/e and H -> H/(e c), so charge densities integrate to dimensionless
counts and every length below is in meters.  The default constants are the
rounded values the computation is meant to reproduce; all of them can be
overridden through a plain ``key=value`` text file (see
:func:`PhysConst.from_file`) or the CLI.

Conventions for the hydrogen source terms:

* total charge density   rho(r) = rho_p(r) - rho_e(r)           (neutral atom)
* total current density  j(r)   = {-y, x, 0} * chi(r)  with
  chi(r) = 3 mu/(pi a^4 r) Theta(a-r) - alpha rho_e(r)/r.

With this orientation the proton's exterior field is a pure dipole of
moment ``+mu_geom`` along z, and the electron's orbital current (charge -e
times the probability current) opposes it with moment lambda_bar(2g+1)/6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .specfun import gamma_complete, laguerre

__all__ = [
    "ELEMENTARY_CHARGE",
    "SPEED_OF_LIGHT",
    "PhysConst",
    "SpherePair",
    "CurrentLoop",
    "HydrogenAtom",
    "NobleGasAtom",
    "NOBLE_GASES",
    "noble_gas",
    "electron_density",
    "electron_current_prefactor",
    "proton_density",
    "proton_current_prefactor",
    "charge_density",
    "chi_source",
    "shell_density",
    "nuclear_density",
    "nuclear_radius",
]

ELEMENTARY_CHARGE = 1.602176634e-19  # C, exact SI
SPEED_OF_LIGHT = 299792458.0  # m/s, exact SI


@dataclass(frozen=True)
class PhysConst:
    """Length scales of the hydrogen problem (meters) plus alpha.

    Attributes
    ----------
    alpha : fine structure constant.
    lambda_bar : reduced electron Compton wavelength.
    bohr_b : Bohr radius (consistent with lambda_bar/alpha to ~0.3%,
        the rounding of the quoted values).
    proton_a : proton charge/moment radius.
    mu_geom : proton magnetic moment in geometric units, mu_p/(e c).
        The default 5.8e-16 m is kept for reproducibility although the
        CODATA moment gives 2.94e-16 m; see the README notes.
    """

    alpha: float = 7.2973525693e-3
    lambda_bar: float = 3.86e-13
    bohr_b: float = 5.29e-11
    proton_a: float = 8.5e-16
    mu_geom: float = 5.8e-16

    def __post_init__(self):
        for name in ("alpha", "lambda_bar", "bohr_b", "proton_a", "mu_geom"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"PhysConst.{name} must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    @property
    def gamma_rel(self) -> float:
        """Ground-state exponent sqrt(1 - alpha^2)."""
        return math.sqrt(1.0 - self.alpha**2)

    @property
    def s_ratio(self) -> float:
        """proton_a / bohr_b (~1.6e-5)."""
        return self.proton_a / self.bohr_b

    @property
    def d_ratio(self) -> float:
        """mu_geom / proton_a (~0.68 with the default constants)."""
        return self.mu_geom / self.proton_a

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "lambda_bar": self.lambda_bar,
            "bohr_b": self.bohr_b,
            "proton_a": self.proton_a,
            "mu_geom": self.mu_geom,
            "gamma_rel": self.gamma_rel,
            "s_ratio": self.s_ratio,
            "d_ratio": self.d_ratio,
        }

    @classmethod
    def from_mapping(cls, mapping: dict) -> "PhysConst":
        known = {"alpha", "lambda_bar", "bohr_b", "proton_a", "mu_geom"}
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown constant override(s): {sorted(unknown)}")
        return replace(cls(), **{k: float(v) for k, v in mapping.items()})

    @classmethod
    def from_file(cls, path: str | Path) -> "PhysConst":
        """Load overrides from ``key = value`` lines; ``#`` starts a comment."""
        mapping = {}
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed constants line: {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            mapping[key] = value
        return cls.from_mapping(mapping)


@dataclass(frozen=True)
class SpherePair:
    """Two oppositely charged spherical shells of radius ``radius_a``,
    centers separated by ``separation_d`` along z, carrying +-Q."""

    radius_a: float
    separation_d: float
    charge_over_e: float = 1.0

    def __post_init__(self):
        if self.radius_a <= 0.0:
            raise ValueError("sphere radius must be positive")
        if self.separation_d < 0.0:
            raise ValueError("separation must be non-negative")

    @property
    def b_ratio(self) -> float:
        return self.separation_d / self.radius_a

    @classmethod
    def from_b_ratio(cls, b: float, charge_over_e: float = 1.0,
                     radius_a: float = 1.0) -> "SpherePair":
        return cls(radius_a=radius_a, separation_d=b * radius_a,
                   charge_over_e=charge_over_e)


@dataclass(frozen=True)
class CurrentLoop:
    """Circular loop of radius ``radius_m`` carrying ``current_a`` amperes."""

    radius_m: float
    current_a: float

    def __post_init__(self):
        if self.radius_m <= 0.0:
            raise ValueError("loop radius must be positive")

    @property
    def scaled_current(self) -> float:
        """Dimensionless a I / (e c)."""
        return self.radius_m * self.current_a / (ELEMENTARY_CHARGE * SPEED_OF_LIGHT)


@dataclass(frozen=True)
class HydrogenAtom:
    """Ground-state hydrogen: Dirac electron cloud plus a uniform-ball proton."""

    constants: PhysConst = PhysConst()
    relativistic: bool = True

    @property
    def gamma(self) -> float:
        return self.constants.gamma_rel if self.relativistic else 1.0


@dataclass(frozen=True)
class NobleGasAtom:
    """Closed-shell atom: hydrogen-like shells around a uniform-ball nucleus.

    Shells are (n, l, occupancy) triples.  Closed shells carry 2(2l+1)
    electrons; a partially filled s shell is also accepted (its density is
    spherically symmetric), which lets a one-electron ``1s^1`` configuration
    reuse this machinery for cross-checks.
    """

    symbol: str
    Z: int
    A: int
    shells: tuple[tuple[int, int, int], ...]
    constants: PhysConst = PhysConst()

    def __post_init__(self):
        if self.Z < 1 or self.A < 1:
            raise ValueError("Z and A must be positive integers")
        total = 0
        for n, l, occ in self.shells:
            if not 0 <= l < n:
                raise ValueError(f"shell ({n},{l}) violates l < n")
            full = 2 * (2 * l + 1)
            if not 1 <= occ <= full:
                raise ValueError(f"shell ({n},{l}) occupancy {occ} outside [1, {full}]")
            if occ != full and l != 0:
                raise ValueError(f"partially filled l={l} shell is not spherically symmetric")
            total += occ
        if total != self.Z:
            raise ValueError(f"shell occupancies sum to {total}, expected Z={self.Z}")

    @property
    def nuclear_radius_m(self) -> float:
        return nuclear_radius(self.A)


def _closed(*nl: tuple[int, int]) -> tuple[tuple[int, int, int], ...]:
    return tuple((n, l, 2 * (2 * l + 1)) for n, l in nl)


NOBLE_GASES: dict[str, NobleGasAtom] = {
    "He": NobleGasAtom("He", 2, 4, _closed((1, 0))),
    "Ne": NobleGasAtom("Ne", 10, 20, _closed((1, 0), (2, 0), (2, 1))),
    "Ar": NobleGasAtom("Ar", 18, 40, _closed((1, 0), (2, 0), (2, 1), (3, 0), (3, 1))),
    "Kr": NobleGasAtom("Kr", 36, 84, _closed((1, 0), (2, 0), (2, 1), (3, 0), (3, 1),
                                             (3, 2), (4, 0), (4, 1))),
    "Xe": NobleGasAtom("Xe", 54, 131, _closed((1, 0), (2, 0), (2, 1), (3, 0), (3, 1),
                                              (3, 2), (4, 0), (4, 1), (4, 2), (5, 0), (5, 1))),
}


def noble_gas(symbol: str, constants: PhysConst | None = None) -> NobleGasAtom:
    """Look up a roster atom, optionally rebinding its constants."""
    try:
        atom = NOBLE_GASES[symbol]
    except KeyError:
        raise ValueError(f"unknown element symbol {symbol!r}; "
                         f"known: {sorted(NOBLE_GASES)}") from None
    if constants is not None:
        atom = replace(atom, constants=constants)
    return atom


def _require_positive_radius(r) -> np.ndarray:
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr <= 0.0):
        raise ValueError("radius must be strictly positive")
    return arr


def electron_density(atom: HydrogenAtom, r):
    """Ground-state electron probability density (1/m^3).

        rho_e(r) = e^(-2r/b) (2r/b)^(2g+1) / (4 pi r^3 Gamma(2g+1))

    mildly divergent at the origin (r^(2g-2)) in the relativistic case, so
    r = 0 is rejected.
    """
    arr = _require_positive_radius(r)
    g = atom.gamma
    b = atom.constants.bohr_b
    x = 2.0 * arr / b
    out = np.exp(-x + (2.0 * g + 1.0) * np.log(x)) / (4.0 * math.pi * arr**3
                                                      * gamma_complete(2.0 * g + 1.0))
    return float(out) if out.ndim == 0 else out


def electron_current_prefactor(atom: HydrogenAtom, r):
    """Scalar p(r) such that the probability current is j_e = {-y, x, 0} p(r)."""
    arr = _require_positive_radius(r)
    out = atom.constants.alpha * electron_density(atom, arr) / arr
    return float(out) if np.ndim(out) == 0 else out


def proton_density(constants: PhysConst, r):
    """Uniform-ball proton charge density 3/(4 pi a^3) inside radius a."""
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0.0):
        raise ValueError("radius must be non-negative")
    a = constants.proton_a
    out = np.where(arr < a, 3.0 / (4.0 * math.pi * a**3), 0.0)
    return float(out) if out.ndim == 0 else out


def proton_current_prefactor(constants: PhysConst, r):
    """Scalar q(r) = 3 mu/(pi a^4) Theta(a-r) of the proton moment current.

    The full current is j_p = {-y, x, 0}/r * q(r); its magnetic moment is
    +mu_geom along z, matching the exterior dipole field mu/(4 pi r^3).
    """
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0.0):
        raise ValueError("radius must be non-negative")
    a = constants.proton_a
    out = np.where(arr < a, 3.0 * constants.mu_geom / (math.pi * a**4), 0.0)
    return float(out) if out.ndim == 0 else out


def charge_density(atom: HydrogenAtom, r):
    """Total hydrogen charge density rho_p - rho_e (electron charge is -e)."""
    arr = _require_positive_radius(r)
    out = proton_density(atom.constants, arr) - electron_density(atom, arr)
    return float(out) if np.ndim(out) == 0 else out


def chi_source(atom: HydrogenAtom, r):
    """Scalar source chi(r) of the azimuthal potential: j = {-y, x, 0} chi(r).

        chi(r) = 3 mu/(pi a^4 r) Theta(a-r) - alpha rho_e(r)/r
    """
    arr = _require_positive_radius(r)
    out = proton_current_prefactor(atom.constants, arr) / arr \
        - electron_current_prefactor(atom, arr)
    return float(out) if np.ndim(out) == 0 else out


def shell_radial_norm(atom: NobleGasAtom, n: int, l: int) -> float:
    """Normalization of the radial orbital: R = norm * e^(-q/2) q^l L(q)."""
    beta = 2.0 * atom.Z / (n * atom.constants.bohr_b)
    return math.sqrt(beta**3 * math.factorial(n - l - 1)
                     / (2.0 * n * math.factorial(n + l)))


def shell_density(atom: NobleGasAtom, shell: tuple[int, int], r):
    """Electron density of one (n, l) shell (1/m^3), spherically symmetric.

    Equal to occupancy * R_nl(r)^2 / (4 pi) with the hydrogen-like radial
    function evaluated at effective charge Z (electron-electron interaction
    neglected).  The Laguerre degree index is n - l - 1.
    """
    n, l = shell[0], shell[1]
    occ = None
    for sn, sl, so in atom.shells:
        if (sn, sl) == (n, l):
            occ = so
            break
    if occ is None:
        raise ValueError(f"shell ({n},{l}) is not part of {atom.symbol}")
    arr = _require_positive_radius(r)
    q = 2.0 * atom.Z * arr / (n * atom.constants.bohr_b)
    radial = shell_radial_norm(atom, n, l) * np.exp(-q / 2.0) * q**l \
        * laguerre(n - l - 1, 2 * l + 1, q)
    out = occ * radial**2 / (4.0 * math.pi)
    return float(out) if np.ndim(out) == 0 else out


def nuclear_density(atom: NobleGasAtom, r):
    """Uniform-ball nuclear charge density, total charge Z."""
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0.0):
        raise ValueError("radius must be non-negative")
    a = atom.nuclear_radius_m
    out = np.where(arr < a, 3.0 * atom.Z / (4.0 * math.pi * a**3), 0.0)
    return float(out) if out.ndim == 0 else out


def nuclear_radius(A: int) -> float:
    """Empirical nuclear charge radius a(A) = 1.2 A^(1/3) fm."""
    if A < 1 or A != int(A):
        raise ValueError("mass number A must be a positive integer")
    return 1.2e-15 * float(A) ** (1.0 / 3.0)
