"""Fourier-space form factors for every source model.

All transforms follow the symmetric convention

    f(k) = (2 pi)^(-3/2) integral d3r e^(-i k r) f(r)
         = sqrt(2/pi) (1/k) integral_0^inf dr r sin(kr) f(r),

so a unit point charge transforms to (2 pi)^(-3/2).  Every closed form
here is cross-validated against :func:`radial_fourier` (the numeric route)
by the test suite and by ``oracle.spectrum_audit``.

The k -> 0 region of each spectrum is evaluated through series branches,
never through 0/0 cancellation; the analytic limits are carried as
metadata on :class:`RadialSpectrum`.

Note on the magnetic source: the azimuthal-current transforms
(:func:`hydrogen_chi_spectrum` and its derivative) are the transforms of
the declared position-space source ``chi(r)`` of :mod:`nz.sources` --
proton term 12 mu (1-cos(ak)) / ((2 pi)^(3/2) a^4 k^2) -- which is what the
numeric-transform audit and the field-route cross-checks require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .quadrature import QuadSpec, QuadResult, integrate
from .sources import CurrentLoop, HydrogenAtom, NobleGasAtom, PhysConst, SpherePair
from .specfun import bessel_j1

__all__ = [
    "RadialSpectrum",
    "radial_fourier",
    "ball_form_factor",
    "shell_form_factor",
    "proton_charge_spectrum",
    "electron_charge_spectrum",
    "hydrogen_charge_spectrum",
    "hydrogen_chi_spectrum",
    "hydrogen_chi_spectrum_deriv",
    "sphere_pair_form_factor",
    "loop_current_spectrum",
    "shell_spectrum",
    "atom_charge_spectrum",
    "d_squared",
    "h_squared",
]

_TPI32 = (2.0 * math.pi) ** -1.5


@dataclass(frozen=True)
class RadialSpectrum:
    """A scalar function of k (1/m) with scale and limit metadata."""

    eval: object  # callable k -> value
    scale_hints: tuple[float, ...] = ()
    k0_limit: float = 0.0
    label: str = ""

    def __call__(self, k):
        return self.eval(k)


def radial_fourier(f, k: float, *, breakpoints: tuple[float, ...] = (),
                   rel_tol: float = 1e-10, abs_tol: float = 1e-300,
                   max_subdivisions: int = 10**6) -> QuadResult:
    """Numeric radial transform sqrt(2/pi)/k * int_0^inf dr r sin(kr) f(r).

    ``f`` must accept numpy arrays.  The integration grid resolves the
    sin(kr) oscillation (wavelength 2 pi / k) and honors any supplied
    radial breakpoints (support edges, cloud scales).  ``abs_tol`` refers
    to the transform value itself (the internal integral target is scaled
    accordingly), which matters near spectral zeros where no relative
    tolerance is reachable.
    """
    if k <= 0.0:
        raise ValueError("radial_fourier requires k > 0")
    factor = math.sqrt(2.0 / math.pi) / k
    spec = QuadSpec(rel_tol=rel_tol, abs_tol=max(abs_tol / factor, 1e-300),
                    breakpoints=tuple(sorted(set(breakpoints))),
                    oscillation_wavelength=2.0 * math.pi / k,
                    max_subdivisions=max_subdivisions)
    res = integrate(lambda r: r * np.sin(k * r) * f(r), 0.0, math.inf, spec)
    return QuadResult(factor * res.value, abs(factor) * res.abs_error_estimate,
                      res.evaluations, res.converged)


def ball_form_factor(x):
    """Uniform-ball factor 3(sin x - x cos x)/x^3, normalized to 1 at x=0."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(x)
    small = np.abs(x) < 0.05
    xs = x[small]
    x2 = xs * xs
    out[small] = 1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0
    xl = x[~small]
    out[~small] = 3.0 * (np.sin(xl) - xl * np.cos(xl)) / xl**3
    return float(out[0]) if scalar else out


def shell_form_factor(x):
    """Spherical-shell factor sin(x)/x (unit charge on a sphere surface)."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(x)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = 1.0 - xs * xs / 6.0
    xl = x[~small]
    out[~small] = np.sin(xl) / xl
    return float(out[0]) if scalar else out


def proton_charge_spectrum(constants: PhysConst, k):
    """Transform of the unit-charge uniform ball of radius proton_a."""
    out = _TPI32 * ball_form_factor(np.asarray(k, dtype=np.float64) * constants.proton_a)
    return out


def _electron_form_factor(gamma: float, kappa):
    """Dimensionless electron factor sin(2g atan(K/2)) / (g K (1+K^2/4)^g)."""
    kappa = np.atleast_1d(np.asarray(kappa, dtype=np.float64))
    out = np.empty_like(kappa)
    small = kappa < 1e-6
    ks = kappa[small]
    c2 = 1.0 / 12.0 + gamma * gamma / 6.0 + gamma / 4.0
    out[small] = 1.0 - c2 * ks * ks
    kl = kappa[~small]
    out[~small] = np.sin(2.0 * gamma * np.arctan(kl / 2.0)) \
        / (gamma * kl * (1.0 + kl * kl / 4.0) ** gamma)
    return out


def electron_charge_spectrum(atom: HydrogenAtom, k):
    """Transform of the ground-state electron density (unit total charge)."""
    scalar = np.ndim(k) == 0
    k = np.asarray(k, dtype=np.float64)
    out = _TPI32 * _electron_form_factor(atom.gamma, atom.constants.bohr_b * k)
    return float(out[0]) if scalar else out


def hydrogen_charge_spectrum(atom: HydrogenAtom, k):
    """Transform of the total hydrogen charge density rho_p - rho_e.

    Vanishes quadratically as k -> 0 (neutral atom); the small-k branch is
    evaluated as an explicit series so the cancellation between the two
    unit-charge terms costs no precision.
    """
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    c = atom.constants
    g = atom.gamma
    kappa = c.bohr_b * k
    out = np.empty_like(kappa)
    small = kappa < 1e-4
    ks = kappa[small]
    c2e = 1.0 / 12.0 + g * g / 6.0 + g / 4.0
    c2p = c.s_ratio**2 / 10.0
    out[small] = _TPI32 * (c2e - c2p) * ks * ks
    kl = k[~small]
    out[~small] = _TPI32 * (ball_form_factor(c.proton_a * kl)
                            - _electron_form_factor(g, c.bohr_b * kl))
    return float(out[0]) if scalar else out


def _half_sinc_sq(x):
    """(1 - cos x)/x^2 evaluated as 0.5 sinc^2(x/2): stable for all x."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    half = x / 2.0
    out = np.empty_like(x)
    small = np.abs(half) < 1e-8
    out[small] = 0.5 * (1.0 - half[small] ** 2 / 3.0)
    hl = half[~small]
    out[~small] = 0.5 * (np.sin(hl) / hl) ** 2
    return out


def hydrogen_chi_spectrum(atom: HydrogenAtom, k):
    """Transform chi(k) of the azimuthal current source chi(r).

    Proton moment term:   12 mu (1 - cos(ak)) / ((2 pi)^(3/2) a^4 k^2)
    Electron term:  2 a sin((2g-1) atan(bk/2))
                    / ((2 pi)^(3/2) g (2g-1) b^2 k (1 + b^2 k^2/4)^(g-1/2))
    """
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    c = atom.constants
    g = atom.gamma
    a = c.proton_a
    b = c.bohr_b
    prot = 12.0 * c.mu_geom * _half_sinc_sq(a * k) / (a * a) * _TPI32
    q = b * k / 2.0
    # sin((2g-1) atan(q)) / k is finite at k=0; series below q ~ 1e-8
    kp = np.where(k > 0.0, k, 1.0)
    elec_core = np.where(
        q < 1e-8,
        (2.0 * g - 1.0) * b / 2.0 * (1.0 - q * q * ((2.0 * g - 1.0) ** 2 + 2.0) / 6.0),
        np.sin((2.0 * g - 1.0) * np.arctan(q)) / kp,
    )
    elec = 2.0 * c.alpha * _TPI32 * elec_core \
        / (g * (2.0 * g - 1.0) * b * b * (1.0 + q * q) ** (g - 0.5))
    out = prot - elec
    return float(out[0]) if scalar else out


def _g3(x):
    """(x sin x + 2 cos x - 2)/x^3 with a series branch (limit: -x/12)."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(x)
    small = np.abs(x) < 0.1
    xs = x[small]
    x2 = xs * xs
    out[small] = xs * (-1.0 / 12.0 + x2 / 180.0 - x2 * x2 / 6720.0
                       + x2 * x2 * x2 / 443520.0)
    xl = x[~small]
    out[~small] = (xl * np.sin(xl) + 2.0 * np.cos(xl) - 2.0) / xl**3
    return out


def _chi_deriv_electron_core(gamma: float, kappa):
    """(g K cos(sigma) - sin(sigma)) with sigma = 2g atan(K/2), stable.

    Split as gK(cos sigma - 1) + (gK - sigma) + (sigma - sin sigma); each
    piece is O(K^3) and individually cancellation-free.
    """
    kappa = np.atleast_1d(np.asarray(kappa, dtype=np.float64))
    sigma = 2.0 * gamma * np.arctan(kappa / 2.0)
    c1 = -2.0 * gamma * kappa * np.sin(sigma / 2.0) ** 2
    # K - 2 atan(K/2): series K^3/12 - K^5/80 + K^7/448 below K=0.05
    small = kappa < 0.05
    diff = np.empty_like(kappa)
    ks = kappa[small]
    k2 = ks * ks
    diff[small] = ks * k2 * (1.0 / 12.0 - k2 / 80.0 + k2 * k2 / 448.0)
    kl = kappa[~small]
    diff[~small] = kl - 2.0 * np.arctan(kl / 2.0)
    c2 = gamma * diff
    # sigma - sin(sigma): series below 0.1
    s_small = np.abs(sigma) < 0.1
    c3 = np.empty_like(sigma)
    ss = sigma[s_small]
    s2 = ss * ss
    c3[s_small] = ss * s2 * (1.0 / 6.0 - s2 / 120.0 + s2 * s2 / 5040.0)
    sl = sigma[~s_small]
    c3[~s_small] = sl - np.sin(sl)
    return c1 + c2 + c3


def hydrogen_chi_spectrum_deriv(atom: HydrogenAtom, k):
    """d chi(k)/dk, dimensionless; the exact k-derivative of
    :func:`hydrogen_chi_spectrum` (checked by finite differences in tests).
    """
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    c = atom.constants
    g = atom.gamma
    kappa = c.bohr_b * k
    prot = 12.0 * c.d_ratio * _g3(c.proton_a * k) * _TPI32
    kp = np.where(kappa > 0.0, kappa, 1.0)
    elec = 2.0 * c.alpha * _TPI32 * _chi_deriv_electron_core(g, kappa) \
        / (g * (2.0 * g - 1.0) * kp * kp * (1.0 + kappa * kappa / 4.0) ** g)
    elec = np.where(kappa > 0.0, elec, 0.0)
    out = prot - elec
    return float(out[0]) if scalar else out


def sphere_pair_form_factor(pair: SpherePair, k, cos_theta):
    """Charge-factored transform magnitude of the two-shell source:

        2 (2 pi)^(-3/2) sin(d k cos(theta)/2) sin(ak)/(ak)
    """
    scalar = np.ndim(k) == 0 and np.ndim(cos_theta) == 0
    k = np.asarray(k, dtype=np.float64)
    out = 2.0 * _TPI32 * np.sin(0.5 * pair.separation_d * k * np.asarray(cos_theta)) \
        * shell_form_factor(pair.radius_a * k)
    return float(np.asarray(out).reshape(-1)[0]) if scalar else out


def loop_current_spectrum(loop: CurrentLoop, k_perp):
    """Scalar m(kp) with j(k) = i m(kp) {k_y, -k_x, 0}:

        m = a I J1(a kp) / (sqrt(2 pi) kp),  m(0) = a^2 I / (2 sqrt(2 pi)).
    """
    scalar = np.ndim(k_perp) == 0
    k_perp = np.atleast_1d(np.asarray(k_perp, dtype=np.float64))
    if np.any(k_perp < 0.0):
        raise ValueError("k_perp must be non-negative")
    a = loop.radius_m
    x = a * k_perp
    out = np.empty_like(k_perp)
    small = x < 1e-6
    xs = x[small]
    out[small] = a * (0.5 - xs * xs / 16.0)
    xl = x[~small]
    out[~small] = a * bessel_j1(xl) / xl
    out = out * a * loop.current_a / math.sqrt(2.0 * math.pi)
    return float(out[0]) if scalar else out


@lru_cache(maxsize=None)
def _shell_poly_coeffs(n: int, l: int) -> tuple[float, ...]:
    """Exact coefficients of q^(2l) [L_{n-l-1}^{2l+1}(q)]^2, ascending in q."""
    deg = n - l - 1
    order = 2 * l + 1
    lag = [Fraction(0)] * (deg + 1)
    for i in range(deg + 1):
        lag[i] = Fraction((-1) ** i * math.comb(deg + order, deg - i), math.factorial(i))
    sq = [Fraction(0)] * (2 * deg + 1)
    for i, ci in enumerate(lag):
        for j, cj in enumerate(lag):
            sq[i + j] += ci * cj
    coeffs = [Fraction(0)] * (2 * l) + sq
    return tuple(float(c) for c in coeffs)


def shell_spectrum(atom: NobleGasAtom, shell: tuple[int, int], k):
    """Closed-form transform of one (n, l) shell density.

    The squared Laguerre polynomial makes the density a finite sum of
    r^m e^(-beta r) terms, each of which transforms through

        int_0^inf r^(m+1) sin(kr) e^(-beta r) dr
            = (m+1)! Im (beta - ik)^(-(m+2)),

    giving the advertised ratio of polynomials in k^2 (evaluated here in
    the numerically stable complex-power form).
    """
    n, l = shell[0], shell[1]
    occ = None
    for sn, sl, so in atom.shells:
        if (sn, sl) == (n, l):
            occ = so
            break
    if occ is None:
        raise ValueError(f"shell ({n},{l}) is not part of {atom.symbol}")
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    if np.any(k < 0.0):
        raise ValueError("k must be non-negative")
    beta = 2.0 * atom.Z / (n * atom.constants.bohr_b)
    pref = occ * beta**3 * math.factorial(n - l - 1) \
        / (8.0 * math.pi * n * math.factorial(n + l))
    coeffs = _shell_poly_coeffs(n, l)
    kc = np.where(k > 1e-10 * beta, k, 1e-10 * beta)
    z = beta - 1j * kc
    total = np.zeros_like(kc)
    zpow = z ** (-2.0)
    bpow = 1.0
    fact = 1.0  # (m+1)!
    for m, c in enumerate(coeffs):
        if m > 0:
            zpow = zpow / z
            bpow *= beta
            fact *= m + 1
        if c != 0.0:
            total += c * bpow * fact * zpow.imag
    out = math.sqrt(2.0 / math.pi) * pref * total / kc
    return float(out[0]) if scalar else out


def atom_charge_spectrum(atom: NobleGasAtom, k):
    """Transform of nucleus minus all shells: Z F_ball(a(A) k) - sum shells."""
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    out = atom.Z * _TPI32 * ball_form_factor(atom.nuclear_radius_m * k)
    for n, l, _occ in atom.shells:
        out = out - shell_spectrum(atom, (n, l), k)
    return float(out[0]) if scalar else out


def d_squared(rho_tilde, k):
    """|D(k)|^2 = rho(k)^2 / k^2 for a static charge spectrum."""
    return (np.asarray(rho_tilde) / np.asarray(k)) ** 2


def h_squared(chi_deriv, k, cos_theta):
    """|H(k)|^2 = (1 - cos^2 theta) (d chi/dk)^2 / k^2 for the axial current."""
    u = np.asarray(cos_theta)
    return (1.0 - u * u) * (np.asarray(chi_deriv) / np.asarray(k)) ** 2


def hydrogen_charge_spectrum_obj(atom: HydrogenAtom) -> RadialSpectrum:
    c = atom.constants
    return RadialSpectrum(
        eval=lambda k: hydrogen_charge_spectrum(atom, k),
        scale_hints=(1.0 / c.bohr_b, 1.0 / c.proton_a),
        k0_limit=0.0,
        label="hydrogen charge",
    )


def hydrogen_chi_spectrum_obj(atom: HydrogenAtom) -> RadialSpectrum:
    c = atom.constants
    g = atom.gamma
    return RadialSpectrum(
        eval=lambda k: hydrogen_chi_spectrum(atom, k),
        scale_hints=(1.0 / c.bohr_b, 1.0 / c.proton_a),
        k0_limit=6.0 * c.mu_geom / c.proton_a**2 * _TPI32
        - c.alpha * _TPI32 / (g * c.bohr_b),
        label="hydrogen current source",
    )
