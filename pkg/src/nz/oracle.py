"""Independent verification routes.

Nothing in this module reuses the k-space reductions under test: the
position-space functional

    N = (alpha/pi) intint d3r d3r' [ D(r).D(r') + H(r).H(r') ] / |r-r'|^2

is estimated by importance-sampled Monte Carlo over point pairs, the
Fourier kernel identity is checked by damped quadrature with Richardson
extrapolation, and every analytic spectrum is audited against the numeric
radial transform of its own position-space density.

Monte Carlo design: the first point is drawn from an isotropic radial law
(single-scale Cauchy-like for one-scale sources, log-uniform for the
hydrogen atom whose contributions are spread log-uniformly between the
proton and Bohr radii), the second point is the first plus a displacement
drawn from q(d) ~ 1/d^2, which cancels the pair kernel exactly and keeps
the estimator variance finite.  Fixed seed => bitwise-identical estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import potential_derivs
from .quadrature import QuadSpec, integrate
from .sources import (
    ELEMENTARY_CHARGE,
    SPEED_OF_LIGHT,
    CurrentLoop,
    HydrogenAtom,
    PhysConst,
    SpherePair,
    charge_density,
    chi_source,
    electron_density,
    noble_gas,
    nuclear_density,
    proton_density,
    shell_density,
)
from . import spectra

__all__ = [
    "McSpec",
    "McResult",
    "kernel_identity_check",
    "nz_position_space",
    "loop_field_sampler",
    "hydrogen_d_sampler",
    "sphere_pair_d_sampler",
    "nz_loop_position_space",
    "nz_hydrogen_electric_position_space",
    "spectrum_audit",
]

_ALPHA_DEFAULT = 7.2973525693e-3


@dataclass(frozen=True)
class McSpec:
    """Monte Carlo sampling plan.

    ``importance_scale`` sets the single-scale radial law
    p(r) ~ r^2/(r^2+scale^2)^2; giving ``r_min``/``r_max`` switches to the
    log-uniform law (needed when contributions span many decades).
    """

    samples: int = 100_000
    seed: int = 20260808
    importance_scale: float = 1.0
    r_min: float | None = None
    r_max: float | None = None
    pair_radius: float | None = None
    pair_law: str = "uniform"
    pair_min: float | None = None
    batches: int = 32

    def __post_init__(self):
        if self.samples < 1000:
            raise ValueError("samples must be >= 1000")
        if self.batches < 2 or self.samples % self.batches:
            raise ValueError("samples must split evenly into >= 2 batches")
        if self.pair_law not in ("uniform", "log"):
            raise ValueError("pair_law must be 'uniform' or 'log'")
        if self.pair_law == "log" and self.pair_min is None:
            raise ValueError("pair_law='log' requires pair_min")


@dataclass(frozen=True)
class McResult:
    value: float
    stderr: float
    samples: int
    batches: int


# ---------------------------------------------------------------------------
# Fourier kernel identity
# ---------------------------------------------------------------------------

def kernel_identity_check(separation: float, cutoff_k: float) -> tuple[float, float]:
    """Check (2 pi)^-3 int d3k/k e^{i k.dr} = 1/(2 pi^2 dr^2).

    The left side is the regulated radial reduction

        lhs(eps) = 1/(2 pi^2 dr) int_0^K sin(k dr) e^{-eps k} dk

    integrated numerically at two damping strengths with eps -> 0
    Richardson extrapolation (the damped value is even in eps).  Needs
    K dr >~ 1e3 for percent-level agreement.
    """
    if separation <= 0.0 or cutoff_k <= 0.0:
        raise ValueError("separation and cutoff_k must be positive")
    dr = separation

    def damped(eps: float) -> float:
        spec = QuadSpec(rel_tol=1e-10, abs_tol=1e-300,
                        oscillation_wavelength=2.0 * math.pi / dr)
        res = integrate(lambda k: np.sin(k * dr) * np.exp(-eps * k),
                        0.0, cutoff_k, spec)
        return res.value / (2.0 * math.pi**2 * dr)

    eps1 = 30.0 / cutoff_k
    f1 = damped(eps1)
    f2 = damped(eps1 / 2.0)
    lhs = (4.0 * f2 - f1) / 3.0
    rhs = 1.0 / (2.0 * math.pi**2 * dr * dr)
    return lhs, rhs


# ---------------------------------------------------------------------------
# position-space Monte Carlo
# ---------------------------------------------------------------------------

def _isotropic_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    s = np.sqrt(1.0 - u * u)
    return np.stack([s * np.cos(phi), s * np.sin(phi), u], axis=1)


class _CauchyDensity:
    """Isotropic law with radial density f(r) = (4 s/pi) r^2/(r^2+s^2)^2."""

    def __init__(self, scale: float):
        self.scale = scale

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        q = rng.uniform(0.0, 1.0, n)
        # invert F(u) = (2/pi)(atan u - u/(1+u^2)) by lookup + Newton polish
        ugrid = np.geomspace(1e-6, 1e8, 4096)
        fgrid = (2.0 / math.pi) * (np.arctan(ugrid) - ugrid / (1.0 + ugrid**2))
        u = np.interp(q, fgrid, ugrid)
        for _ in range(6):
            f = (2.0 / math.pi) * (np.arctan(u) - u / (1.0 + u * u))
            fp = (4.0 / math.pi) * u * u / (1.0 + u * u) ** 2
            step = np.where(fp > 0.0, (f - q) / np.where(fp > 0.0, fp, 1.0), 0.0)
            u = np.maximum(u - step, 1e-12)
        return (self.scale * u)[:, None] * _isotropic_directions(rng, n)

    def pdf(self, pts: np.ndarray) -> np.ndarray:
        r2 = np.einsum("ij,ij->i", pts, pts)
        s = self.scale
        return s / (math.pi**2 * (r2 + s * s) ** 2)


class _LogUniformDensity:
    """Isotropic law, log-uniform radius in [r_min, r_max] (zero outside)."""

    def __init__(self, r_min: float, r_max: float):
        if not 0.0 < r_min < r_max:
            raise ValueError("need 0 < r_min < r_max")
        self.r_min = r_min
        self.r_max = r_max
        self._log_span = math.log(r_max / r_min)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        radii = self.r_min * (self.r_max / self.r_min) ** rng.uniform(0.0, 1.0, n)
        return radii[:, None] * _isotropic_directions(rng, n)

    def pdf(self, pts: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(pts, axis=1)
        inside = (r >= self.r_min) & (r <= self.r_max)
        rc = np.where(inside, r, 1.0)
        return np.where(inside, 1.0 / (4.0 * math.pi * self._log_span * rc**3), 0.0)


class _TorusDensity:
    """Mass concentrated around a circle of radius a in the z=0 plane.

    Cross-section density C/(d^2+w^2) out to d = d_max; used to tame the
    1/d field singularity at a current-carrying wire.
    """

    def __init__(self, ring_radius: float, core: float, d_max: float):
        self.a = ring_radius
        self.w = core
        self.d_max = d_max
        self._norm = math.pi * math.log(1.0 + (d_max / core) ** 2)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        psi = rng.uniform(0.0, 2.0 * math.pi, n)
        theta = rng.uniform(0.0, 2.0 * math.pi, n)
        u = rng.uniform(0.0, 1.0, n)
        d = self.w * np.sqrt((1.0 + (self.d_max / self.w) ** 2) ** u - 1.0)
        rho = self.a + d * np.cos(theta)
        z = d * np.sin(theta)
        return np.stack([rho * np.cos(psi), rho * np.sin(psi), z], axis=1)

    def pdf(self, pts: np.ndarray) -> np.ndarray:
        rho = np.hypot(pts[:, 0], pts[:, 1])
        d2 = (rho - self.a) ** 2 + pts[:, 2] ** 2
        inside = d2 <= self.d_max**2
        rc = np.maximum(rho, 1e-300)
        p2 = 1.0 / (self._norm * (d2 + self.w * self.w))
        return np.where(inside, p2 / (2.0 * math.pi * rc), 0.0)


class _MixtureDensity:
    def __init__(self, *components, weights=None):
        self.components = components
        self.weights = weights or [1.0 / len(components)] * len(components)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        choice = rng.uniform(0.0, 1.0, n)
        out = np.empty((n, 3))
        lo = 0.0
        for comp, wt in zip(self.components, self.weights):
            mask = (choice >= lo) & (choice < lo + wt)
            out[mask] = comp.sample(rng, int(mask.sum()))
            lo += wt
        mask = choice >= lo  # guard the open upper edge
        if np.any(mask):
            out[mask] = self.components[-1].sample(rng, int(mask.sum()))
        return out

    def pdf(self, pts: np.ndarray) -> np.ndarray:
        total = np.zeros(len(pts))
        for comp, wt in zip(self.components, self.weights):
            total += wt * comp.pdf(pts)
        return total


def _density_from_spec(mc: McSpec):
    if mc.r_min is not None and mc.r_max is not None:
        return _LogUniformDensity(mc.r_min, mc.r_max)
    return _CauchyDensity(mc.importance_scale)


def nz_position_space(field, mc: McSpec, *, alpha: float = _ALPHA_DEFAULT,
                      density=None) -> McResult:
    """Monte Carlo estimate of the position-space functional.

    ``field`` maps an (n, 3) position array to a pair ``(D, H)`` of
    (n, 3) arrays (either may be all zeros).  The pair is sampled as
    (r1 ~ density, r2 = r1 + delta) with |delta| uniform up to the pair
    radius, which cancels the 1/|r1-r2|^2 kernel; the symmetrized weight

        2 / [ p(r1) + p(r2) ]

    keeps the variance finite when r2 lands in a region the density covers
    strongly (balance-heuristic mixture of the two orderings; unbiased for
    the symmetric integrand).  Fixed seed => identical estimate.
    """
    rng = np.random.default_rng(mc.seed)
    density = density or _density_from_spec(mc)
    log_mode = mc.r_min is not None and mc.r_max is not None
    default_pair = 2.0 * mc.r_max if log_mode else 24.0 * mc.importance_scale
    pair_radius = mc.pair_radius or default_pair

    batch_means = np.empty(mc.batches)
    per_batch = mc.samples // mc.batches
    for ib in range(mc.batches):
        r1 = density.sample(rng, per_batch)
        if mc.pair_law == "uniform":
            # |delta| ~ U(0, R): q3 = 1/(4 pi R d^2) cancels the pair kernel
            mag = pair_radius * rng.uniform(0.0, 1.0, per_batch)
            kernel_weight = 4.0 * math.pi * pair_radius * np.ones(per_batch)
        else:
            # |delta| log-uniform in [pair_min, R]: q3 = 1/(4 pi Ld d^3);
            # one power of |delta| survives against the 1/|delta|^2 kernel
            span = math.log(pair_radius / mc.pair_min)
            mag = mc.pair_min * (pair_radius / mc.pair_min) ** rng.uniform(0.0, 1.0, per_batch)
            kernel_weight = 4.0 * math.pi * span * mag
        delta = mag[:, None] * _isotropic_directions(rng, per_batch)
        r2 = r1 + delta
        d1, h1 = field(r1)
        d2, h2 = field(r2)
        dot = np.einsum("ij,ij->i", np.asarray(d1), np.asarray(d2)) \
            + np.einsum("ij,ij->i", np.asarray(h1), np.asarray(h2))
        if not np.all(np.isfinite(dot)):
            raise ValueError("field sampler returned non-finite vectors")
        weight = 2.0 * kernel_weight / (density.pdf(r1) + density.pdf(r2))
        batch_means[ib] = np.mean((alpha / math.pi) * dot * weight)

    value = float(batch_means.mean())
    stderr = float(batch_means.std(ddof=1) / math.sqrt(mc.batches))
    return McResult(value, stderr, mc.samples, mc.batches)


# -- loop fields (complete elliptic integrals by AGM) -----------------------

def _elliptic_ke(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Complete elliptic integrals K(m), E(m) for parameter m in [0, 1)."""
    m = np.clip(np.asarray(m, dtype=np.float64), 0.0, 1.0 - 1e-15)
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    c2sum = 0.5 * m.copy()  # 2^(n-1) c_n^2 accumulated, n = 0 term
    pow2 = 1.0
    for _ in range(60):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        pow2 *= 2.0
        c2sum += 0.5 * pow2 * c * c
        if np.all(c < 1e-17):
            break
    K = math.pi / (2.0 * a)
    E = K * (1.0 - c2sum)
    return K, E


def loop_field_sampler(loop: CurrentLoop):
    """Sampler of (D=0, H) for a circular loop, geometric units.

    Standard cylindrical-coordinate expressions in terms of K and E; the
    on-axis limit is handled explicitly.
    """
    a = loop.radius_m
    pref = loop.current_a / (2.0 * math.pi * ELEMENTARY_CHARGE * SPEED_OF_LIGHT)

    def field(pos: np.ndarray):
        pos = np.asarray(pos, dtype=np.float64)
        x, y, z = pos[:, 0], pos[:, 1], pos[:, 2]
        rho = np.hypot(x, y)
        denom_sq = (a + rho) ** 2 + z * z
        denom = np.sqrt(denom_sq)
        m = 4.0 * a * rho / denom_sq
        K, E = _elliptic_ke(m)
        near_sq = (a - rho) ** 2 + z * z
        near_sq = np.maximum(near_sq, (1e-12 * a) ** 2)
        h_rho = np.where(
            rho > 1e-12 * a,
            pref * z / np.where(rho > 1e-12 * a, rho, 1.0) / denom
            * (-K + E * (a * a + rho * rho + z * z) / near_sq),
            0.0,
        )
        h_z = pref / denom * (K + E * (a * a - rho * rho - z * z) / near_sq)
        cos_p = np.where(rho > 0.0, x / np.where(rho > 0.0, rho, 1.0), 0.0)
        sin_p = np.where(rho > 0.0, y / np.where(rho > 0.0, rho, 1.0), 0.0)
        h = np.stack([h_rho * cos_p, h_rho * sin_p, h_z], axis=1)
        return np.zeros_like(h), h

    return field


def hydrogen_d_sampler(atom: HydrogenAtom, exclude_below: float = 0.0):
    """Sampler of (D, H=0) for hydrogen; radii below ``exclude_below``
    return zero (their contribution is restored by quadrature)."""

    def field(pos: np.ndarray):
        pos = np.asarray(pos, dtype=np.float64)
        r = np.linalg.norm(pos, axis=1)
        mag = np.zeros_like(r)
        for i, ri in enumerate(r):
            if ri > exclude_below:
                dphi, _ = potential_derivs(atom, float(ri))
                mag[i] = -dphi / ri
        d = mag[:, None] * pos
        return d, np.zeros_like(d)

    return field


def sphere_pair_d_sampler(pair: SpherePair):
    """Sampler of (D, H=0) for the two charged shells: each shell
    contributes its exterior Coulomb field and nothing inside itself."""
    half = 0.5 * pair.separation_d
    q = pair.charge_over_e
    a = pair.radius_a

    def field(pos: np.ndarray):
        pos = np.asarray(pos, dtype=np.float64)
        d = np.zeros_like(pos)
        for center_z, sign in ((-half, +1.0), (half, -1.0)):
            rel = pos.copy()
            rel[:, 2] -= center_z
            dist = np.linalg.norm(rel, axis=1)
            outside = dist > a
            distc = np.where(outside, dist, 1.0)
            d += np.where(outside[:, None],
                          sign * q * rel / (4.0 * math.pi * distc**3)[:, None], 0.0)
        return d, np.zeros_like(d)

    return field


def nz_loop_position_space(loop: CurrentLoop, mc: McSpec | None = None,
                           *, alpha: float = _ALPHA_DEFAULT) -> McResult:
    """Position-space route for the loop: the sampling density mixes the
    single-scale isotropic law with a wire-hugging torus component, which
    bounds the weights against the 1/distance field divergence at the
    conductor."""
    mc = mc or McSpec(importance_scale=loop.radius_m)
    a = loop.radius_m
    density = _MixtureDensity(
        _CauchyDensity(mc.importance_scale),
        _TorusDensity(a, core=a / 200.0, d_max=a / 2.0),
        weights=[0.5, 0.5],
    )
    return nz_position_space(loop_field_sampler(loop), mc, alpha=alpha,
                             density=density)


def _radial_dd_kernel(r: np.ndarray, rp: float) -> np.ndarray:
    """Angular pair kernel for radial fields:

        K(r, r') = int dO dO' (r^.r'^)/|r - r'|^2
                 = 8 pi^2 [ A ln((A+B)/(A-B)) - 2B ] / B^2,
        A = r^2 + r'^2,  B = 2 r r'.
    """
    A = r * r + rp * rp
    B = 2.0 * r * rp
    ratio = (r + rp) ** 2 / np.maximum((r - rp) ** 2, 1e-300)
    return 8.0 * math.pi**2 * (A * np.log(ratio) - 2.0 * B) / (B * B)


def _interior_dd_correction(atom: HydrogenAtom, r_outer_max: float,
                            rel_tol: float = 1e-6) -> float:
    """(alpha/pi) x the pair integral over the region where either point is
    inside the proton -- too rare for the sampler, cheap for quadrature."""
    c = atom.constants
    a, b = c.proton_a, c.bohr_b

    def d_mag(r: float) -> float:
        dphi, _ = potential_derivs(atom, r)
        return -dphi

    def outer_integrand(rs: np.ndarray) -> np.ndarray:
        out = np.empty_like(rs)
        for i, r in enumerate(rs):
            if r <= 0.0:
                out[i] = 0.0
                continue
            dmag_r = d_mag(float(r))

            def inner(rp: np.ndarray) -> np.ndarray:
                vals = np.empty_like(rp)
                for j, rpj in enumerate(rp):
                    vals[j] = d_mag(float(rpj)) * rpj * rpj \
                        * _radial_dd_kernel(np.array(float(r)), float(rpj))
                return vals

            # r' over everything, log singularity at r' = r isolated by a
            # breakpoint; factor 2 counts (in, out) pairs both ways, the
            # (in, in) double-count is corrected below
            spec = QuadSpec(rel_tol=rel_tol, abs_tol=1e-300,
                            breakpoints=tuple(sorted({float(r), a, b, 10.0 * b})),
                            max_subdivisions=4000)
            full = integrate(inner, 0.0, r_outer_max, spec).value
            spec_in = QuadSpec(rel_tol=rel_tol, abs_tol=1e-300,
                               breakpoints=(float(r),) if 0 < r < a else (),
                               max_subdivisions=2000)
            inside = integrate(inner, 0.0, a, spec_in).value
            out[i] = dmag_r * r * r * (2.0 * full - inside)
        return out

    spec_o = QuadSpec(rel_tol=rel_tol, abs_tol=1e-300, max_subdivisions=400,
                      breakpoints=(a / 2.0,))
    res = integrate(outer_integrand, 0.0, a, spec_o)
    return (c.alpha / math.pi) * res.value


def _close_pair_dd_correction(atom: HydrogenAtom, delta_min: float,
                              r_min: float, r_max: float) -> float:
    """Pairs closer than delta_min, restored as (alpha/pi) 4 pi delta (int D^2):

        (alpha/pi) * delta_min * int_rmin^rmax  q(r)^2 / r^2  dr,

    with q(r) the enclosed charge; exact to O(delta_min^3) curvature terms.
    """
    c = atom.constants

    def integrand(rs: np.ndarray) -> np.ndarray:
        out = np.empty_like(rs)
        for i, r in enumerate(rs):
            dphi, _ = potential_derivs(atom, float(r))
            q = 4.0 * math.pi * r * r * (-dphi)
            out[i] = q * q / (r * r)
        return out

    spec = QuadSpec(rel_tol=1e-8, abs_tol=1e-300,
                    breakpoints=(c.bohr_b / 100.0, c.bohr_b, 10.0 * c.bohr_b),
                    max_subdivisions=3000)
    res = integrate(integrand, r_min, r_max, spec)
    return (c.alpha / math.pi) * delta_min * res.value


def hydrogen_h_sampler(atom: HydrogenAtom):
    """Sampler of (D=0, H) for hydrogen (bounded everywhere, r > 0)."""
    from .fields import h_field

    def field(pos: np.ndarray):
        pos = np.asarray(pos, dtype=np.float64)
        h = np.empty_like(pos)
        for i, p in enumerate(pos):
            h[i] = h_field(atom, p)
        return np.zeros_like(h), h

    return field


def _h_square_radial_density(atom: HydrogenAtom, r: float) -> float:
    """Angular average 1/(4 pi) int dOmega |H|^2 at radius r, from
    H = -r u af' r^ + (r af' + 2 af) z^ (u = cos theta):

        <|H|^2> = (r af')^2/3 + (r af' + 2 af)^2 - 2 r af'(r af' + 2 af)/3.
    """
    from .fields import potentials
    af = potentials(atom, r).a_frak
    _, daf = potential_derivs(atom, r)
    ra = r * daf
    axial = ra + 2.0 * af
    return ra * ra / 3.0 + axial * axial - 2.0 * ra * axial / 3.0


def _close_pair_hh_correction(atom: HydrogenAtom, delta_min: float,
                              r_min: float, r_max: float) -> float:
    """Pairs closer than delta_min: (alpha/pi) 4 pi delta int |H|^2 d3r."""
    c = atom.constants

    def integrand(rs: np.ndarray) -> np.ndarray:
        out = np.empty_like(rs)
        for i, r in enumerate(rs):
            out[i] = 4.0 * math.pi * r * r * _h_square_radial_density(atom, float(r))
        return out

    spec = QuadSpec(rel_tol=1e-8, abs_tol=1e-300,
                    breakpoints=(c.proton_a, c.bohr_b / 100.0, c.bohr_b,
                                 10.0 * c.bohr_b),
                    max_subdivisions=3000)
    res = integrate(integrand, r_min, r_max, spec)
    return (c.alpha / math.pi) * 4.0 * math.pi * delta_min * res.value


def nz_hydrogen_magnetic_position_space(atom: HydrogenAtom,
                                        mc: McSpec | None = None,
                                        *, alpha: float | None = None) -> McResult:
    """Position-space route for the hydrogen magnetic number.

    The moment-current field is bounded, so no interior exclusion is
    needed; only the sub-floor pair separations are restored by
    quadrature.  Radii below the sampling floor contribute O((r_min/a)^3)
    and are neglected.
    """
    c = atom.constants
    alpha = c.alpha if alpha is None else alpha
    if mc is None or mc.r_min is None or mc.r_max is None:
        base = mc or McSpec(samples=64_000)
        mc = McSpec(samples=base.samples, seed=base.seed,
                    importance_scale=c.proton_a,
                    r_min=c.proton_a / 30.0, r_max=30.0 * c.bohr_b,
                    pair_law="log", pair_min=c.proton_a / 30.0,
                    batches=base.batches)
    est = nz_position_space(hydrogen_h_sampler(atom), mc, alpha=alpha)
    pair_min = mc.pair_min if mc.pair_min is not None else mc.r_min
    corr = _close_pair_hh_correction(atom, pair_min, mc.r_min, mc.r_max)
    return McResult(est.value + corr, est.stderr, est.samples, est.batches)


def nz_hydrogen_electric_position_space(atom: HydrogenAtom,
                                        mc: McSpec | None = None,
                                        *, alpha: float | None = None) -> McResult:
    """Position-space route for the hydrogen electric number.

    Monte Carlo over pairs with both radii in [a, 50 b]: log-uniform radii
    AND log-uniform pair separations, so the logarithmic stack of decades
    between the proton and Bohr radii is sampled evenly.  Two deterministic
    quadrature remainders are added: pairs with either point inside the
    proton, and pairs closer than the separation floor.
    """
    c = atom.constants
    alpha = c.alpha if alpha is None else alpha
    if mc is None or mc.r_min is None or mc.r_max is None:
        base = mc or McSpec()
        mc = McSpec(samples=base.samples, seed=base.seed,
                    importance_scale=c.bohr_b,
                    r_min=c.proton_a, r_max=50.0 * c.bohr_b,
                    pair_law="log", pair_min=c.proton_a / 10.0,
                    batches=base.batches)
    if mc.pair_law != "log":
        mc = McSpec(samples=mc.samples, seed=mc.seed,
                    importance_scale=mc.importance_scale,
                    r_min=mc.r_min, r_max=mc.r_max,
                    pair_radius=mc.pair_radius,
                    pair_law="log", pair_min=mc.r_min / 10.0,
                    batches=mc.batches)
    sampler = hydrogen_d_sampler(atom, exclude_below=mc.r_min)
    est = nz_position_space(sampler, mc, alpha=alpha)
    pair_min = mc.pair_min if mc.pair_min is not None else mc.r_min / 10.0
    corr_interior = _interior_dd_correction(atom, r_outer_max=mc.r_max)
    corr_close = _close_pair_dd_correction(atom, pair_min, mc.r_min, mc.r_max)
    return McResult(est.value + corr_interior + corr_close,
                    est.stderr, est.samples, est.batches)


# ---------------------------------------------------------------------------
# spectrum audit
# ---------------------------------------------------------------------------

def _log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.geomspace(lo, hi, n)


def radial_fourier_deriv(f, k: float, *, breakpoints=(), rel_tol=1e-10,
                         abs_tol: float = 1e-300) -> float:
    """Numeric d/dk of the radial transform:

        sqrt(2/pi) int dr r f(r) [ r cos(kr)/k - sin(kr)/k^2 ]
            = -sqrt(2/pi) (k/3) int dr r^4 f(r) B(kr),

    where B is the uniform-ball factor 3(sin x - x cos x)/x^3.  The second
    form is used: it is free of the kr -> 0 cancellation between the two
    bracket terms.  ``abs_tol`` refers to the derivative value itself.
    """
    factor = math.sqrt(2.0 / math.pi) * k / 3.0
    spec = QuadSpec(rel_tol=rel_tol, abs_tol=max(abs_tol / factor, 1e-300),
                    breakpoints=tuple(sorted(set(breakpoints))),
                    oscillation_wavelength=2.0 * math.pi / k)
    res = integrate(
        lambda r: r**4 * f(r) * spectra.ball_form_factor(k * r),
        0.0, math.inf, spec)
    return -factor * res.value


def _audit_items(constants: PhysConst, points: int):
    """Yield (name, analytic(k), numeric(k), grid) audit entries."""
    atom = HydrogenAtom(constants=constants)
    a, b = constants.proton_a, constants.bohr_b
    grid_atomic = _log_grid(1e-2 / b, 1e2 / b, points)
    grid_proton = _log_grid(1e-2 / b, 10.0 / a, points)
    bps_e = (b / 100.0, b, 10.0 * b, 100.0 * b)
    bps_p = (a / 2.0, a)

    yield ("proton ball charge",
           lambda k: spectra.proton_charge_spectrum(constants, k),
           lambda k, tol: spectra.radial_fourier(
               lambda r: proton_density(constants, r), k,
               breakpoints=bps_p, abs_tol=tol).value,
           grid_proton)
    yield ("electron charge (dirac)",
           lambda k: spectra.electron_charge_spectrum(atom, k),
           lambda k, tol: spectra.radial_fourier(
               lambda r: electron_density(atom, r), k,
               breakpoints=bps_e, abs_tol=tol).value,
           grid_atomic)
    yield ("hydrogen total charge",
           lambda k: spectra.hydrogen_charge_spectrum(atom, k),
           lambda k, tol: spectra.radial_fourier(
               lambda r: charge_density(atom, r), k,
               breakpoints=tuple(sorted(bps_e + bps_p)), abs_tol=tol).value,
           grid_atomic)
    yield ("hydrogen current source",
           lambda k: spectra.hydrogen_chi_spectrum(atom, k),
           lambda k, tol: spectra.radial_fourier(
               lambda r: chi_source(atom, r), k,
               breakpoints=tuple(sorted(bps_e + bps_p)), abs_tol=tol).value,
           grid_atomic)
    yield ("proton moment current",
           lambda k: 12.0 * constants.mu_geom
           * spectra._half_sinc_sq(a * k) / (a * a) * (2.0 * math.pi) ** -1.5,
           lambda k, tol: spectra.radial_fourier(
               lambda r: np.where(r < a,
                                  3.0 * constants.mu_geom / (math.pi * a**4 * r), 0.0),
               k, breakpoints=bps_p, abs_tol=tol).value,
           grid_proton)
    yield ("hydrogen current derivative",
           lambda k: spectra.hydrogen_chi_spectrum_deriv(atom, k),
           lambda k, tol: radial_fourier_deriv(
               lambda r: chi_source(atom, r), k,
               breakpoints=tuple(sorted(bps_e + bps_p)), abs_tol=tol),
           grid_atomic)
    yield ("proton moment derivative",
           lambda k: 12.0 * constants.d_ratio
           * spectra._g3(a * k) * (2.0 * math.pi) ** -1.5,
           lambda k, tol: radial_fourier_deriv(
               lambda r: np.where(r < a,
                                  3.0 * constants.mu_geom / (math.pi * a**4 * r), 0.0),
               k, breakpoints=bps_p, abs_tol=tol),
           grid_proton)

    # thin spherical shell vs the surface-charge factor sin(ak)/(ak)
    width = 1e-4 * a
    r_in, r_out = a - width / 2.0, a + width / 2.0
    vol = 4.0 * math.pi / 3.0 * (r_out**3 - r_in**3)
    yield ("charged sphere surface",
           lambda k: (2.0 * math.pi) ** -1.5 * spectra.shell_form_factor(a * k),
           lambda k, tol: spectra.radial_fourier(
               lambda r: np.where((r >= r_in) & (r <= r_out), 1.0 / vol, 0.0),
               k, breakpoints=(r_in, r_out), abs_tol=tol).value,
           _log_grid(1e-2 / a, 10.0 / a, points))

    # loop current: J1 form vs the direct azimuthal integral
    loop = CurrentLoop(1.0, 1.0)

    def loop_numeric(kp: float, tol: float) -> float:
        factor = loop.radius_m * loop.current_a / ((2.0 * math.pi) ** 1.5 * kp)
        spec = QuadSpec(rel_tol=1e-11, abs_tol=max(tol / factor, 1e-300),
                        oscillation_wavelength=2.0 * math.pi / max(loop.radius_m * kp, 1.0))
        res = integrate(lambda p: np.cos(p) * np.sin(loop.radius_m * kp * np.cos(p)),
                        0.0, 2.0 * math.pi, spec)
        return factor * res.value

    yield ("loop current",
           lambda k: spectra.loop_current_spectrum(loop, k),
           loop_numeric,
           _log_grid(1e-2, 50.0, points))

    # noble-gas shells: Xe covers every distinct (n, l) in the roster
    xe = noble_gas("Xe", constants)
    for n, l, _occ in xe.shells:
        beta = 2.0 * xe.Z / (n * b)
        yield (f"Xe shell ({n},{l})",
               lambda k, nn=n, ll=l: spectra.shell_spectrum(xe, (nn, ll), k),
               lambda k, tol, nn=n, ll=l, bb=beta: spectra.radial_fourier(
                   lambda r: shell_density(xe, (nn, ll), r), k,
                   breakpoints=(0.1 / bb, 1.0 / bb, 10.0 / bb, 40.0 / bb),
                   abs_tol=tol).value,
               _log_grid(beta / 100.0, 30.0 * beta, points))
    a_nuc = xe.nuclear_radius_m
    beta_max = 2.0 * xe.Z / b
    # total-charge grid capped where the numeric transform of the full cloud
    # still resolves its oscillations; the nucleus factor is audited to high
    # k by the "proton ball" item (same closed form, rescaled radius)
    yield ("Xe total charge",
           lambda k: spectra.atom_charge_spectrum(xe, k),
           lambda k, tol: spectra.radial_fourier(
               lambda r: nuclear_density(xe, r)
               - sum(shell_density(xe, (n, l), r) for n, l, _ in xe.shells),
               k, breakpoints=(a_nuc / 2.0, a_nuc, b / 300.0, b / 10.0, b, 4.0 * b),
               abs_tol=tol).value,
           _log_grid(1e-1 / b, 2.0 * beta_max, points))


def spectrum_audit(constants: PhysConst | None = None, *, points: int = 30,
                   tolerance: float = 1e-6) -> dict:
    """Compare every analytic transform with its numeric counterpart.

    The numeric route is driven to an absolute target of 1e-12 x the
    spectrum peak, and the deviation at each grid point is measured
    relative to max(|value|, 1e-6 x peak): below one part per million of
    the peak no honest relative comparison survives double-precision
    quadrature, so such points are compared on the peak scale instead.
    ``passed`` is true when every pair stays within ``tolerance``.
    """
    constants = constants or PhysConst()
    entries = []
    for name, analytic, numeric, grid in _audit_items(constants, points):
        an = np.array([float(np.asarray(analytic(float(k))).ravel()[0]) for k in grid])
        peak = float(np.max(np.abs(an)))
        abs_target = max(peak, 1e-300) * 1e-12
        nu = np.array([numeric(float(k), abs_target) for k in grid])
        floor = max(peak, 1e-300) * 1e-6
        dev = np.abs(an - nu) / np.maximum(np.abs(an), floor)
        entries.append({
            "name": name,
            "max_rel_dev": float(np.max(dev)),
            "points": len(grid),
        })
    worst = max(e["max_rel_dev"] for e in entries)
    return {
        "entries": entries,
        "worst_rel_dev": worst,
        "tolerance": tolerance,
        "passed": bool(worst <= tolerance),
    }
