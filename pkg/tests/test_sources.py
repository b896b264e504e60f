import math

import numpy as np
import pytest

from nz.quadrature import QuadSpec, integrate
from nz.sources import (
    NOBLE_GASES,
    HydrogenAtom,
    NobleGasAtom,
    PhysConst,
    charge_density,
    chi_source,
    electron_current_prefactor,
    electron_density,
    noble_gas,
    nuclear_density,
    nuclear_radius,
    proton_current_prefactor,
    proton_density,
    shell_density,
)

# frozen 50-digit evaluation of the relativistic density at r = b
RHO_E_AT_B = 2.9100433460098912e+29


def test_constants_internal_consistency(constants):
    assert constants.bohr_b == pytest.approx(constants.lambda_bar / constants.alpha,
                                             rel=3e-3)
    assert constants.s_ratio == pytest.approx(1.6e-5, rel=5e-3)
    assert constants.d_ratio == pytest.approx(0.68, rel=5e-3)
    assert 0.999 < constants.gamma_rel < 1.0


def test_constants_override_file(tmp_path):
    path = tmp_path / "const.txt"
    path.write_text("# comment line\nmu_geom = 2.94e-16\nalpha=7.3e-3\n")
    c = PhysConst.from_file(path)
    assert c.mu_geom == 2.94e-16
    assert c.alpha == 7.3e-3
    assert c.bohr_b == PhysConst().bohr_b  # untouched defaults survive


def test_constants_override_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("speed_of_light = 3e8\n")
    with pytest.raises(ValueError, match="unknown constant"):
        PhysConst.from_file(path)


def _radial_integral(f, breakpoints, rel_tol=1e-11, abs_tol=1e-300):
    spec = QuadSpec(rel_tol=rel_tol, abs_tol=abs_tol, breakpoints=breakpoints,
                    max_subdivisions=20000)
    return integrate(f, 0.0, math.inf, spec)


def test_electron_density_normalization(hydrogen):
    b = hydrogen.constants.bohr_b
    res = _radial_integral(
        lambda r: 4.0 * math.pi * r**2 * electron_density(hydrogen, np.maximum(r, 1e-300)),
        (b / 100.0, b, 10.0 * b, 100.0 * b))
    assert res.value == pytest.approx(1.0, rel=1e-10)


def test_electron_density_nonrelativistic_form(constants):
    atom = HydrogenAtom(constants=constants, relativistic=False)
    b = constants.bohr_b
    for r in [0.3 * b, b, 4.0 * b]:
        expected = math.exp(-2.0 * r / b) / (math.pi * b**3)
        assert electron_density(atom, r) == pytest.approx(expected, rel=1e-13)


def test_electron_density_relativistic_frozen_value(hydrogen):
    assert electron_density(hydrogen, hydrogen.constants.bohr_b) == pytest.approx(
        RHO_E_AT_B, rel=1e-12)


def test_current_to_density_ratio_is_alpha_over_r(hydrogen):
    c = hydrogen.constants
    for r in [c.proton_a, c.bohr_b / 7.0, 3.0 * c.bohr_b]:
        ratio = electron_current_prefactor(hydrogen, r) / electron_density(hydrogen, r)
        assert ratio == pytest.approx(c.alpha / r, rel=1e-13)


def test_current_prefactor_nonrelativistic_value(constants):
    atom = HydrogenAtom(constants=constants, relativistic=False)
    b = constants.bohr_b
    expected = constants.alpha * math.exp(-2.0) / (math.pi * b**4)
    assert electron_current_prefactor(atom, b) == pytest.approx(expected, rel=1e-13)


def test_electron_orbital_moment(hydrogen):
    # (1/2) int |r x (-j_e)| d3r = (alpha/2)(8 pi/3) int r^3 rho_e dr
    #                            = lambda_bar (2g + 1)/6
    c = hydrogen.constants
    res = _radial_integral(
        lambda r: 0.5 * c.alpha * (8.0 * math.pi / 3.0) * r**3
        * electron_density(hydrogen, np.maximum(r, 1e-300)),
        (c.bohr_b / 100.0, c.bohr_b, 10.0 * c.bohr_b, 100.0 * c.bohr_b))
    # alpha * b, not the separately quoted lambda_bar: the rounded
    # constants differ by 7.8e-5 and the integral is built from alpha and b
    expected = c.alpha * c.bohr_b * (2.0 * hydrogen.gamma + 1.0) / 6.0
    assert res.value == pytest.approx(expected, rel=1e-9, abs=0.0)


def test_proton_density_unit_charge(constants):
    a = constants.proton_a
    res = integrate(lambda r: 4.0 * math.pi * r**2 * proton_density(constants, r),
                    0.0, 2.0 * a, QuadSpec(breakpoints=(a,)))
    assert res.value == pytest.approx(1.0, rel=1e-12)
    assert proton_density(constants, 1.01 * a) == 0.0


def test_proton_moment_is_mu(constants):
    # (1/2) int |r x j_p| d3r with j_p = {-y, x, 0}/r q(r): the moment
    # density is (x^2+y^2) q(r)/r, whose angular average gives
    # (1/2)(8 pi/3) int r^3 q(r) dr = mu
    a = constants.proton_a
    res = integrate(
        lambda r: 0.5 * (8.0 * math.pi / 3.0) * r**3
        * proton_current_prefactor(constants, r),
        0.0, 2.0 * a, QuadSpec(breakpoints=(a,)))
    assert res.value == pytest.approx(constants.mu_geom, rel=1e-12, abs=0.0)


def test_global_neutrality_everywhere():
    hyd = HydrogenAtom()
    b = hyd.constants.bohr_b
    # the integral is exactly zero, so convergence must be driven by an
    # absolute target, not a relative one
    res = _radial_integral(
        lambda r: 4.0 * math.pi * r**2 * charge_density(hyd, np.maximum(r, 1e-300)),
        (hyd.constants.proton_a, b / 100.0, b, 10.0 * b, 100.0 * b),
        abs_tol=1e-12)
    assert abs(res.value) <= 1e-10
    for symbol, atom in NOBLE_GASES.items():
        total = atom.Z * 0.0
        a_nuc = atom.nuclear_radius_m

        def rho(r, atom=atom):
            out = nuclear_density(atom, r)
            for n, l, _occ in atom.shells:
                out = out - shell_density(atom, (n, l), np.maximum(r, 1e-300))
            return out

        res = _radial_integral(
            lambda r: 4.0 * math.pi * r**2 * rho(r),
            (a_nuc, b / 300.0, b / 10.0, b, 5.0 * b),
            abs_tol=1e-12 * atom.Z)
        assert abs(res.value) <= 1e-10 * atom.Z, symbol


def test_densities_nonnegative(hydrogen):
    c = hydrogen.constants
    rs = np.geomspace(c.proton_a / 10.0, 100.0 * c.bohr_b, 200)
    assert np.all(electron_density(hydrogen, rs) >= 0.0)
    assert np.all(proton_density(c, rs) >= 0.0)
    xe = noble_gas("Xe")
    for n, l, _occ in xe.shells:
        assert np.all(shell_density(xe, (n, l), rs) >= 0.0)


def test_shell_occupancy_normalization():
    xe = noble_gas("Xe")
    b = xe.constants.bohr_b
    for n, l, occ in xe.shells:
        beta = 2.0 * xe.Z / (n * b)
        res = _radial_integral(
            lambda r: 4.0 * math.pi * r**2
            * shell_density(xe, (n, l), np.maximum(r, 1e-300)),
            (0.1 / beta, 1.0 / beta, 10.0 / beta, 60.0 / beta))
        assert res.value == pytest.approx(occ, rel=1e-10), (n, l)


def test_shell_density_1s_reduces_to_hydrogenic():
    he = noble_gas("He")
    b = he.constants.bohr_b
    Z = he.Z
    for r in [0.1 * b / Z, b / Z, 3.0 * b / Z]:
        expected = 2.0 * Z**3 * math.exp(-2.0 * Z * r / b) / (math.pi * b**3)
        assert shell_density(he, (1, 0), r) == pytest.approx(expected, rel=1e-12)


def test_shell_density_peak_location():
    # 2p shell: rho ~ q^2 e^-q with q = Z r / b, maximal at q = 2
    ne = noble_gas("Ne")
    b = ne.constants.bohr_b
    rs = np.linspace(0.5 * b / ne.Z, 4.0 * b / ne.Z, 20001)
    dens = shell_density(ne, (2, 1), rs)
    r_peak = rs[int(np.argmax(dens))]
    assert r_peak == pytest.approx(2.0 * b / ne.Z, rel=1e-3, abs=0.0)


def test_relativistic_converges_to_nonrelativistic():
    # as alpha -> 0 (gamma -> 1) the Dirac density approaches the 1s form
    devs = []
    for alpha in [7.2973525693e-3, 1e-3, 1e-5]:
        c = PhysConst(alpha=alpha)
        rel = HydrogenAtom(constants=c, relativistic=True)
        nr = HydrogenAtom(constants=c, relativistic=False)
        rs = np.geomspace(0.01 * c.bohr_b, 10.0 * c.bohr_b, 50)
        dev = np.max(np.abs(electron_density(rel, rs) / electron_density(nr, rs) - 1.0))
        devs.append(dev)
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-8


def test_chi_source_composition(hydrogen):
    c = hydrogen.constants
    r = c.proton_a / 2.0
    expected = 3.0 * c.mu_geom / (math.pi * c.proton_a**4 * r) \
        - c.alpha * electron_density(hydrogen, r) / r
    assert chi_source(hydrogen, r) == pytest.approx(expected, rel=1e-13)
    r = 2.0 * c.proton_a
    assert chi_source(hydrogen, r) == pytest.approx(
        -c.alpha * electron_density(hydrogen, r) / r, rel=1e-13)


@pytest.mark.parametrize("A,expected", [
    (1, 1.2e-15),
    (8, 2.4e-15),
    (131, 1.2e-15 * 131.0 ** (1.0 / 3.0)),
])
def test_nuclear_radius(A, expected):
    assert nuclear_radius(A) == pytest.approx(expected, rel=1e-12, abs=0.0)


def test_noble_gas_roster_closed_shells():
    for symbol, atom in NOBLE_GASES.items():
        assert sum(occ for _n, _l, occ in atom.shells) == atom.Z
        for n, l, occ in atom.shells:
            assert occ == 2 * (2 * l + 1)
            assert l < n


def test_atom_validation_errors():
    with pytest.raises(ValueError, match="l < n"):
        NobleGasAtom("X", 2, 4, ((1, 1, 2),))
    with pytest.raises(ValueError, match="sum to"):
        NobleGasAtom("X", 3, 4, ((1, 0, 2),))
    with pytest.raises(ValueError, match="spherically symmetric"):
        NobleGasAtom("X", 4, 9, ((1, 0, 2), (2, 1, 2),))
    with pytest.raises(ValueError, match="unknown element"):
        noble_gas("Rn")


def test_partially_filled_s_shell_supported():
    # single-electron 1s configuration reuses the shell machinery
    h = NobleGasAtom("H", 1, 1, ((1, 0, 1),))
    b = h.constants.bohr_b
    res = _radial_integral(
        lambda r: 4.0 * math.pi * r**2 * shell_density(h, (1, 0), np.maximum(r, 1e-300)),
        (b / 10.0, b, 10.0 * b))
    assert res.value == pytest.approx(1.0, rel=1e-10)
