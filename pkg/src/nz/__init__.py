"""Photon-number measure of electromagnetic field strength.

A library and CLI that evaluates the dimensionless functional

    N = 2 pi alpha * integral d3k / k  ( |D(k)|^2 + |H(k)|^2 )

for classical sources (oppositely charged sphere pair, circular current
loop) and atomic sources (relativistic hydrogen ground state, noble-gas
atoms), cross-validating every closed form against independent numerical
routes.  Fields are measured in geometric units (1/m^2): D/e and H/(e c).
"""

from .sources import (
    PhysConst,
    SpherePair,
    CurrentLoop,
    HydrogenAtom,
    NobleGasAtom,
    noble_gas,
    NOBLE_GASES,
)
from .quadrature import QuadSpec, QuadResult, integrate, integrate_double_radial
from .zeldovich import (
    NzBreakdown,
    EnergyBreakdown,
    NonConvergenceError,
    nz_sphere_pair,
    nz_loop,
    nz_hydrogen_electric,
    nz_hydrogen_magnetic,
    nz_atom_electric,
    nz_generic,
    field_energy,
)

__version__ = "0.1.0"

__all__ = [
    "PhysConst",
    "SpherePair",
    "CurrentLoop",
    "HydrogenAtom",
    "NobleGasAtom",
    "noble_gas",
    "NOBLE_GASES",
    "QuadSpec",
    "QuadResult",
    "integrate",
    "integrate_double_radial",
    "NzBreakdown",
    "EnergyBreakdown",
    "NonConvergenceError",
    "nz_sphere_pair",
    "nz_loop",
    "nz_hydrogen_electric",
    "nz_hydrogen_magnetic",
    "nz_atom_electric",
    "nz_generic",
    "field_energy",
    "__version__",
]
