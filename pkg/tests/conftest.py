import pytest

from nz.sources import HydrogenAtom, PhysConst


@pytest.fixture(scope="session")
def constants():
    return PhysConst()


@pytest.fixture(scope="session")
def hydrogen(constants):
    return HydrogenAtom(constants=constants)


# derandomize hypothesis so the suite is reproducible run to run
try:
    from hypothesis import settings

    settings.register_profile("deterministic", derandomize=True)
    settings.load_profile("deterministic")
except ImportError:  # pragma: no cover
    pass
