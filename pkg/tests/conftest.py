import pytest

from hbmo_wdn.hydraulics import DesignStandards
from hbmo_wdn.network import bundled_path, load_catalog, load_network
from hbmo_wdn.objective import PenaltyFactors, Problem

# Published designs for the trunk. Two printed sizes (254.4 and 76.21) are not
# catalog entries and are read as 254.0 and 76.2.
PUBLISHED_MM = {
    "Trial 1": (203.2, 203.2, 101.6, 254.0, 101.6, 203.2, 76.2, 203.2, 152.4, 76.2),
    "Trial 2": (203.2, 203.2, 101.6, 152.4, 152.4, 152.4, 101.6, 152.4, 203.2, 76.2),
    "Trial 3": (254.0, 203.2, 152.4, 152.4, 101.6, 254.0, 152.4, 101.6, 101.6, 152.4),
    "Trial 4": (203.2, 203.2, 254.0, 203.2, 152.4, 152.4, 203.2, 152.4, 203.2, 25.4),
    "Trial 5": (254.0, 203.2, 203.2, 203.2, 152.4, 101.6, 101.6, 76.2, 101.6, 50.8),
    "Trial 6": (203.2, 254.0, 152.4, 203.2, 203.2, 101.6, 203.2, 254.0, 152.4, 76.2),
    "NWS&DB": (254.0, 203.2, 203.2, 152.4, 203.2, 101.6, 101.6, 76.2, 76.2, 76.2),
}
PUBLISHED_COST = {
    "Trial 1": 86090,
    "Trial 2": 84640,
    "Trial 3": 98090,
    "Trial 4": 88210,
    "Trial 5": 84520,
    "NWS&DB": 89110,
}


@pytest.fixture(scope="session")
def guru_network():
    return load_network(bundled_path("gurudeniya.network.json"))


@pytest.fixture(scope="session")
def guru_catalog():
    return load_catalog(bundled_path("gurudeniya.catalog.json"))


@pytest.fixture(scope="session")
def toy_network():
    return load_network(bundled_path("toy3.network.json"))


@pytest.fixture(scope="session")
def toy_catalog():
    return load_catalog(bundled_path("toy3.catalog.json"))


@pytest.fixture
def guru_problem(guru_network, guru_catalog):
    return Problem(guru_network, guru_catalog, DesignStandards(), PenaltyFactors(5000))


@pytest.fixture
def toy_problem(toy_network, toy_catalog):
    return Problem(toy_network, toy_catalog, DesignStandards(), PenaltyFactors(5000))


def genome_of(catalog, diameters_mm):
    return tuple(catalog.index_of(d) for d in diameters_mm)
