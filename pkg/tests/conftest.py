import pytest

from frenetplan.scenarios import bundled_scenario


@pytest.fixture(scope="session")
def u_road_polyline():
    return bundled_scenario("u_road").polyline()


@pytest.fixture(scope="session")
def fig3b_polyline():
    return bundled_scenario("fig3b").polyline()


@pytest.fixture(scope="session")
def straight_polyline():
    return bundled_scenario("straight").polyline()
