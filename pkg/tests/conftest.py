import random

import pytest

from pcohom.fixtures import dihedral_example, fixture1, fixture2, fixture3, two_orbit_example


@pytest.fixture
def f1():
    return fixture1()


@pytest.fixture
def f2():
    return fixture2()


@pytest.fixture
def f3():
    return fixture3()


@pytest.fixture(params=["fixture1", "fixture2", "fixture3", "two_orbit", "dihedral"])
def any_action(request):
    return {
        "fixture1": fixture1,
        "fixture2": fixture2,
        "fixture3": fixture3,
        "two_orbit": two_orbit_example,
        "dihedral": dihedral_example,
    }[request.param]()


@pytest.fixture
def rng():
    return random.Random(1234)
