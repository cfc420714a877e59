import pytest

from fibretransport.instances import make_instance


@pytest.fixture(scope="session")
def perm():
    return make_instance("perm-c3")


@pytest.fixture(scope="session")
def fol():
    return make_instance("foliation-2sec")


@pytest.fixture(scope="session")
def par():
    return make_instance("parallelization-flat")


@pytest.fixture(scope="session")
def sphere():
    # step 1e-3 everywhere; tests that need other steps rebuild their own
    return make_instance("sphere-levi-civita")
