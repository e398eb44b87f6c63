import pytest

from depthkit.fpmodule import FPModule, Ring


@pytest.fixture
def S2():
    return Ring.polynomial(2)


@pytest.fixture
def S3():
    return Ring.polynomial(3)


@pytest.fixture
def hyper_xy():
    """F_p[x,y]/(xy), the standard non-rigid hypersurface."""
    return Ring(["x", "y"], ["x*y"])


def cyclic(ring, *gens):
    return FPModule.cyclic(ring, list(gens))
