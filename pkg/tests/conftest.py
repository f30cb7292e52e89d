import pytest

from kgraphck.degree import Degree
from kgraphck.kgraph import Edge, SkeletonSpec, validate
from kgraphck.boundary import omega


@pytest.fixture(scope="session")
def g1():
    """Single vertex, one loop of each color; the rank-2 free commuting pair."""
    return validate(
        SkeletonSpec(
            2,
            ("v",),
            (Edge("b", 1, "v", "v"), Edge("r", 2, "v", "v")),
            (("b", "r", "r", "b"),),
        )
    )


@pytest.fixture(scope="session")
def omega11():
    return omega(2, Degree(1, 1))


@pytest.fixture(scope="session")
def omega21():
    return omega(2, Degree(2, 1))


@pytest.fixture(scope="session")
def omega13():
    return omega(1, Degree(3))


@pytest.fixture(scope="session")
def omega12():
    return omega(1, Degree(2))


@pytest.fixture(scope="session")
def parallel_square():
    """Two vertices joined by one edge of each color, with a tail.

    The two distinct paths v <- u of degrees (1,0) and (0,1) share range and
    source, so the vertex path at v fails aperiodicity; with the sole
    exhaustive family {g, h} at v this breaks condition (C).
    """
    return validate(
        SkeletonSpec(
            2,
            ("u", "v", "w"),
            (
                Edge("e", 1, "u", "v"),
                Edge("f", 2, "u", "v"),
                Edge("g", 2, "v", "w"),
                Edge("h", 1, "v", "w"),
            ),
            (("e", "g", "f", "h"),),
        )
    )
