import random

import pytest

from edenca.geometry import coset_set_from_offsets
from edenca.spaces import DihedralSpace, GridSpace, PermutationSpace, SquareSymmetrySpace

MOORE = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]
VON_NEUMANN = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture(scope="session")
def line():
    return GridSpace(1, extent=100000)


@pytest.fixture(scope="session")
def plane():
    return GridSpace(2, extent=100000)


@pytest.fixture(scope="session")
def p4m():
    return SquareSymmetrySpace(extent=100000)


@pytest.fixture(scope="session")
def dihedral8():
    return DihedralSpace(8)


@pytest.fixture(scope="session")
def perm_s4():
    # S4 on 4 points: nontrivial stabiliser of size 6
    return PermutationSpace(4, [(1, 2, 3, 0), (1, 0, 2, 3)])


@pytest.fixture(scope="session")
def moore_plane(plane):
    return coset_set_from_offsets(plane, MOORE)


@pytest.fixture(scope="session")
def moore_p4m(p4m):
    return coset_set_from_offsets(p4m, MOORE)


def random_cell(space, rng, radius=6):
    if space.kind == "zd":
        return tuple(rng.randint(-radius, radius) for _ in range(space.dims))
    if space.kind == "p4m":
        return (rng.randint(-radius, radius), rng.randint(-radius, radius))
    return rng.randrange(len(space.cells()))


def random_element(space, rng, radius=6):
    if space.kind == "zd":
        return tuple(rng.randint(-radius, radius) for _ in range(space.dims))
    if space.kind == "p4m":
        return (rng.randint(-radius, radius), rng.randint(-radius, radius),
                rng.randrange(8))
    if space.kind == "dihedral":
        return (rng.randrange(space.n), rng.randrange(2))
    return rng.choice(space.elements)
