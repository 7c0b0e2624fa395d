import random

import pytest

from comodkit.coalgebra import (
    Coalgebra,
    make_grouplike,
    make_matrix_coalgebra,
    make_trivial,
)
from comodkit.comodule import Comodule, free_comodule
from comodkit.linalg import RMatrix, RingSpec

Z2 = RingSpec(2)
Z3 = RingSpec(3)
Z4 = RingSpec(4)


def graded_comodule(ring=Z2, grades=2):
    """The standard test instance: one basis vector per grouplike grade."""
    return free_comodule(make_grouplike(ring, grades), 1)


def trivial_comodule(ring, rank):
    """A free module with the scalar coaction of the rank-1 coalgebra."""
    return free_comodule(make_trivial(ring), rank)


def triangular_coalgebra(ring=Z2):
    """The coalgebra of upper triangular 2x2 coordinates: two grouplike
    corners and an off-diagonal element splitting across them."""
    flat = [0] * 27
    flat[(0 * 3 + 0) * 3 + 0] = 1  # corner 1 is grouplike
    flat[(0 * 3 + 1) * 3 + 1] = 1  # off-diagonal: corner1 (x) off + off (x) corner2
    flat[(1 * 3 + 2) * 3 + 1] = 1
    flat[(2 * 3 + 2) * 3 + 2] = 1  # corner 2 is grouplike
    return Coalgebra(ring, 3, RMatrix(ring, 9, 3, tuple(flat)), (1, 0, 1))


def coregular_comodule(ring=Z2):
    """A rank-3 comodule over the triangular coalgebra whose induced module
    structure is the regular one: the subcomodule lattice is the left ideal
    lattice, which is CS but neither continuous nor quasi-continuous."""
    c = triangular_coalgebra(ring)
    flat = [0] * 27
    flat[(0 * 3 + 0) * 3 + 0] = 1  # b1 -> b1 (x) corner1
    flat[(1 * 3 + 0) * 3 + 1] = 1  # b2 -> b2 (x) corner1
    flat[(1 * 3 + 1) * 3 + 2] = 1  # b3 -> b2 (x) off + b3 (x) corner2
    flat[(2 * 3 + 2) * 3 + 2] = 1
    return Comodule(c, 3, RMatrix(ring, 9, 3, tuple(flat)))


def catalog_instances():
    """Small named comodules covering the constructor catalog; comodule
    ranks stay at or below three so whole-ring sweeps stay fast."""
    return [
        ("trivial-z2-r1", trivial_comodule(Z2, 1)),
        ("trivial-z2-r2", trivial_comodule(Z2, 2)),
        ("trivial-z3-r2", trivial_comodule(Z3, 2)),
        ("trivial-z4-r1", trivial_comodule(Z4, 1)),
        ("trivial-z4-r2", trivial_comodule(Z4, 2)),
        ("graded-z2", graded_comodule(Z2, 2)),
        ("graded-z3", graded_comodule(Z3, 2)),
        ("graded-z4", graded_comodule(Z4, 2)),
        ("graded3-z2", graded_comodule(Z2, 3)),
        ("graded3-z3", graded_comodule(Z3, 3)),
        ("zero-z4", Comodule(make_trivial(Z4), 0, RMatrix(Z4, 0, 0, ()))),
    ]


@pytest.fixture
def rng():
    return random.Random(20240811)
