import pytest

from comodkit.coalgebra import (
    Coalgebra,
    InvalidStructureError,
    direct_sum,
    dual_algebra,
    make_grouplike,
    make_matrix_coalgebra,
    make_trivial,
    validate_coalgebra,
)
from comodkit.linalg import RMatrix, RingSpec

from conftest import Z2, Z3, Z4


@pytest.mark.parametrize("c", [
    make_trivial(Z4),
    make_grouplike(Z2, 2),
    make_grouplike(Z3, 3),
    make_matrix_coalgebra(Z2, 2),
    make_matrix_coalgebra(Z3, 2),
    direct_sum(make_trivial(Z2), make_grouplike(Z2, 2)),
    direct_sum(make_matrix_coalgebra(Z3, 2), make_trivial(Z3)),
])
def test_catalog_passes_validation(c):
    assert validate_coalgebra(c).ok


def test_trivial_coalgebra_axioms_by_hand():
    c = make_trivial(Z4)
    # rank 1 with the single basis element grouplike and counit one
    assert c.rank == 1
    assert c.delta.rows_list() == [(1,)]
    assert c.counit == (1,)
    assert validate_coalgebra(c).ok


def test_tampered_counit_reports_index():
    g = make_grouplike(Z2, 2)
    bad = Coalgebra(Z2, 2, g.delta, (1, 0))
    report = validate_coalgebra(bad)
    assert not report.ok
    fails = report.failures()
    assert all(f.axiom.startswith("counit") for f in fails)
    assert fails[0].violating_index == 2


def test_tampered_delta_breaks_coassociativity():
    c = make_grouplike(Z2, 2)
    # redirect the image of the second grouplike to a mixed tensor
    flat = list(c.delta.entries)
    flat[(1 * 2 + 1) * 2 + 1] = 0
    flat[(0 * 2 + 1) * 2 + 1] = 1
    bad = Coalgebra(Z2, 2, RMatrix(Z2, 4, 2, tuple(flat)), c.counit)
    report = validate_coalgebra(bad)
    assert not report.ok


def test_direct_sum_of_trivials_is_grouplike_pair():
    assert direct_sum(make_trivial(Z2), make_trivial(Z2)) == make_grouplike(Z2, 2)


def test_dual_of_trivial_is_base_ring():
    dual = dual_algebra(make_trivial(Z4))
    assert dual.basis_product(0, 0) == (1,)
    assert dual.unit == (1,)


@pytest.mark.parametrize("ring,g", [(Z2, 2), (Z2, 3), (Z3, 2), (Z3, 3)])
def test_grouplike_dual_is_diagonal(ring, g):
    dual = dual_algebra(make_grouplike(ring, g))
    for i in range(g):
        for j in range(g):
            expect = tuple(1 if (l == i and i == j) else 0 for l in range(g))
            assert dual.basis_product(i, j) == expect


@pytest.mark.parametrize("ring", [Z2, Z3])
def test_matrix_coalgebra_dual_is_matrix_product(ring):
    k = 2
    dual = dual_algebra(make_matrix_coalgebra(ring, k))
    for i in range(k):
        for j in range(k):
            for a in range(k):
                for b in range(k):
                    expect = [0] * (k * k)
                    if j == a:
                        expect[i * k + b] = 1
                    assert dual.basis_product(i * k + j, a * k + b) == tuple(expect)


def test_dual_of_direct_sum_is_block_product():
    c1 = make_grouplike(Z3, 2)
    c2 = make_trivial(Z3)
    dual = dual_algebra(direct_sum(c1, c2))
    d1 = dual_algebra(c1)
    d2 = dual_algebra(c2)
    r1 = c1.rank
    # within each block the product matches the summand's dual
    for i in range(r1):
        for j in range(r1):
            got = dual.basis_product(i, j)
            assert got[:r1] == d1.basis_product(i, j)
            assert not any(got[r1:])
    got = dual.basis_product(r1, r1)
    assert got[r1:] == d2.basis_product(0, 0)
    assert not any(got[:r1])
    # cross terms vanish
    for i in range(r1):
        assert not any(dual.basis_product(i, r1))
        assert not any(dual.basis_product(r1, i))


def test_dual_requires_valid_coalgebra():
    g = make_grouplike(Z2, 2)
    bad = Coalgebra(Z2, 2, g.delta, (1, 0))
    with pytest.raises(InvalidStructureError):
        dual_algebra(bad)


def test_convolution_general_elements_bilinear():
    dual = dual_algebra(make_grouplike(Z3, 2))
    g = (1, 2)
    h = (2, 2)
    # in a diagonal dual algebra the convolution is componentwise
    assert dual.convolve(g, h) == (2, 1)
    assert dual.convolve(dual.unit, g) == g
