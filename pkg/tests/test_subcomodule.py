import itertools

import pytest

from comodkit.comodule import Comodule, free_comodule
from comodkit.coalgebra import make_grouplike, make_trivial
from comodkit.linalg import (
    PreconditionError,
    RMatrix,
    all_vectors,
    howell,
    span_elements,
)
from comodkit.subcomodule import (
    all_submodule_matrices,
    canonical_rep,
    coaction_closed,
    comodule_iso,
    compose,
    full_subcomodule,
    generated_subcomodule,
    quotient_comodule,
    restrict_endomorphism,
    sub_end_ring,
    sub_hom_space,
    sub_identity,
    sub_intersect,
    sub_sum,
    subcomodule,
    subcomodule_lattice,
    try_subcomodule,
    zero_subcomodule,
)

from conftest import Z2, Z3, Z4, graded_comodule, trivial_comodule


def brute_submodules(m):
    """All submodules via spans of every generator subset up to the rank."""
    vectors = list(all_vectors(m.ring, m.rank))
    spans = set()
    for k in range(m.rank + 1):
        for subset in itertools.combinations(vectors, k):
            mat = (RMatrix.from_rows(m.ring, list(subset)) if subset
                   else RMatrix(m.ring, 0, m.rank, ()))
            spans.add(howell(mat).matrix)
    return spans


def test_submodule_enumeration_matches_subset_oracle():
    for m in [graded_comodule(), trivial_comodule(Z4, 1), trivial_comodule(Z3, 2)]:
        assert set(all_submodule_matrices(m)) == brute_submodules(m)


def test_graded_lattice_is_four_nodes():
    lat = subcomodule_lattice(graded_comodule())
    gens = [s.gens.rows_list() for s in lat]
    assert gens == [[], [(0, 1)], [(1, 0)], [(1, 0), (0, 1)]]


def test_antidiagonal_line_not_coaction_closed():
    m = graded_comodule()
    assert try_subcomodule(m, RMatrix.from_rows(Z2, [[1, 1]])) is None
    with pytest.raises(PreconditionError):
        subcomodule(m, RMatrix.from_rows(Z2, [[1, 1]]))


def test_z4_lattice():
    lat = subcomodule_lattice(trivial_comodule(Z4, 1))
    assert [s.gens.rows_list() for s in lat] == [[], [(1,)], [(2,)]]


def test_lattice_matches_closure_filter():
    # oracle: filter ALL submodules by slice-wise coaction closure
    for m in [graded_comodule(), trivial_comodule(Z4, 2), graded_comodule(Z3, 2)]:
        lat = {s.gens for s in subcomodule_lattice(m)}
        expected = {h for h in brute_submodules(m) if coaction_closed(m, h)}
        assert lat == expected


def test_zero_and_full_always_present():
    for m in [graded_comodule(), trivial_comodule(Z4, 2)]:
        lat = subcomodule_lattice(m)
        assert zero_subcomodule(m) in lat
        assert full_subcomodule(m) in lat


def test_sum_intersection_stay_in_lattice():
    m = trivial_comodule(Z4, 2)
    lat = subcomodule_lattice(m)
    lat_set = {s.gens for s in lat}
    for a in lat:
        for b in lat:
            assert sub_sum(a, b).gens in lat_set
            assert sub_intersect(a, b).gens in lat_set


def test_generated_subcomodule_examples():
    m = graded_comodule()
    assert generated_subcomodule(m, (0, 0)).is_zero
    assert generated_subcomodule(m, (1, 1)).is_full
    t = trivial_comodule(Z2, 2)
    assert generated_subcomodule(t, (1, 0)).gens.rows_list() == [(1, 0)]


def test_quotient_presentation_and_elements():
    m = graded_comodule()
    s = subcomodule(m, RMatrix.from_rows(Z2, [[1, 0]]))
    q = quotient_comodule(m, s)
    assert q.size() == 2
    assert q.elements() == [(0, 0), (0, 1)]
    assert q.relations == s.gens
    # induced coaction is the graded one on the surviving generator
    slices = q.coaction_slices((0, 1))
    assert slices == [(0, 0), (0, 1)]


def test_canonical_rep_uniqueness():
    m = trivial_comodule(Z4, 2)
    s = subcomodule(m, RMatrix.from_rows(Z4, [[2, 0]]))
    q = quotient_comodule(m, s)
    reps = {q.rep(v) for v in all_vectors(Z4, 2)}
    assert len(reps) == q.size()
    for v in all_vectors(Z4, 2):
        diff = tuple((a - b) % 4 for a, b in zip(v, q.rep(v)))
        assert s.contains_vector(diff)


def test_sub_end_ring_of_nonfree_subcomodule():
    m = trivial_comodule(Z4, 1)
    two = subcomodule(m, RMatrix.from_rows(Z4, [[2]]))
    ring = sub_end_ring(two)
    elems = ring.elements()
    assert len(elems) == 2  # the endomorphisms of a two-element module
    assert len(ring.idempotents()) == 2


def test_sub_hom_respects_grading():
    m = graded_comodule()
    b1 = subcomodule(m, RMatrix.from_rows(Z2, [[1, 0]]))
    b2 = subcomodule(m, RMatrix.from_rows(Z2, [[0, 1]]))
    homs = sub_hom_space(b1, b2).elements()
    assert len(homs) == 1 and homs[0].is_zero()


def test_sub_hom_matches_elementwise_filter():
    # oracle: additive maps defined on generators, filtered by well-definedness
    # and the slice-wise intertwining law
    m = trivial_comodule(Z4, 1)
    two = subcomodule(m, RMatrix.from_rows(Z4, [[2]]))
    full = full_subcomodule(m)
    homs = sub_hom_space(two, full).elements()
    # maps 2Z/4 -> Z/4 are determined by the image of the generator, which
    # must be killed by 2: images 0 and 2
    images = sorted(h.apply((2,)) for h in homs)
    assert images == [(0,), (2,)]


def test_iso_witness_identity_and_refusals():
    m = graded_comodule()
    b1 = subcomodule(m, RMatrix.from_rows(Z2, [[1, 0]]))
    b2 = subcomodule(m, RMatrix.from_rows(Z2, [[0, 1]]))
    w = comodule_iso(b1, b1)
    assert w is not None
    assert compose(w.inverse, w.forward).coeffs == sub_identity(b1).coeffs
    assert comodule_iso(b1, b2) is None  # the grading kills every morphism
    m4 = trivial_comodule(Z4, 1)
    two = subcomodule(m4, RMatrix.from_rows(Z4, [[2]]))
    assert comodule_iso(two, full_subcomodule(m4)) is None  # sizes differ


def test_iso_found_between_isomorphic_lines():
    m = trivial_comodule(Z2, 2)
    l1 = subcomodule(m, RMatrix.from_rows(Z2, [[1, 0]]))
    l2 = subcomodule(m, RMatrix.from_rows(Z2, [[0, 1]]))
    w = comodule_iso(l1, l2)
    assert w is not None
    assert w.forward.is_bijective()
    assert compose(w.inverse, w.forward).coeffs == sub_identity(l1).coeffs
    assert compose(w.forward, w.inverse).coeffs == sub_identity(l2).coeffs


def test_restriction_of_global_endomorphism():
    m4 = trivial_comodule(Z4, 1)
    two = subcomodule(m4, RMatrix.from_rows(Z4, [[2]]))
    tripling = RMatrix.from_rows(Z4, [[3]])
    r = restrict_endomorphism(tripling, two)
    assert r is not None
    assert r.apply((2,)) == (2,)  # 3 * 2 == 2 mod 4
    # a map leaving the subcomodule is rejected
    m2 = graded_comodule()
    swap = RMatrix.from_rows(Z2, [[0, 1], [1, 0]])
    b1 = subcomodule(m2, RMatrix.from_rows(Z2, [[1, 0]]))
    assert restrict_endomorphism(swap, b1) is None


def test_rank_zero_comodule_lattice():
    z = Comodule(make_trivial(Z4), 0, RMatrix(Z4, 0, 0, ()))
    lat = subcomodule_lattice(z)
    assert len(lat) == 1
    assert lat[0].is_zero and lat[0].is_full
