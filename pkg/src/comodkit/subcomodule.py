"""Subcomodules, the subcomodule lattice, quotients and their morphisms.

A subcomodule is held by the Howell canonical generator matrix of its
underlying submodule (rows are elements of the ambient comodule), so
equality of subcomodules is matrix equality.  Subcomodules of a free
carrier need not be free, so morphisms between them are represented by
coefficient matrices over the generators, canonicalized modulo the
relation module of the target.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .comodule import Comodule, ensure_valid_comodule
from .linalg import (
    DEFAULT_MAX_ELEMENTS,
    CapExceeded,
    InternalCheckError,
    PreconditionError,
    RMatrix,
    ShapeError,
    all_vectors,
    express_in_span,
    howell,
    intersect_rowspans,
    kernel,
    span_contains,
    span_elements,
    span_size,
    vstack,
)


@dataclass(frozen=True)
class Subcomodule:
    """A coaction-closed submodule in canonical form."""

    ambient: Comodule
    gens: RMatrix  # Howell form, rows are elements of the ambient module

    def __post_init__(self):
        if self.gens.cols != self.ambient.rank:
            raise ShapeError("generator width must match the ambient rank")

    @property
    def ring(self):
        return self.ambient.ring

    def size(self) -> int:
        return span_size(self.gens)

    @property
    def is_zero(self) -> bool:
        return self.gens.rows == 0

    @property
    def is_full(self) -> bool:
        return self.size() == self.ambient.size()

    def contains_vector(self, v: tuple[int, ...]) -> bool:
        return span_contains(self.gens, v)

    def contains(self, other: Subcomodule) -> bool:
        return all(self.contains_vector(r) for r in other.gens.rows_list())

    def elements(self, cap: int = DEFAULT_MAX_ELEMENTS):
        return span_elements(self.gens, cap)

    def generator_rows(self) -> list[tuple[int, ...]]:
        return self.gens.rows_list()

    @cached_property
    def relations(self) -> RMatrix:
        """Howell generators of the relation module among the generators."""
        return kernel(self.gens)

    @cached_property
    def coaction_coords(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """coaction_coords[s][k]: coordinates of the k-th coaction slice of
        generator s, expressed over the generators.  Existence is exactly
        coaction closure."""
        out = []
        for row in self.gens.rows_list():
            slices = self.ambient.coaction_slices(row)
            per_gen = []
            for sl in slices:
                coeffs = express_in_span(self.gens, sl)
                if coeffs is None:
                    raise InternalCheckError("subcomodule is not coaction closed")
                per_gen.append(coeffs)
            out.append(tuple(per_gen))
        return tuple(out)

    def sort_key(self):
        return (self.gens.rows, self.gens.entries)


def coaction_closed(ambient: Comodule, h: RMatrix) -> bool:
    """Whether the row span of the Howell matrix h is closed under the
    coaction, checked slice by slice."""
    for row in h.rows_list():
        for sl in ambient.coaction_slices(row):
            if not span_contains(h, sl):
                return False
    return True


def try_subcomodule(ambient: Comodule, rows: RMatrix) -> Subcomodule | None:
    """Canonicalize the rows; None when the span is not coaction closed."""
    h = howell(rows).matrix
    if not coaction_closed(ambient, h):
        return None
    return Subcomodule(ambient, h)


def subcomodule(ambient: Comodule, rows: RMatrix) -> Subcomodule:
    sub = try_subcomodule(ambient, rows)
    if sub is None:
        raise PreconditionError("row span is not coaction closed")
    return sub


def zero_subcomodule(m: Comodule) -> Subcomodule:
    return Subcomodule(m, RMatrix(m.ring, 0, m.rank, ()))


def full_subcomodule(m: Comodule) -> Subcomodule:
    return Subcomodule(m, howell(RMatrix.identity(m.ring, m.rank)).matrix)


def sub_sum(a: Subcomodule, b: Subcomodule) -> Subcomodule:
    if a.ambient != b.ambient:
        raise ShapeError("ambient mismatch")
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    return Subcomodule(a.ambient, howell(vstack(a.gens, b.gens)).matrix)


def sub_intersect(a: Subcomodule, b: Subcomodule) -> Subcomodule:
    if a.ambient != b.ambient:
        raise ShapeError("ambient mismatch")
    return Subcomodule(a.ambient, intersect_rowspans(a.gens, b.gens))


def generated_subcomodule(m: Comodule, x: tuple[int, ...]) -> Subcomodule:
    """The span of the full dual-algebra orbit of x.

    For a free coalgebra this span is closed under the coaction, which is
    asserted rather than assumed.
    """
    from .comodule import dual_action_matrices

    rows = [act.apply(x) for act in dual_action_matrices(m)]
    h = howell(RMatrix.from_rows(m.ring, rows)).matrix if rows else RMatrix(m.ring, 0, m.rank, ())
    if not coaction_closed(m, h):
        raise InternalCheckError("dual orbit span is not coaction closed")
    return Subcomodule(m, h)


# ---------------------------------------------------------------------------
# Lattice enumeration
# ---------------------------------------------------------------------------

def all_submodule_matrices(m: Comodule, cap: int = DEFAULT_MAX_ELEMENTS) -> list[RMatrix]:
    """Howell matrices of all submodules of the underlying module.

    Breadth-first closure over single-generator extensions; complete because
    every submodule is reached by adding its elements one at a time.
    """
    vectors = [v for v in all_vectors(m.ring, m.rank, cap) if any(v)]
    zero = RMatrix(m.ring, 0, m.rank, ())
    seen = {zero}
    frontier = [zero]
    while frontier:
        s = frontier.pop()
        for v in vectors:
            if span_contains(s, v):
                continue
            grown = howell(vstack(s, RMatrix(m.ring, 1, m.rank, v))).matrix
            if grown not in seen:
                if len(seen) >= cap:
                    raise CapExceeded("submodule lattice", len(seen) + 1, cap)
                seen.add(grown)
                frontier.append(grown)
    return sorted(seen, key=lambda h: (h.rows, h.entries))


def subcomodule_lattice(m: Comodule, cap: int = DEFAULT_MAX_ELEMENTS) -> list[Subcomodule]:
    """All coaction-closed submodules, deterministically ordered.

    Enumerates every submodule and filters by coaction closure, so the
    result is complete whenever it returns at all.
    """
    ensure_valid_comodule(m)
    nodes = [
        Subcomodule(m, h)
        for h in all_submodule_matrices(m, cap)
        if coaction_closed(m, h)
    ]
    return sorted(nodes, key=Subcomodule.sort_key)


# ---------------------------------------------------------------------------
# Quotient comodules (presented, not re-based)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientComodule:
    """The quotient of a comodule by a subcomodule, kept as a presentation.

    Elements are canonical coset representatives (reduced against the
    divisor's Howell form); the induced coaction is applied slice-wise on
    representatives.  Generators are the images of the ambient basis and
    the relation matrix is the divisor's generator matrix.
    """

    ambient: Comodule
    divisor: Subcomodule

    def __post_init__(self):
        if self.divisor.ambient != self.ambient:
            raise ShapeError("divisor lives in a different ambient comodule")

    @property
    def ring(self):
        return self.ambient.ring

    @property
    def relations(self) -> RMatrix:
        return self.divisor.gens

    def generator_images(self) -> list[tuple[int, ...]]:
        m = self.ambient.rank
        return [self.rep(tuple(1 if i == j else 0 for j in range(m)))
                for i in range(m)]

    def rep(self, v: tuple[int, ...]) -> tuple[int, ...]:
        """Canonical coset representative of v."""
        return canonical_rep(self.divisor.gens, v)

    def add(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        n = self.ring.modulus
        return self.rep(tuple((x + y) % n for x, y in zip(a, b)))

    def scale(self, c: int, a: tuple[int, ...]) -> tuple[int, ...]:
        n = self.ring.modulus
        return self.rep(tuple((c * x) % n for x in a))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ambient.rank

    def size(self) -> int:
        return self.ambient.size() // self.divisor.size()

    def elements(self, cap: int = DEFAULT_MAX_ELEMENTS) -> list[tuple[int, ...]]:
        """All canonical representatives, enumerated directly."""
        size = self.size()
        if size > cap:
            raise CapExceeded("quotient sweep", size, cap)
        n = self.ring.modulus
        m = self.ambient.rank
        bound = [n] * m
        for row in self.divisor.gens.rows_list():
            j = next(i for i, x in enumerate(row) if x)
            bound[j] = row[j]
        out = [v for v in itertools.product(*(range(b) for b in bound))]
        if len(out) != size:
            raise InternalCheckError("quotient representative count mismatch")
        return out

    def coaction_slices(self, v: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Induced coaction of a representative, one representative per slot.
        Well defined because the divisor is coaction closed."""
        return [self.rep(sl) for sl in self.ambient.coaction_slices(v)]


def canonical_rep(h: RMatrix, v: tuple[int, ...]) -> tuple[int, ...]:
    """Reduce v against a Howell form: the unique representative of v's
    coset with every pivot-column entry reduced below its pivot."""
    n = h.ring.modulus
    rem = list(x % n for x in v)
    for i in range(h.rows):
        row = h.row_vec(i)
        j = next(k for k, x in enumerate(row) if x)
        q = rem[j] // row[j]
        if q:
            rem = [(x - q * y) % n for x, y in zip(rem, row)]
    return tuple(rem)


def quotient_comodule(m: Comodule, s: Subcomodule) -> QuotientComodule:
    if s.ambient != m:
        raise ShapeError("subcomodule of a different comodule")
    return QuotientComodule(m, s)


# ---------------------------------------------------------------------------
# Morphisms between subcomodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubMorphism:
    """A comodule morphism between subcomodules.

    ``coeffs`` is a p_source x p_target coefficient matrix: row s holds the
    coordinates of the image of source generator s over the target
    generators, canonicalized modulo the target relations.  Two coefficient
    matrices describe the same morphism iff their canonical forms agree.
    """

    source: Subcomodule
    target: Subcomodule
    coeffs: RMatrix

    def apply(self, v: tuple[int, ...]) -> tuple[int, ...]:
        gamma = express_in_span(self.source.gens, v)
        if gamma is None:
            raise PreconditionError("element is not in the source subcomodule")
        row = RMatrix(self.source.ring, 1, len(gamma), gamma)
        return ((row @ self.coeffs) @ self.target.gens).row_vec(0)

    def image_generator_rows(self) -> RMatrix:
        """Images of the source generators as ambient row vectors."""
        if self.source.gens.rows == 0:
            return RMatrix(self.source.ring, 0, self.target.ambient.rank, ())
        return self.coeffs @ self.target.gens

    def image(self) -> Subcomodule:
        h = howell(self.image_generator_rows()).matrix
        return Subcomodule(self.target.ambient, h)

    def is_injective(self) -> bool:
        return self.image().size() == self.source.size()

    def is_bijective(self) -> bool:
        return self.image().size() == self.source.size() == self.target.size()

    def is_zero(self) -> bool:
        return self.image_generator_rows().is_zero


def canonical_coeffs(target: Subcomodule, coeffs: RMatrix) -> RMatrix:
    rel = target.relations
    if rel.rows == 0 or coeffs.rows == 0:
        return coeffs
    rows = [canonical_rep(rel, r) for r in coeffs.rows_list()]
    return RMatrix.from_rows(coeffs.ring, rows)


def sub_morphism(source: Subcomodule, target: Subcomodule, coeffs: RMatrix) -> SubMorphism:
    return SubMorphism(source, target, canonical_coeffs(target, coeffs))


def compose(outer: SubMorphism, inner: SubMorphism) -> SubMorphism:
    """outer after inner."""
    if inner.target != outer.source:
        raise ShapeError("composition mismatch")
    return sub_morphism(inner.source, outer.target, inner.coeffs @ outer.coeffs)


def sub_identity(w: Subcomodule) -> SubMorphism:
    return sub_morphism(w, w, RMatrix.identity(w.ring, w.gens.rows))


def sub_add(a: SubMorphism, b: SubMorphism) -> SubMorphism:
    if a.source != b.source or a.target != b.target:
        raise ShapeError("sum of morphisms with different end points")
    return sub_morphism(a.source, a.target, a.coeffs + b.coeffs)


def sub_sub(a: SubMorphism, b: SubMorphism) -> SubMorphism:
    if a.source != b.source or a.target != b.target:
        raise ShapeError("difference of morphisms with different end points")
    return sub_morphism(a.source, a.target, a.coeffs - b.coeffs)


@dataclass(frozen=True)
class SubHomSpace:
    """All comodule morphisms between two subcomodules.

    ``solution_span`` is the Howell form of the full solution module in
    flattened coefficient space; distinct morphisms are obtained by
    canonicalizing representatives against the target relations.
    """

    source: Subcomodule
    target: Subcomodule
    solution_span: RMatrix

    def elements(self, cap: int = DEFAULT_MAX_ELEMENTS) -> list[SubMorphism]:
        p_src = self.source.gens.rows
        p_tgt = self.target.gens.rows
        seen = {}
        for flat in span_elements(self.solution_span, cap):
            coeffs = RMatrix(self.source.ring, p_src, p_tgt, flat)
            mor = sub_morphism(self.source, self.target, coeffs)
            seen.setdefault(mor.coeffs.entries, mor)
        return [seen[k] for k in sorted(seen)]

    def contains(self, mor: SubMorphism) -> bool:
        return span_contains(self.solution_span, mor.coeffs.entries)


def sub_hom_space(a: Subcomodule, b: Subcomodule) -> SubHomSpace:
    """Solve for all comodule morphisms a -> b.

    Unknown: the coefficient matrix over generators.  Equations: source
    relations must map into target relations, and the coaction slices of
    every generator must intertwine.
    """
    if a.ambient.coalgebra != b.ambient.coalgebra:
        raise ShapeError("subcomodules over different coalgebras")
    ring = a.ring
    p_a, p_b = a.gens.rows, b.gens.rows
    amb_b = b.ambient
    r = a.ambient.coalgebra.rank
    rel_a = a.relations
    gamma = a.coaction_coords

    def condition_rows(coeffs: RMatrix) -> tuple[int, ...]:
        out = []
        # well-definedness: every source relation must annihilate the images
        if rel_a.rows and p_b:
            defect = (rel_a @ coeffs) @ b.gens
            out.extend(defect.entries)
        elif rel_a.rows:
            out.extend([0] * (rel_a.rows * amb_b.rank))
        # intertwining on each generator and coalgebra slot
        for s in range(p_a):
            img = (RMatrix(ring, 1, p_a, tuple(1 if t == s else 0 for t in range(p_a)))
                   @ coeffs @ b.gens).row_vec(0) if p_b else (0,) * amb_b.rank
            slices = amb_b.coaction_slices(img)
            for k in range(r):
                lhs = slices[k]
                g_row = RMatrix(ring, 1, p_a, gamma[s][k])
                rhs = ((g_row @ coeffs) @ b.gens).row_vec(0) if p_b else (0,) * amb_b.rank
                out.extend((x - y) % ring.modulus for x, y in zip(lhs, rhs))
        return tuple(out)

    unknowns = p_a * p_b
    rows = []
    for a_idx in range(p_a):
        for b_idx in range(p_b):
            e = RMatrix(ring, p_a, p_b,
                        tuple(1 if (i, j) == (a_idx, b_idx) else 0
                              for i in range(p_a) for j in range(p_b)))
            rows.append(condition_rows(e))
    if unknowns == 0:
        # only the zero morphism: empty coefficient space
        return SubHomSpace(a, b, RMatrix(ring, 0, 0, ()))
    stacked = RMatrix.from_rows(ring, rows)
    return SubHomSpace(a, b, kernel(stacked))


@dataclass(frozen=True)
class SubEndRing:
    """The endomorphism ring of a subcomodule, enumerated."""

    space: SubHomSpace

    @property
    def sub(self) -> Subcomodule:
        return self.space.source

    def elements(self, cap: int = DEFAULT_MAX_ELEMENTS) -> list[SubMorphism]:
        return self.space.elements(cap)

    def identity(self) -> SubMorphism:
        return sub_identity(self.sub)

    def idempotents(self, cap: int = DEFAULT_MAX_ELEMENTS) -> list[SubMorphism]:
        out = [t for t in self.elements(cap)
               if compose(t, t).coeffs == t.coeffs]
        return out

    def is_unit(self, t: SubMorphism) -> bool:
        return t.is_bijective()

    def inverse(self, t: SubMorphism) -> SubMorphism | None:
        """Two-sided inverse inside the ring, or None.

        Solves for a preimage of each generator; the inverse of a bijective
        comodule morphism is itself a comodule morphism, which is verified.
        """
        if not self.is_unit(t):
            return None
        w = self.sub
        p = w.gens.rows
        from .linalg import solve

        stacked = vstack(t.coeffs, w.relations) if w.relations.rows else t.coeffs
        ident = RMatrix.identity(w.ring, p)
        sol = solve(stacked.transpose(), ident.transpose())
        if sol is None:
            raise InternalCheckError("bijective morphism without preimages")
        inv_rows = [tuple(sol.col_vec(s)[:p]) for s in range(p)]
        inv = sub_morphism(w, w, RMatrix.from_rows(w.ring, inv_rows) if p else
                           RMatrix(w.ring, 0, 0, ()))
        ident_m = self.identity()
        if compose(inv, t).coeffs != ident_m.coeffs or compose(t, inv).coeffs != ident_m.coeffs:
            raise InternalCheckError("inverse verification failed")
        if not self.space.contains(inv):
            raise InternalCheckError("inverse escapes the endomorphism ring")
        return inv


def sub_end_ring(w: Subcomodule) -> SubEndRing:
    return SubEndRing(sub_hom_space(w, w))


def restrict_endomorphism(t: RMatrix, w: Subcomodule) -> SubMorphism | None:
    """Restriction of an ambient endomorphism matrix to an invariant
    subcomodule; None when the subcomodule is not invariant under t."""
    rows = []
    for g in w.generator_rows():
        img = t.apply(g)
        coeffs = express_in_span(w.gens, img)
        if coeffs is None:
            return None
        rows.append(coeffs)
    p = w.gens.rows
    coeffs = RMatrix.from_rows(w.ring, rows) if rows else RMatrix(w.ring, 0, p, ())
    if coeffs.cols != p:
        coeffs = RMatrix(w.ring, 0, p, ())
    return sub_morphism(w, w, coeffs)


def invariant_under(t: RMatrix, w: Subcomodule) -> bool:
    return all(w.contains_vector(t.apply(g)) for g in w.generator_rows())


def maps_to_zero(t: RMatrix, w: Subcomodule) -> bool:
    return all(not any(t.apply(g)) for g in w.generator_rows())


def acts_as_identity(t: RMatrix, w: Subcomodule) -> bool:
    return all(t.apply(g) == g for g in w.generator_rows())


# ---------------------------------------------------------------------------
# Isomorphism testing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoWitness:
    forward: SubMorphism
    inverse: SubMorphism


def comodule_iso(a: Subcomodule, b: Subcomodule,
                 cap: int = DEFAULT_MAX_ELEMENTS) -> IsoWitness | None:
    """An invertible comodule morphism a -> b with verified comodule inverse,
    or None once the whole morphism space has been exhausted."""
    if a.ambient.coalgebra != b.ambient.coalgebra:
        raise ShapeError("subcomodules over different coalgebras")
    if a.size() != b.size():
        return None
    space = sub_hom_space(a, b)
    back_space = None
    for t in space.elements(cap):
        if not t.is_bijective():
            continue
        inv_rows = []
        for g in b.generator_rows():
            gamma = _preimage_coeffs(t, g)
            if gamma is None:
                raise InternalCheckError("bijective morphism without preimages")
            inv_rows.append(gamma)
        p_a = a.gens.rows
        coeffs = (RMatrix.from_rows(b.ring, inv_rows)
                  if inv_rows else RMatrix(b.ring, 0, p_a, ()))
        inv = sub_morphism(b, a, coeffs)
        if back_space is None:
            back_space = sub_hom_space(b, a)
        if not back_space.contains(inv):
            raise InternalCheckError("inverse escapes the morphism space")
        if compose(inv, t).coeffs != sub_identity(a).coeffs:
            raise InternalCheckError("left inverse verification failed")
        if compose(t, inv).coeffs != sub_identity(b).coeffs:
            raise InternalCheckError("right inverse verification failed")
        return IsoWitness(t, inv)
    return None


def _preimage_coeffs(t: SubMorphism, target_vec: tuple[int, ...]) -> tuple[int, ...] | None:
    """Source coordinates gamma with t(gamma . source gens) == target_vec."""
    from .linalg import solve

    a = t.source
    b = t.target
    p_a = a.gens.rows
    tgt_coeffs = express_in_span(b.gens, target_vec)
    if tgt_coeffs is None:
        return None
    rel_b = b.relations
    stacked = vstack(t.coeffs, rel_b) if rel_b.rows else t.coeffs
    target = RMatrix(b.ring, 1, b.gens.rows, tgt_coeffs)
    sol = solve(stacked.transpose(), target.transpose())
    if sol is None:
        return None
    return tuple(sol.col_vec(0)[:p_a])
