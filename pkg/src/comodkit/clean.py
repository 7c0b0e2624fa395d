"""Cleanness of comodule endomorphism rings, with full witnesses.

An element is clean when it splits as unit plus idempotent inside the
endomorphism ring.  Every positive answer here carries a witness holding
the unit, the idempotent, and the four subcomodules of the associated
direct-sum decompositions; the witness re-verifies all of its invariants
from scratch on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .comodule import Comodule, EndRing, dual_action_matrices
from .linalg import (
    DEFAULT_MAX_ELEMENTS,
    CapExceeded,
    InternalCheckError,
    RMatrix,
    howell,
    inverse,
    is_unit_matrix,
    kernel,
    span_contains,
    all_vectors,
    span_elements,
    vstack,
    solve,
    hstack,
)
from .subcomodule import (
    Subcomodule,
    full_subcomodule,
    sub_intersect,
    sub_sum,
    subcomodule,
    try_subcomodule,
    zero_subcomodule,
)


def idempotents(ring: EndRing, cap: int = DEFAULT_MAX_ELEMENTS) -> list[RMatrix]:
    """All idempotent elements, in canonical matrix order."""
    out = [t for t in ring.elements(cap) if t @ t == t]
    out.sort(key=lambda t: t.entries)
    return out


def units(ring: EndRing, cap: int = DEFAULT_MAX_ELEMENTS) -> list[RMatrix]:
    """All units; each inverse is checked to lie back inside the ring."""
    out = []
    for t in ring.elements(cap):
        if not is_unit_matrix(t):
            continue
        inv = inverse(t)
        if not ring.contains(inv):
            raise InternalCheckError("matrix inverse of a unit escapes the ring")
        out.append(t)
    out.sort(key=lambda t: t.entries)
    return out


# ---------------------------------------------------------------------------
# Clean witnesses
# ---------------------------------------------------------------------------

def _image_sub(m: Comodule, t: RMatrix) -> Subcomodule:
    """Image of an endomorphism as a subcomodule."""
    h = howell(t.transpose()).matrix
    sub = try_subcomodule(m, h)
    if sub is None:
        raise InternalCheckError("image of a comodule morphism not coaction closed")
    return sub


def _kernel_sub(m: Comodule, t: RMatrix) -> Subcomodule:
    """Kernel of an endomorphism as a subcomodule."""
    h = kernel(t.transpose())
    sub = try_subcomodule(m, h)
    if sub is None:
        raise InternalCheckError("kernel of a comodule morphism not coaction closed")
    return sub


def _image_of_sub(t: RMatrix, s: Subcomodule) -> Subcomodule:
    """Image of a subcomodule under an ambient endomorphism."""
    if s.gens.rows == 0:
        return zero_subcomodule(s.ambient)
    rows = s.gens @ t.transpose()
    h = howell(rows).matrix
    sub = try_subcomodule(s.ambient, h)
    if sub is None:
        raise InternalCheckError("morphism image of a subcomodule not closed")
    return sub


@dataclass(frozen=True)
class CleanWitness:
    """A verified clean decomposition f = u + e with its induced geometry."""

    f: RMatrix
    u: RMatrix
    e: RMatrix
    a: Subcomodule  # kernel of e
    b: Subcomodule  # image of e
    x: Subcomodule  # u(a)
    y: Subcomodule  # u(b)

    def verify(self, ring: EndRing) -> list[str]:
        """Re-check every invariant from scratch; returns violations."""
        m = ring.comodule
        bad = []
        if self.u + self.e != self.f:
            bad.append("f != u + e")
        if self.e @ self.e != self.e:
            bad.append("e not idempotent")
        if not ring.contains(self.e) or not ring.contains(self.u):
            bad.append("decomposition leaves the endomorphism ring")
        if not is_unit_matrix(self.u):
            bad.append("u not invertible")
        else:
            inv = inverse(self.u)
            if not ring.contains(inv):
                bad.append("inverse of u is not a comodule morphism")
        if self.a != _kernel_sub(m, self.e):
            bad.append("a is not the kernel of e")
        if self.b != _image_sub(m, self.e):
            bad.append("b is not the image of e")
        if self.x != _image_of_sub(self.u, self.a):
            bad.append("x is not u(a)")
        if self.y != _image_of_sub(self.u, self.b):
            bad.append("y is not u(b)")
        full = full_subcomodule(m)
        if sub_sum(self.a, self.b) != full or not sub_intersect(self.a, self.b).is_zero:
            bad.append("a, b do not decompose the comodule")
        if sub_sum(self.x, self.y) != full or not sub_intersect(self.x, self.y).is_zero:
            bad.append("x, y do not decompose the comodule")
        ident = ring.identity_matrix()
        fa = _image_of_sub(self.f, self.a)
        if not self.x.contains(fa):
            bad.append("f does not map a into x")
        gb = _image_of_sub(ident - self.f, self.b)
        if not self.y.contains(gb):
            bad.append("1 - f does not map b into y")
        if fa != self.x or self.a.size() != self.x.size():
            bad.append("f restricted a -> x is not bijective")
        if gb != self.y or self.b.size() != self.y.size():
            bad.append("1 - f restricted b -> y is not bijective")
        return bad


def _witness_from_idempotent(ring: EndRing, f: RMatrix, e: RMatrix) -> CleanWitness:
    m = ring.comodule
    u = f - e
    a = _kernel_sub(m, e)
    b = _image_sub(m, e)
    return CleanWitness(f, u, e, a, b,
                        _image_of_sub(u, a), _image_of_sub(u, b))


def clean_element_detailed(ring: EndRing, f: RMatrix,
                           cap: int = DEFAULT_MAX_ELEMENTS
                           ) -> tuple[CleanWitness | None, int]:
    """Search all idempotents in canonical order; also returns how many
    idempotents were tried before success or exhaustion."""
    if not ring.contains(f):
        raise ValueError("element is not in the endomorphism ring")
    tried = 0
    for e in idempotents(ring, cap):
        tried += 1
        if not is_unit_matrix(f - e):
            continue
        w = _witness_from_idempotent(ring, f, e)
        bad = w.verify(ring)
        if bad:
            raise InternalCheckError(f"clean witness failed re-verification: {bad}")
        return w, tried
    return None, tried


def clean_element(ring: EndRing, f: RMatrix,
                  cap: int = DEFAULT_MAX_ELEMENTS) -> CleanWitness | None:
    return clean_element_detailed(ring, f, cap)[0]


@dataclass(frozen=True)
class CleanReport:
    ring_size: int
    idempotent_count: int
    unit_count: int
    witnesses: tuple[tuple[RMatrix, CleanWitness | None], ...]

    @property
    def is_clean(self) -> bool:
        return all(w is not None for _, w in self.witnesses)

    def non_clean_elements(self) -> list[RMatrix]:
        return [f for f, w in self.witnesses if w is None]


def clean_ring(ring: EndRing, cap: int = DEFAULT_MAX_ELEMENTS) -> CleanReport:
    """Clean verdict plus witness for every ring element.

    Finite rings are always clean, so a non-clean verdict here signals an
    implementation bug; the report exposes the offending elements so they
    can be dumped and minimized.
    """
    elems = ring.elements(cap)
    idems = idempotents(ring, cap)
    uts = units(ring, cap)
    witnesses = []
    for f in sorted(elems, key=lambda t: t.entries):
        witnesses.append((f, clean_element(ring, f, cap)))
    return CleanReport(len(elems), len(idems), len(uts), tuple(witnesses))


# ---------------------------------------------------------------------------
# The decomposition characterization of cleanness
# ---------------------------------------------------------------------------

def projection_idempotent(a: Subcomodule, b: Subcomodule) -> RMatrix:
    """The projection onto b along a, for a direct decomposition a (+) b.

    Built from the inclusion of b composed with the projection; solved as
    the unique matrix killing a's generators and fixing b's.
    """
    m = a.ambient
    cols_a = a.gens.transpose()
    cols_b = b.gens.transpose()
    src = hstack(cols_a, cols_b)
    tgt = hstack(RMatrix.zeros(m.ring, m.rank, a.gens.rows), cols_b)
    sol = solve(src.transpose(), tgt.transpose())
    if sol is None:
        raise InternalCheckError("projection onto a summand does not exist")
    return sol.transpose()


@dataclass(frozen=True)
class DecompositionEquivalence:
    """Outcome of checking the two characterizations of a clean element."""

    f: RMatrix
    clean_witness: CleanWitness | None
    decomposition: tuple[Subcomodule, Subcomodule, Subcomodule, Subcomodule] | None
    projection: RMatrix | None

    @property
    def via_clean(self) -> bool:
        return self.clean_witness is not None

    @property
    def via_decomposition(self) -> bool:
        return self.decomposition is not None

    @property
    def agree(self) -> bool:
        return self.via_clean == self.via_decomposition


def _restricts_bijectively(t: RMatrix, src: Subcomodule, dst: Subcomodule) -> bool:
    img = _image_of_sub(t, src)
    return img == dst and src.size() == dst.size()


def summand_pairs(lattice: list[Subcomodule]) -> list[tuple[Subcomodule, Subcomodule]]:
    """Ordered pairs of lattice nodes forming a direct decomposition."""
    if not lattice:
        return []
    m = lattice[0].ambient
    full = full_subcomodule(m)
    out = []
    for a in lattice:
        for b in lattice:
            if sub_intersect(a, b).is_zero and sub_sum(a, b) == full:
                out.append((a, b))
    return out


def decomposition_equivalence(ring: EndRing, f: RMatrix,
                              lattice: list[Subcomodule],
                              cap: int = DEFAULT_MAX_ELEMENTS,
                              pairs: list[tuple[Subcomodule, Subcomodule]] | None = None,
                              ) -> DecompositionEquivalence:
    """Run both characterizations of cleanness for f and insist they agree.

    (a) searches the ordered pairs of direct decompositions for one where f
    maps the first kernel-part bijectively onto some summand and 1 - f does
    the same on the second part; a restriction is bijective onto its image,
    so the candidate second decomposition is pinned to the two images and
    only those need testing.  (b) is the idempotent search.  When (a)
    succeeds, the projection idempotent built from the decomposition must
    itself be a comodule morphism making f minus it a unit.
    """
    ident = ring.identity_matrix()
    found = None
    if pairs is None:
        pairs = summand_pairs(lattice)
    f_images: dict[tuple, Subcomodule] = {}
    g_images: dict[tuple, Subcomodule] = {}
    for a, b in pairs:
        x = f_images.get(a.gens.entries)
        if x is None:
            x = _image_of_sub(f, a)
            f_images[a.gens.entries] = x
        if x.size() != a.size():
            continue
        y = g_images.get(b.gens.entries)
        if y is None:
            y = _image_of_sub(ident - f, b)
            g_images[b.gens.entries] = y
        if y.size() != b.size():
            continue
        if not sub_intersect(x, y).is_zero:
            continue
        # x, y are disjoint with |x| * |y| = |a| * |b| = |m|: a decomposition.
        found = (a, b, x, y)
        break
    witness = clean_element(ring, f, cap)
    if (found is not None) != (witness is not None):
        raise InternalCheckError(
            "decomposition search and clean search disagree"
        )
    projection = None
    if found is not None:
        a, b, x, y = found
        projection = projection_idempotent(a, b)
        if projection @ projection != projection:
            raise InternalCheckError("projection is not idempotent")
        if not ring.contains(projection):
            raise InternalCheckError("projection is not a comodule morphism")
        if not is_unit_matrix(f - projection):
            raise InternalCheckError("f minus the projection is not a unit")
    return DecompositionEquivalence(f, witness, found, projection)


# ---------------------------------------------------------------------------
# Annihilator hypothesis of the main theorem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnnihilatorEntry:
    element: tuple[int, ...]
    annihilator: RMatrix  # Howell generators inside the dual coordinate space
    nonzero: bool
    essential: bool


@dataclass(frozen=True)
class AnnihilatorReport:
    """Both readings of the annihilator hypothesis, side by side.

    ``literal_holds``: no nonzero element is annihilated by a nonzero left
    ideal (every annihilator is zero).  ``essential_holds``: no nonzero
    element has an essential annihilator among the left ideals of the dual
    algebra.  The second gates the main theorem checks.
    """

    entries: tuple[AnnihilatorEntry, ...]
    literal_holds: bool
    essential_holds: bool
    ideal_count: int


def left_ideals(m: Comodule, cap: int = DEFAULT_MAX_ELEMENTS) -> list[RMatrix]:
    """All left ideals of the dual algebra, as Howell matrices over its
    coordinate space."""
    from .coalgebra import dual_algebra

    dual = dual_algebra(m.coalgebra)
    r = m.coalgebra.rank
    ring = m.ring
    basis = [tuple(1 if t == k else 0 for t in range(r)) for k in range(r)]
    subs = _all_submodules_of_power(ring, r, cap)
    out = []
    for h in subs:
        closed = True
        for row in h.rows_list():
            for g in basis:
                if not span_contains(h, dual.convolve(g, row)):
                    closed = False
                    break
            if not closed:
                break
        if closed:
            out.append(h)
    return out


def _all_submodules_of_power(ring, length: int, cap: int) -> list[RMatrix]:
    vectors = [v for v in all_vectors(ring, length, cap) if any(v)]
    zero = RMatrix(ring, 0, length, ())
    seen = {zero}
    frontier = [zero]
    while frontier:
        s = frontier.pop()
        for v in vectors:
            if span_contains(s, v):
                continue
            grown = howell(vstack(s, RMatrix(ring, 1, length, v))).matrix
            if grown not in seen:
                if len(seen) >= cap:
                    raise CapExceeded("ideal lattice", len(seen) + 1, cap)
                seen.add(grown)
                frontier.append(grown)
    return sorted(seen, key=lambda h: (h.rows, h.entries))


def annihilator_condition(m: Comodule, cap: int = DEFAULT_MAX_ELEMENTS) -> AnnihilatorReport:
    """Annihilator of every nonzero element, with both hypothesis readings."""
    acts = dual_action_matrices(m)
    r = m.coalgebra.rank
    ring = m.ring
    ideals = left_ideals(m, cap)
    ideal_set = {h.entries: h for h in ideals}
    nonzero_ideals = [h for h in ideals if h.rows > 0]

    def is_essential_ideal(h: RMatrix) -> bool:
        if h.rows == 0:
            return not nonzero_ideals
        for other in nonzero_ideals:
            from .linalg import intersect_rowspans
            if intersect_rowspans(h, other).rows == 0:
                return False
        return True

    entries = []
    for x in all_vectors(ring, m.rank, cap):
        if not any(x):
            continue
        cols = [act.apply(x) for act in acts]
        mat = RMatrix.from_rows(ring, cols)  # row k = action of basis k on x
        ann = kernel(mat)
        if ann.entries not in ideal_set and ann.rows > 0:
            raise InternalCheckError("annihilator is not a left ideal")
        entries.append(AnnihilatorEntry(x, ann, ann.rows > 0, is_essential_ideal(ann)))
    literal = all(not e.nonzero for e in entries)
    essential = all(not e.essential for e in entries)
    return AnnihilatorReport(tuple(entries), literal, essential, len(ideals))
