"""Right comodules over a free coalgebra, with exact morphism solvers.

A comodule of rank m stores its coaction as an ``(m*r) x m`` matrix: column
j holds the coordinates of the coacted j-th basis element in the basis
``b_i (x) c_k`` with flat index ``i*r + k``.  Morphism spaces between free
comodules are computed as the kernel of one stacked linear system; the
endomorphism ring wraps the space with composition and an identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .coalgebra import (
    AxiomCheck,
    AxiomReport,
    Coalgebra,
    InvalidStructureError,
    ensure_valid_coalgebra,
    validate_coalgebra,
)
from .linalg import (
    DEFAULT_MAX_ELEMENTS,
    CapExceeded,
    InternalCheckError,
    RMatrix,
    ShapeError,
    express_in_span,
    howell,
    kernel,
    span_contains,
    span_elements,
    span_size,
)


@dataclass(frozen=True)
class Comodule:
    """A free right comodule: rank and coaction structure constants."""

    coalgebra: Coalgebra
    rank: int
    rho: RMatrix

    def __post_init__(self):
        m, r = self.rank, self.coalgebra.rank
        if m < 0:
            raise ShapeError("rank must be >= 0")
        if (self.rho.rows, self.rho.cols) != (m * r, m):
            raise ShapeError(f"rho must be {m * r}x{m}")
        if self.rho.ring != self.coalgebra.ring:
            raise ShapeError("rho ring mismatch")

    @property
    def ring(self):
        return self.coalgebra.ring

    def size(self) -> int:
        return self.ring.modulus ** self.rank

    def coact(self, x: tuple[int, ...]) -> tuple[int, ...]:
        """Coaction applied to a coordinate vector, flattened to length m*r."""
        return self.rho.apply(x)

    def coaction_slices(self, x: tuple[int, ...]) -> list[tuple[int, ...]]:
        """The coacted x split per coalgebra basis slot: r vectors of length m."""
        w = self.coact(x)
        r = self.coalgebra.rank
        return [tuple(w[i * r + k] for i in range(self.rank)) for k in range(r)]


def validate_comodule(m: Comodule) -> AxiomReport:
    """Counit compatibility and coassociativity compatibility of the coaction."""
    c = m.coalgebra
    r, mm = c.rank, m.rank
    ident_m = RMatrix.identity(m.ring, mm)
    eps = c.counit_row()
    checks = []
    lhs = ident_m.kron(eps) @ m.rho
    bad = None
    for j in range(mm):
        if lhs.col_vec(j) != ident_m.col_vec(j):
            bad = j
            break
    checks.append(AxiomCheck("counit", bad is None, None if bad is None else bad + 1))
    ident_r = RMatrix.identity(m.ring, r)
    left = m.rho.kron(ident_r) @ m.rho
    right = ident_m.kron(c.delta) @ m.rho
    bad = None
    for j in range(mm):
        if left.col_vec(j) != right.col_vec(j):
            bad = j
            break
    checks.append(AxiomCheck("coassociativity", bad is None,
                             None if bad is None else bad + 1))
    return AxiomReport(tuple(checks))


def ensure_valid_comodule(m: Comodule) -> Comodule:
    ensure_valid_coalgebra(m.coalgebra)
    report = validate_comodule(m)
    if not report.ok:
        names = ", ".join(f.axiom for f in report.failures())
        raise InvalidStructureError(f"comodule fails: {names}")
    return m


def free_comodule(c: Coalgebra, k: int) -> Comodule:
    """The rank k*r comodule made of k copies of the coalgebra coacting on itself."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ensure_valid_coalgebra(c)
    r = c.rank
    m = k * r
    flat = [0] * (m * r * m)
    for t in range(k):
        for i in range(r):
            col = c.delta.col_vec(i)
            for a in range(r):
                for b in range(r):
                    v = col[a * r + b]
                    if v:
                        flat[((t * r + a) * r + b) * m + (t * r + i)] = v
    return Comodule(c, m, RMatrix(c.ring, m * r, m, tuple(flat)))


# ---------------------------------------------------------------------------
# The induced dual-algebra action
# ---------------------------------------------------------------------------

def action_matrix(m: Comodule, g: tuple[int, ...]) -> RMatrix:
    """Matrix of the dual element g acting on m: apply the coaction, then
    evaluate g on the coalgebra slot."""
    if len(g) != m.coalgebra.rank:
        raise ShapeError("dual element length mismatch")
    ident = RMatrix.identity(m.ring, m.rank)
    row = RMatrix(m.ring, 1, m.coalgebra.rank, tuple(x % m.ring.modulus for x in g))
    return ident.kron(row) @ m.rho


def dual_action_matrices(m: Comodule) -> tuple[RMatrix, ...]:
    """Action matrices of the dual basis elements, in basis order."""
    r = m.coalgebra.rank
    return tuple(
        action_matrix(m, tuple(1 if t == k else 0 for t in range(r)))
        for k in range(r)
    )


def cstar_action(m: Comodule, g: tuple[int, ...], x: tuple[int, ...]) -> tuple[int, ...]:
    """The element g acting on x."""
    if len(x) != m.rank:
        raise ShapeError("element length mismatch")
    return action_matrix(m, g).apply(x)


# ---------------------------------------------------------------------------
# Morphism spaces between free comodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MorphismSpace:
    """Solution space of the intertwining law between two free comodules.

    ``coeff_span`` is the Howell form of the space of flattened matrices;
    ``basis`` reshapes its rows to target-rank x source-rank matrices.
    """

    source: Comodule
    target: Comodule
    coeff_span: RMatrix

    @cached_property
    def basis(self) -> tuple[RMatrix, ...]:
        mt, ms = self.target.rank, self.source.rank
        return tuple(
            RMatrix(self.source.ring, mt, ms, self.coeff_span.row_vec(i))
            for i in range(self.coeff_span.rows)
        )

    def size(self) -> int:
        return span_size(self.coeff_span)

    def contains(self, t: RMatrix) -> bool:
        return span_contains(self.coeff_span, t.entries)

    def coords_of(self, t: RMatrix) -> tuple[int, ...] | None:
        return express_in_span(self.coeff_span, t.entries)

    def elements(self, cap: int = DEFAULT_MAX_ELEMENTS) -> list[RMatrix]:
        mt, ms = self.target.rank, self.source.rank
        return [
            RMatrix(self.source.ring, mt, ms, flat)
            for flat in span_elements(self.coeff_span, cap)
        ]


def intertwines(src: Comodule, dst: Comodule, t: RMatrix) -> bool:
    """Whether t is a comodule morphism from src to dst."""
    ident = RMatrix.identity(src.ring, src.coalgebra.rank)
    return t.kron(ident) @ src.rho == dst.rho @ t


def hom_space(src: Comodule, dst: Comodule) -> MorphismSpace:
    """All morphisms src -> dst, solved as one stacked kernel computation."""
    if src.coalgebra != dst.coalgebra:
        raise ShapeError("comodules over different coalgebras")
    ensure_valid_comodule(src)
    ensure_valid_comodule(dst)
    r = src.coalgebra.rank
    ms, mt = src.rank, dst.rank
    ident = RMatrix.identity(src.ring, r)
    rows = []
    for a in range(mt):
        for b in range(ms):
            e = RMatrix(src.ring, mt, ms,
                        tuple(1 if (i, j) == (a, b) else 0
                              for i in range(mt) for j in range(ms)))
            defect = e.kron(ident) @ src.rho - dst.rho @ e
            rows.append(defect.entries)
    stacked = RMatrix.from_rows(src.ring, rows) if rows else RMatrix(src.ring, 0, 0, ())
    return MorphismSpace(src, dst, kernel(stacked))


@dataclass(frozen=True)
class EndRing:
    """The comodule endomorphism ring of a free comodule.

    Wraps the morphism space with the identity's coordinates; construction
    verifies that the identity lies in the space and that the space is
    closed under composition on basis pairs.
    """

    space: MorphismSpace
    identity_coords: tuple[int, ...]

    @property
    def comodule(self) -> Comodule:
        return self.space.source

    @property
    def ring(self):
        return self.space.source.ring

    def identity_matrix(self) -> RMatrix:
        return RMatrix.identity(self.ring, self.comodule.rank)

    def zero_matrix(self) -> RMatrix:
        return RMatrix.zeros(self.ring, self.comodule.rank, self.comodule.rank)

    def size(self) -> int:
        return self.space.size()

    def contains(self, t: RMatrix) -> bool:
        return self.space.contains(t)

    def elements(self, cap: int = DEFAULT_MAX_ELEMENTS) -> list[RMatrix]:
        return self.space.elements(cap)


def end_ring(m: Comodule) -> EndRing:
    space = hom_space(m, m)
    ident = RMatrix.identity(m.ring, m.rank)
    coords = space.coords_of(ident)
    if coords is None:
        raise InternalCheckError("identity is not an intertwiner")
    for t1 in space.basis:
        for t2 in space.basis:
            if not space.contains(t1 @ t2):
                raise InternalCheckError("endomorphism space not composition closed")
    return EndRing(space, coords)


def cstar_end(m: Comodule) -> MorphismSpace:
    """All linear maps commuting with the full dual-algebra action.

    Always contains the comodule endomorphisms; for a free coalgebra of
    finite rank the two spaces coincide, which is asserted here.
    """
    ensure_valid_comodule(m)
    acts = dual_action_matrices(m)
    mm = m.rank
    rows = []
    for a in range(mm):
        for b in range(mm):
            e = RMatrix(m.ring, mm, mm,
                        tuple(1 if (i, j) == (a, b) else 0
                              for i in range(mm) for j in range(mm)))
            defect_entries = []
            for act in acts:
                defect_entries.extend((e @ act - act @ e).entries)
            rows.append(tuple(defect_entries))
    stacked = RMatrix.from_rows(m.ring, rows) if rows else RMatrix(m.ring, 0, 0, ())
    commutant = MorphismSpace(m, m, kernel(stacked))
    comodule_endos = hom_space(m, m)
    for t in comodule_endos.basis:
        if not commutant.contains(t):
            raise InternalCheckError(
                "comodule endomorphism does not commute with the dual action"
            )
    if commutant.coeff_span != comodule_endos.coeff_span:
        raise InternalCheckError(
            "dual-action commutant differs from the comodule endomorphisms "
            "for a free coalgebra"
        )
    return commutant
