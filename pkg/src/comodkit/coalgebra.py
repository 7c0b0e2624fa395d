"""Finite free coalgebras over Z/n, given by structure constants.

Tensor convention, fixed once and used everywhere: the basis pair
``(i, k)`` of a tensor square maps to flat index ``i * r + k`` (0-based,
first factor major).  The comultiplication is stored as an ``r^2 x r``
matrix whose column ``j`` holds the coordinates of the image of the j-th
basis element.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import RingSpec, RMatrix, ShapeError


class InvalidStructureError(ValueError):
    """A structure failed its axioms where a valid one is required."""


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of a single axiom: name, verdict, 1-based violating index."""

    axiom: str
    ok: bool
    violating_index: int | None = None


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.ok]


@dataclass(frozen=True)
class Coalgebra:
    """A free coalgebra of finite rank: comultiplication and counit constants.

    ``delta`` has shape ``r^2 x r`` (column j = image of basis element j in
    the tensor-square basis), ``counit`` is the length-r tuple of counit
    values on the basis.
    """

    ring: RingSpec
    rank: int
    delta: RMatrix
    counit: tuple[int, ...]

    def __post_init__(self):
        r = self.rank
        if r < 1:
            raise ShapeError("coalgebra rank must be >= 1")
        if self.delta.ring != self.ring:
            raise ShapeError("delta ring mismatch")
        if (self.delta.rows, self.delta.cols) != (r * r, r):
            raise ShapeError(f"delta must be {r * r}x{r}")
        if len(self.counit) != r:
            raise ShapeError("counit length mismatch")
        n = self.ring.modulus
        if any(not (0 <= x < n) for x in self.counit):
            raise ValueError("counit entries must be reduced mod n")

    def counit_row(self) -> RMatrix:
        return RMatrix(self.ring, 1, self.rank, self.counit)


def _first_bad_column(a: RMatrix, b: RMatrix) -> int | None:
    for j in range(a.cols):
        if a.col_vec(j) != b.col_vec(j):
            return j
    return None


def validate_coalgebra(c: Coalgebra) -> AxiomReport:
    """Check coassociativity and both counit laws, exactly.

    Violations report the 1-based basis index of the first offending column.
    """
    r = c.rank
    ident = RMatrix.identity(c.ring, r)
    # (delta (x) id) . delta  versus  (id (x) delta) . delta
    lhs = c.delta.kron(ident) @ c.delta
    rhs = ident.kron(c.delta) @ c.delta
    checks = []
    bad = _first_bad_column(lhs, rhs)
    checks.append(AxiomCheck("coassociativity", bad is None,
                             None if bad is None else bad + 1))
    eps = c.counit_row()
    left = eps.kron(ident) @ c.delta
    bad = _first_bad_column(left, ident)
    checks.append(AxiomCheck("counit-left", bad is None,
                             None if bad is None else bad + 1))
    right = ident.kron(eps) @ c.delta
    bad = _first_bad_column(right, ident)
    checks.append(AxiomCheck("counit-right", bad is None,
                             None if bad is None else bad + 1))
    return AxiomReport(tuple(checks))


def ensure_valid_coalgebra(c: Coalgebra) -> Coalgebra:
    report = validate_coalgebra(c)
    if not report.ok:
        names = ", ".join(f.axiom for f in report.failures())
        raise InvalidStructureError(f"coalgebra fails: {names}")
    return c


# ---------------------------------------------------------------------------
# Constructor catalog
# ---------------------------------------------------------------------------

def make_trivial(ring: RingSpec) -> Coalgebra:
    """Rank 1: the basis element is grouplike."""
    return make_grouplike(ring, 1)


def make_grouplike(ring: RingSpec, g: int) -> Coalgebra:
    """Rank g with every basis element grouplike: each maps to its own square."""
    if g < 1:
        raise ValueError("need at least one grouplike")
    flat = [0] * (g * g * g)
    for j in range(g):
        flat[(j * g + j) * g + j] = 1
    delta = RMatrix(ring, g * g, g, tuple(flat))
    return Coalgebra(ring, g, delta, (1,) * g)


def make_matrix_coalgebra(ring: RingSpec, k: int) -> Coalgebra:
    """The comatrix coalgebra on a k x k coordinate basis.

    Basis element (i, j) sits at flat index i*k + j; its image is the sum of
    (i, t) tensor (t, j) over t, and the counit picks out the diagonal.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    r = k * k
    flat = [0] * (r * r * r)
    for i in range(k):
        for j in range(k):
            col = i * k + j
            for t in range(k):
                a = i * k + t
                b = t * k + j
                flat[(a * r + b) * r + col] = 1
    delta = RMatrix(ring, r * r, r, tuple(flat))
    counit = tuple(1 if i == j else 0 for i in range(k) for j in range(k))
    return Coalgebra(ring, r, delta, counit)


def direct_sum(c1: Coalgebra, c2: Coalgebra) -> Coalgebra:
    """Block direct sum: each summand keeps its own structure constants."""
    if c1.ring != c2.ring:
        raise ShapeError("ring mismatch")
    r1, r2 = c1.rank, c2.rank
    r = r1 + r2
    flat = [0] * (r * r * r)
    for j in range(r1):
        col = c1.delta.col_vec(j)
        for a in range(r1):
            for b in range(r1):
                v = col[a * r1 + b]
                if v:
                    flat[(a * r + b) * r + j] = v
    for j in range(r2):
        col = c2.delta.col_vec(j)
        for a in range(r2):
            for b in range(r2):
                v = col[a * r2 + b]
                if v:
                    flat[((r1 + a) * r + (r1 + b)) * r + (r1 + j)] = v
    delta = RMatrix(c1.ring, r * r, r, tuple(flat))
    return Coalgebra(c1.ring, r, delta, c1.counit + c2.counit)


# ---------------------------------------------------------------------------
# Dual convolution algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualAlgebra:
    """The convolution algebra on the dual basis.

    ``mult`` has shape ``r x r^2``: column ``i*r + j`` holds the coordinates
    of the convolution of dual basis elements i and j.  The unit is the
    counit coordinate vector.
    """

    coalgebra: Coalgebra
    mult: RMatrix
    unit: tuple[int, ...]

    def convolve(self, g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
        """Convolution of two dual elements given by coordinates."""
        r = self.coalgebra.rank
        n = self.coalgebra.ring.modulus
        out = [0] * r
        for i in range(r):
            gi = g[i]
            if not gi:
                continue
            for j in range(r):
                c = (gi * h[j]) % n
                if not c:
                    continue
                col = self.mult.col_vec(i * r + j)
                for l in range(r):
                    out[l] += c * col[l]
        return tuple(x % n for x in out)

    def basis_product(self, i: int, j: int) -> tuple[int, ...]:
        return self.mult.col_vec(i * self.coalgebra.rank + j)


def dual_algebra(c: Coalgebra) -> DualAlgebra:
    """Build the dual algebra and verify associativity and unitality.

    The product of dual basis elements i and j evaluated on basis element l
    reads off the (i, j) tensor coordinate of the comultiplied l, so the
    multiplication table is the transpose of the comultiplication table.
    """
    ensure_valid_coalgebra(c)
    dual = DualAlgebra(c, c.delta.transpose(), c.counit)
    r = c.rank
    basis = [tuple(1 if t == i else 0 for t in range(r)) for i in range(r)]
    for i in range(r):
        for j in range(r):
            for k in range(r):
                lhs = dual.convolve(dual.basis_product(i, j), basis[k])
                rhs = dual.convolve(basis[i], dual.basis_product(j, k))
                if lhs != rhs:
                    raise InvalidStructureError(
                        f"convolution not associative at basis triple "
                        f"({i + 1},{j + 1},{k + 1})"
                    )
    for i in range(r):
        if dual.convolve(dual.unit, basis[i]) != basis[i]:
            raise InvalidStructureError(f"counit is not a left unit at {i + 1}")
        if dual.convolve(basis[i], dual.unit) != basis[i]:
            raise InvalidStructureError(f"counit is not a right unit at {i + 1}")
    return dual
