"""Exact linear algebra over residue rings Z/n.

Everything downstream reduces to the routines here: matrices with entries
kept reduced modulo n, Howell canonical forms for row spans (the canonical
representative that keeps submodule equality decidable in the presence of
zero divisors), linear solving, left kernels, row-span intersection, and
exhaustive enumeration helpers guarded by a hard element cap.

Vectors of length ``k`` are plain tuples of ints in ``[0, n)``.  A matrix
acts on column vectors via :meth:`RMatrix.apply`; row spans are spans of the
matrix rows under left coefficient vectors.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass

DEFAULT_MAX_ELEMENTS = 4096


class ShapeError(ValueError):
    """Operands have incompatible shapes or live over different rings."""


class CapExceeded(RuntimeError):
    """An exhaustive sweep would exceed the configured element cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} elements exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InternalCheckError(AssertionError):
    """A self-verification that must hold mathematically has failed."""


class PreconditionError(ValueError):
    """An operation was called with arguments violating its contract."""


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with x*a + y*b == g, g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class RingSpec:
    """The base ring Z/n, n >= 2.  All element values live in [0, n)."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    def reduce(self, v: int) -> int:
        return v % self.modulus

    def is_unit(self, v: int) -> bool:
        return math.gcd(v, self.modulus) == 1

    def elements(self) -> range:
        return range(self.modulus)

    def __str__(self) -> str:
        return f"Z/{self.modulus}"


def lift_unit(ring: RingSpec, a: int) -> int:
    """A unit w of Z/n with w*a == gcd(a, n) mod n.

    Every residue is associate to the canonical divisor gcd(a, n); this
    produces the normalizing unit (1 for a == 0).
    """
    n = ring.modulus
    a %= n
    if a == 0:
        return 1
    g = math.gcd(a, n)
    a1, n1 = a // g, n // g
    w = pow(a1, -1, n1)
    # w is only determined mod n/g; shift into the units of Z/n.
    while math.gcd(w, n) != 1:
        w += n1
    return w % n


@dataclass(frozen=True)
class RMatrix:
    """Immutable matrix over Z/n, entries row-major and reduced."""

    ring: RingSpec
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        n = self.ring.modulus
        if any(not (0 <= x < n) for x in self.entries):
            raise ValueError("entries must be reduced mod n")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(ring: RingSpec, rows: list | tuple) -> RMatrix:
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        n = ring.modulus
        flat = tuple(x % n for r in rows for x in r)
        return RMatrix(ring, len(rows), ncols, flat)

    @staticmethod
    def identity(ring: RingSpec, k: int) -> RMatrix:
        flat = tuple(1 if i == j else 0 for i in range(k) for j in range(k))
        return RMatrix(ring, k, k, flat)

    @staticmethod
    def zeros(ring: RingSpec, rows: int, cols: int) -> RMatrix:
        return RMatrix(ring, rows, cols, (0,) * (rows * cols))

    @staticmethod
    def from_flat(ring: RingSpec, rows: int, cols: int, flat) -> RMatrix:
        n = ring.modulus
        return RMatrix(ring, rows, cols, tuple(x % n for x in flat))

    # -- access -------------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row_vec(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col_vec(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols] if self.cols else ()

    def rows_list(self) -> list[tuple[int, ...]]:
        return [self.row_vec(i) for i in range(self.rows)]

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------

    def _same_shape(self, other: RMatrix):
        if self.ring != other.ring or self.rows != other.rows or self.cols != other.cols:
            raise ShapeError("shape or ring mismatch")

    def __add__(self, other: RMatrix) -> RMatrix:
        self._same_shape(other)
        n = self.ring.modulus
        return RMatrix(
            self.ring, self.rows, self.cols,
            tuple((a + b) % n for a, b in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: RMatrix) -> RMatrix:
        self._same_shape(other)
        n = self.ring.modulus
        return RMatrix(
            self.ring, self.rows, self.cols,
            tuple((a - b) % n for a, b in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> RMatrix:
        n = self.ring.modulus
        return RMatrix(self.ring, self.rows, self.cols,
                       tuple((-a) % n for a in self.entries))

    def scale(self, c: int) -> RMatrix:
        n = self.ring.modulus
        c %= n
        return RMatrix(self.ring, self.rows, self.cols,
                       tuple((c * a) % n for a in self.entries))

    def __matmul__(self, other: RMatrix) -> RMatrix:
        if self.ring != other.ring or self.cols != other.rows:
            raise ShapeError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        n = self.ring.modulus
        p, q, r = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (p * r)
        for i in range(p):
            base = i * q
            for k in range(q):
                x = a[base + k]
                if x:
                    ob = k * r
                    rb = i * r
                    for j in range(r):
                        out[rb + j] += x * b[ob + j]
        return RMatrix(self.ring, p, r, tuple(v % n for v in out))

    def apply(self, v: tuple[int, ...]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        n = self.ring.modulus
        e = self.entries
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum(e[base + j] * v[j] for j in range(self.cols)) % n)
        return tuple(out)

    def transpose(self) -> RMatrix:
        flat = tuple(self.entries[i * self.cols + j]
                     for j in range(self.cols) for i in range(self.rows))
        return RMatrix(self.ring, self.cols, self.rows, flat)

    def kron(self, other: RMatrix) -> RMatrix:
        """Kronecker product, first factor major (matches the tensor flattening)."""
        if self.ring != other.ring:
            raise ShapeError("ring mismatch")
        p, q = self.rows, self.cols
        s, t = other.rows, other.cols
        n = self.ring.modulus
        out = [0] * (p * s * q * t)
        for i in range(p):
            for j in range(q):
                a = self.entries[i * q + j]
                if not a:
                    continue
                for u in range(s):
                    rb = (i * s + u) * (q * t) + j * t
                    ob = u * t
                    for w in range(t):
                        out[rb + w] = (a * other.entries[ob + w]) % n
        return RMatrix(self.ring, p * s, q * t, tuple(out))


def vstack(*mats: RMatrix) -> RMatrix:
    ring = mats[0].ring
    cols = mats[0].cols
    if any(m.ring != ring or m.cols != cols for m in mats):
        raise ShapeError("vstack mismatch")
    flat = tuple(x for m in mats for x in m.entries)
    return RMatrix(ring, sum(m.rows for m in mats), cols, flat)


def hstack(*mats: RMatrix) -> RMatrix:
    ring = mats[0].ring
    rows = mats[0].rows
    if any(m.ring != ring or m.rows != rows for m in mats):
        raise ShapeError("hstack mismatch")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.row_vec(i))
    return RMatrix(ring, rows, sum(m.cols for m in mats), tuple(out))


# ---------------------------------------------------------------------------
# Howell normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HowellForm:
    """Howell canonical form together with the row-operation witness.

    ``transform @ source == matrix`` exactly; the row span of ``matrix``
    equals the row span of the source.
    """

    matrix: RMatrix
    transform: RMatrix


def _leading(vec: list[int]) -> int | None:
    for j, x in enumerate(vec):
        if x:
            return j
    return None


def howell(m: RMatrix) -> HowellForm:
    """Howell canonical form of the row span of ``m``.

    Echelonizes with unimodular gcd transforms, closes the row set under
    annihilator multiples (the step that makes the form canonical over rings
    with zero divisors), normalizes each pivot to its canonical divisor of n,
    and reduces entries above every pivot.
    """
    ring = m.ring
    n = ring.modulus
    cols, src = m.cols, m.rows

    rows: list[list[int]] = []
    trans: list[list[int]] = []
    pivots: list[int] = []

    def insert(vec: list[int], tv: list[int]):
        j = _leading(vec)
        while j is not None:
            pos = bisect.bisect_left(pivots, j)
            if pos == len(pivots) or pivots[pos] != j:
                rows.insert(pos, vec)
                trans.insert(pos, tv)
                pivots.insert(pos, j)
                return
            a, b = rows[pos][j], vec[j]
            if b % a == 0:
                q = b // a
                row, trow = rows[pos], trans[pos]
                vec = [(x - q * y) % n for x, y in zip(vec, row)]
                tv = [(x - q * y) % n for x, y in zip(tv, trow)]
            else:
                g, s, t = _xgcd(a, b)
                qa, qb = a // g, b // g
                row, trow = rows[pos], trans[pos]
                new_row = [(s * x + t * y) % n for x, y in zip(row, vec)]
                new_tr = [(s * x + t * y) % n for x, y in zip(trow, tv)]
                vec = [(qa * y - qb * x) % n for x, y in zip(row, vec)]
                tv = [(qa * y - qb * x) % n for x, y in zip(trow, tv)]
                rows[pos] = new_row
                trans[pos] = new_tr
            j = _leading(vec)

    for i in range(src):
        vec = list(m.entries[i * cols : (i + 1) * cols])
        tv = [0] * src
        tv[i] = 1
        insert(vec, tv)

    # Close under annihilator multiples until stable.
    max_passes = (cols + 1) * (n.bit_length() + 2) + 4
    for _ in range(max_passes):
        snapshot = [tuple(r) for r in rows]
        for r, t in list(zip(rows, trans)):
            j = _leading(r)
            if j is None:
                continue
            ann = n // math.gcd(r[j], n)
            w = [(ann * x) % n for x in r]
            if any(w):
                insert(w, [(ann * x) % n for x in t])
        if [tuple(r) for r in rows] == snapshot:
            break
    else:
        raise InternalCheckError("howell annihilator closure did not stabilize")

    # Normalize pivots to the canonical divisor of n.
    for idx, r in enumerate(rows):
        j = _leading(r)
        a = r[j]
        g = math.gcd(a, n)
        if a != g:
            w = lift_unit(ring, a)
            rows[idx] = [(w * x) % n for x in r]
            trans[idx] = [(w * x) % n for x in trans[idx]]

    # Reduce entries above each pivot into [0, pivot).
    for k in range(len(rows)):
        jk = _leading(rows[k])
        d = rows[k][jk]
        for i in range(k):
            q = rows[i][jk] // d
            if q:
                rows[i] = [(x - q * y) % n for x, y in zip(rows[i], rows[k])]
                trans[i] = [(x - q * y) % n for x, y in zip(trans[i], trans[k])]

    matrix = RMatrix(ring, len(rows), cols, tuple(x for r in rows for x in r))
    transform = RMatrix(ring, len(rows), src, tuple(x for t in trans for x in t))
    if transform @ m != matrix:
        raise InternalCheckError("howell transform does not reproduce the form")
    return HowellForm(matrix, transform)


def pivot_columns(h: RMatrix) -> list[int]:
    """Pivot column of each row of a Howell-form matrix."""
    out = []
    for i in range(h.rows):
        j = _leading(list(h.row_vec(i)))
        if j is None:
            raise ValueError("zero row in Howell form")
        out.append(j)
    return out


def express_in_span(h: RMatrix, v: tuple[int, ...]) -> tuple[int, ...] | None:
    """Coefficients z with z @ h == v, or None if v is outside the row span.

    Requires ``h`` in Howell form; the Howell property makes the greedy
    left-to-right reduction complete.
    """
    if len(v) != h.cols:
        raise ShapeError("vector length mismatch")
    n = h.ring.modulus
    rem = list(x % n for x in v)
    coeffs = [0] * h.rows
    for i in range(h.rows):
        row = h.row_vec(i)
        j = _leading(list(row))
        d = row[j]
        c = rem[j]
        if c == 0:
            continue
        g = math.gcd(d, n)
        if c % g:
            return None
        # In canonical form d == g and the lifting unit is 1, so y == c // d.
        y = (lift_unit(h.ring, d) * (c // g)) % n
        rem = [(x - y * r) % n for x, r in zip(rem, row)]
        coeffs[i] = y
    if any(rem):
        return None
    return tuple(coeffs)


def span_contains(h: RMatrix, v: tuple[int, ...]) -> bool:
    return express_in_span(h, v) is not None


def span_size(h: RMatrix) -> int:
    """Number of elements of the row span of a Howell-form matrix."""
    n = h.ring.modulus
    size = 1
    for i in range(h.rows):
        row = h.row_vec(i)
        d = row[_leading(list(row))]
        size *= n // math.gcd(d, n)
    return size


def span_elements(h: RMatrix, cap: int = DEFAULT_MAX_ELEMENTS):
    """All elements of the row span, each exactly once, in a fixed order."""
    size = span_size(h)
    if size > cap:
        raise CapExceeded("row span sweep", size, cap)
    n = h.ring.modulus
    rows = h.rows_list()
    ranges = []
    for row in rows:
        d = row[_leading(list(row))]
        ranges.append(range(n // math.gcd(d, n)))
    for coeffs in itertools.product(*ranges):
        v = [0] * h.cols
        for c, row in zip(coeffs, rows):
            if c:
                for j, x in enumerate(row):
                    v[j] += c * x
        yield tuple(x % n for x in v)


def all_vectors(ring: RingSpec, length: int, cap: int = DEFAULT_MAX_ELEMENTS):
    """All of (Z/n)^length in lexicographic order, cap-guarded."""
    size = ring.modulus ** length
    if size > cap:
        raise CapExceeded("module sweep", size, cap)
    return itertools.product(range(ring.modulus), repeat=length)


# ---------------------------------------------------------------------------
# Solving, kernels, inverses, intersections
# ---------------------------------------------------------------------------

def solve(a: RMatrix, b: RMatrix) -> RMatrix | None:
    """Some x with a @ x == b, or None when the system has no solution."""
    if a.ring != b.ring or a.rows != b.rows:
        raise ShapeError("solve: a.rows must equal b.rows over the same ring")
    hf = howell(a.transpose())
    h, tr = hf.matrix, hf.transform
    cols = []
    n = a.ring.modulus
    for j in range(b.cols):
        target = b.col_vec(j)
        z = express_in_span(h, target)
        if z is None:
            return None
        y = [0] * a.cols
        for zi, ti in zip(z, tr.rows_list()):
            if zi:
                for k, t in enumerate(ti):
                    y[k] += zi * t
        cols.append(tuple(v % n for v in y))
    flat = tuple(cols[j][i] for i in range(a.cols) for j in range(b.cols))
    x = RMatrix(a.ring, a.cols, b.cols, flat)
    if a @ x != b:
        raise InternalCheckError("solve produced an invalid solution")
    return x


def kernel(a: RMatrix) -> RMatrix:
    """Howell-form generators of the left kernel {x : x @ a == 0}."""
    p = a.rows
    if p == 0:
        return RMatrix(a.ring, 0, 0, ())
    aug = hstack(a, RMatrix.identity(a.ring, p))
    h = howell(aug).matrix
    kept = []
    for i in range(h.rows):
        row = h.row_vec(i)
        if not any(row[: a.cols]):
            kept.append(row[a.cols :])
    if not kept:
        return RMatrix(a.ring, 0, p, ())
    return howell(RMatrix.from_rows(a.ring, kept)).matrix


def det_mod(a: RMatrix) -> int:
    """Determinant reduced mod n, via exact integer Bareiss elimination."""
    if not a.is_square():
        raise ShapeError("determinant of a non-square matrix")
    k = a.rows
    if k == 0:
        return 1 % a.ring.modulus
    m = [list(a.row_vec(i)) for i in range(k)]
    sign = 1
    prev = 1
    for col in range(k - 1):
        if m[col][col] == 0:
            for i in range(col + 1, k):
                if m[i][col]:
                    m[col], m[i] = m[i], m[col]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(col + 1, k):
            for j in range(col + 1, k):
                m[i][j] = (m[i][j] * m[col][col] - m[i][col] * m[col][j]) // prev
            m[i][col] = 0
        prev = m[col][col]
    return (sign * m[k - 1][k - 1]) % a.ring.modulus


def is_unit_matrix(a: RMatrix) -> bool:
    """True iff ``a`` is two-sided invertible over Z/n (gcd(det, n) == 1)."""
    if not a.is_square():
        raise ShapeError("unit test on a non-square matrix")
    return math.gcd(det_mod(a), a.ring.modulus) == 1


def inverse(a: RMatrix) -> RMatrix | None:
    """The two-sided inverse when it exists, verified by multiplication."""
    if not is_unit_matrix(a):
        return None
    ident = RMatrix.identity(a.ring, a.rows)
    x = solve(a, ident)
    if x is None or a @ x != ident or x @ a != ident:
        raise InternalCheckError("unit matrix without a verified inverse")
    return x


def intersect_rowspans(a: RMatrix, b: RMatrix) -> RMatrix:
    """Howell generators of rowspan(a) & rowspan(b)."""
    if a.ring != b.ring or a.cols != b.cols:
        raise ShapeError("intersection needs a common ambient module")
    if a.rows == 0 or b.rows == 0:
        return RMatrix(a.ring, 0, a.cols, ())
    k = kernel(vstack(a, b))
    if k.rows == 0:
        return RMatrix(a.ring, 0, a.cols, ())
    left = RMatrix.from_rows(a.ring, [row[: a.rows] for row in k.rows_list()])
    return howell(left @ a).matrix
