"""The forward shift on an infinite direct sum of copies of a comodule,
decomposed exactly into an idempotent plus a unit.

The carrier is the set of finitely supported sequences over a fixed
component comodule: index n >= 0 maps to a nonzero component element.
This is exactly the direct sum (not the product), so the three operators
and their identities are total and exactly testable despite the carrier
being infinite.

Operator rules, linear over components:
  shift          : component at n  ->  same component at n + 1
  idempotent part: even n stays; odd n = 2k+1 moves to 2k+2 minus 2k
  unit part      : the difference of the two above; satisfies
                   u(u + id) == id, so u is invertible with inverse u + id.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .comodule import Comodule
from .linalg import RMatrix, ShapeError


@dataclass(frozen=True)
class FinSuppSequence:
    """A finitely supported sequence of elements of a fixed comodule.

    ``terms`` is sorted by index and stores no zero components, so equality
    is structural.
    """

    comodule: Comodule
    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        last = -1
        for ix, vec in self.terms:
            if ix <= last:
                raise ValueError("terms must be strictly index-sorted")
            if ix < 0:
                raise ValueError("negative index")
            if len(vec) != self.comodule.rank:
                raise ShapeError("component length mismatch")
            if not any(vec):
                raise ValueError("zero components must not be stored")
            last = ix

    @staticmethod
    def from_dict(comodule: Comodule, d: dict[int, tuple[int, ...]]) -> FinSuppSequence:
        n = comodule.ring.modulus
        cleaned = []
        for ix in sorted(d):
            vec = tuple(x % n for x in d[ix])
            if any(vec):
                cleaned.append((ix, vec))
        return FinSuppSequence(comodule, tuple(cleaned))

    @staticmethod
    def zero(comodule: Comodule) -> FinSuppSequence:
        return FinSuppSequence(comodule, ())

    def as_dict(self) -> dict[int, tuple[int, ...]]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: FinSuppSequence) -> FinSuppSequence:
        d = _term_add(self.comodule.ring.modulus, self.as_dict(), other.as_dict())
        return FinSuppSequence.from_dict(self.comodule, d)

    def __sub__(self, other: FinSuppSequence) -> FinSuppSequence:
        n = self.comodule.ring.modulus
        d = self.as_dict()
        for ix, vec in other.terms:
            cur = d.get(ix, (0,) * len(vec))
            d[ix] = tuple((a - b) % n for a, b in zip(cur, vec))
        return FinSuppSequence.from_dict(self.comodule, d)


def _term_add(n: int, a: dict, b: dict) -> dict:
    out = dict(a)
    for ix, vec in b.items():
        cur = out.get(ix)
        if cur is None:
            out[ix] = vec
        else:
            out[ix] = tuple((x + y) % n for x, y in zip(cur, vec))
    return out


# The operators act purely on indexes with +/- signs, so they extend to
# dictionaries of vectors of any fixed width (used for coacted terms too).

def _apply_shift(n: int, terms: dict) -> dict:
    return {ix + 1: vec for ix, vec in terms.items()}


def _apply_idempotent_part(n: int, terms: dict) -> dict:
    out: dict[int, tuple[int, ...]] = {}

    def acc(ix, vec, sign):
        cur = out.get(ix)
        if cur is None:
            cur = (0,) * len(vec)
        out[ix] = tuple((a + sign * b) % n for a, b in zip(cur, vec))

    for ix, vec in terms.items():
        if ix % 2 == 0:
            acc(ix, vec, 1)
        else:
            acc(ix + 1, vec, 1)
            acc(ix - 1, vec, -1)
    return {ix: vec for ix, vec in out.items() if any(vec)}


def _apply_unit_part(n: int, terms: dict) -> dict:
    shifted = _apply_shift(n, terms)
    folded = _apply_idempotent_part(n, terms)
    out = dict(shifted)
    for ix, vec in folded.items():
        cur = out.get(ix, (0,) * len(vec))
        out[ix] = tuple((a - b) % n for a, b in zip(cur, vec))
    return {ix: vec for ix, vec in out.items() if any(vec)}


_OPERATORS = {
    "shift": _apply_shift,
    "idempotent": _apply_idempotent_part,
    "unit": _apply_unit_part,
}


def forward_shift(x: FinSuppSequence) -> FinSuppSequence:
    """Move every component one index up; injective, never hits index 0."""
    n = x.comodule.ring.modulus
    return FinSuppSequence.from_dict(x.comodule, _apply_shift(n, x.as_dict()))


def shift_idempotent_part(x: FinSuppSequence) -> FinSuppSequence:
    """The idempotent summand of the shift decomposition."""
    n = x.comodule.ring.modulus
    return FinSuppSequence.from_dict(x.comodule, _apply_idempotent_part(n, x.as_dict()))


def shift_unit_part(x: FinSuppSequence) -> FinSuppSequence:
    """The unit summand: shift minus the idempotent part."""
    n = x.comodule.ring.modulus
    return FinSuppSequence.from_dict(x.comodule, _apply_unit_part(n, x.as_dict()))


def coacted_terms(x: FinSuppSequence) -> dict[int, tuple[int, ...]]:
    """The componentwise coaction of x: per index, the coacted component
    flattened into the tensor coordinate space."""
    out = {}
    for ix, vec in x.terms:
        w = x.comodule.coact(vec)
        if any(w):
            out[ix] = w
    return out


def coaction_commutes(x: FinSuppSequence, operator: str) -> bool:
    """Exact check that the operator intertwines the componentwise coaction:
    coacting after the operator equals applying (operator tensor identity)
    to the coacted terms."""
    apply = _OPERATORS[operator]
    n = x.comodule.ring.modulus
    after = coacted_terms(_seq_from(x.comodule, apply(n, x.as_dict())))
    before = apply(n, coacted_terms(x))
    before = {ix: vec for ix, vec in before.items() if any(vec)}
    return after == before


def _seq_from(comodule: Comodule, terms: dict) -> FinSuppSequence:
    return FinSuppSequence.from_dict(comodule, terms)


def random_sequence(comodule: Comodule, rng: random.Random,
                    max_index: int = 9, max_terms: int = 4) -> FinSuppSequence:
    """A random finitely supported sequence with nonzero components."""
    n = comodule.ring.modulus
    m = comodule.rank
    count = rng.randint(0, max_terms)
    d = {}
    for _ in range(count):
        ix = rng.randint(0, max_index)
        vec = tuple(rng.randrange(n) for _ in range(m))
        if any(vec):
            d[ix] = vec
    return FinSuppSequence.from_dict(comodule, d)


@dataclass(frozen=True)
class ShiftIdentityReport:
    trials: int
    idempotent_failures: int
    unit_failures: int
    sum_failures: int
    coaction_failures: int

    @property
    def ok(self) -> bool:
        return not (self.idempotent_failures or self.unit_failures
                    or self.sum_failures or self.coaction_failures)


def check_shift_identities(comodule: Comodule, trials: int, seed: int) -> ShiftIdentityReport:
    """Exercise the decomposition identities on random sequences:
    the idempotent part squares to itself, the unit part composed with
    itself-plus-identity is the identity, the parts sum to the shift, and
    all three operators commute with the componentwise coaction."""
    rng = random.Random(seed)
    idem_bad = unit_bad = sum_bad = coact_bad = 0
    for _ in range(trials):
        x = random_sequence(comodule, rng)
        e_x = shift_idempotent_part(x)
        if shift_idempotent_part(e_x) != e_x:
            idem_bad += 1
        u_x = shift_unit_part(x)
        uu_plus_u = shift_unit_part(u_x) + u_x
        if uu_plus_u != x:
            unit_bad += 1
        if e_x + u_x != forward_shift(x):
            sum_bad += 1
        if not all(coaction_commutes(x, op) for op in ("shift", "idempotent", "unit")):
            coact_bad += 1
    return ShiftIdentityReport(trials, idem_bad, unit_bad, sum_bad, coact_bad)
