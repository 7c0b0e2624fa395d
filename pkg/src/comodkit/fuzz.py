"""Seeded instance generation and the theorem-bundle fuzz campaign.

Random comodules are cut out of free comodules as subcomodules or
quotients, then re-based onto a free carrier by extracting a basis.  That
guarantees every generated instance satisfies the comodule axioms by
construction; coaction matrices are never sampled and rejection-tested.
Carriers that are not free as modules (possible over composite moduli) are
resampled.  Any bundle counterexample is greedily minimized and dumped as
an instance file.
"""

from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass

from .checks import THEOREM_BUNDLE, _Ctx, theorem_bundle
from .coalgebra import Coalgebra, make_grouplike, make_matrix_coalgebra, make_trivial
from .comodule import Comodule, ensure_valid_comodule, free_comodule
from .instancefile import InstanceFile, instance_digest, serialize_instance
from .linalg import (
    DEFAULT_MAX_ELEMENTS,
    CapExceeded,
    InternalCheckError,
    RMatrix,
    RingSpec,
    howell,
    solve,
    span_elements,
    span_size,
    vstack,
)
from .report import CAP, FAIL, PASS, CheckResult, Report
from .subcomodule import (
    QuotientComodule,
    Subcomodule,
    full_subcomodule,
    generated_subcomodule,
    quotient_comodule,
    sub_sum,
    zero_subcomodule,
)


@dataclass(frozen=True)
class FuzzSpec:
    modulus: int
    coalgebra: str  # "trivial" | "grouplike:<g>" | "matrix:<k>"
    strategy: str  # "subcomodule" | "quotient"
    power: int  # which free comodule to sample from
    count: int
    seed: int
    max_elements: int = DEFAULT_MAX_ELEMENTS
    max_module: int = 256  # size bound for sampled carriers
    max_end: int = 256  # size bound for the endomorphism ring
    dump_dir: str = "."


def catalog_coalgebra(ring: RingSpec, kind: str) -> Coalgebra:
    """Parse a coalgebra catalog name: trivial, grouplike:<g>, matrix:<k>."""
    if kind == "trivial":
        return make_trivial(ring)
    if kind.startswith("grouplike:"):
        return make_grouplike(ring, int(kind.split(":", 1)[1]))
    if kind.startswith("matrix:"):
        return make_matrix_coalgebra(ring, int(kind.split(":", 1)[1]))
    raise ValueError(f"unknown coalgebra kind {kind!r}; "
                     "use trivial, grouplike:<g> or matrix:<k>")


# ---------------------------------------------------------------------------
# Free-basis extraction
# ---------------------------------------------------------------------------

def _vector_order(ring: RingSpec, v: tuple[int, ...]) -> int:
    g = ring.modulus
    for x in v:
        g = math.gcd(g, x)
    return ring.modulus // g


def free_basis_of_subcomodule(w: Subcomodule, rng: random.Random | None = None,
                              cap: int = DEFAULT_MAX_ELEMENTS) -> list[tuple[int, ...]] | None:
    """Rows of the ambient module forming a free basis of w, or None when w
    is not free.  Greedy: repeatedly pick a full-order element growing the
    span by a full factor of the modulus; over Z/n this succeeds exactly on
    free carriers."""
    ring = w.ring
    n = ring.modulus
    size = w.size()
    t = 0
    while n ** t < size:
        t += 1
    if n ** t != size:
        return None
    candidates = list(w.elements(cap))
    if rng is not None:
        rng.shuffle(candidates)
    chosen: list[tuple[int, ...]] = []
    current = RMatrix(ring, 0, w.ambient.rank, ())
    for step in range(t):
        target = n ** (step + 1)
        for v in candidates:
            if _vector_order(ring, v) != n:
                continue
            grown = howell(vstack(current, RMatrix(ring, 1, w.ambient.rank, v))).matrix
            if span_size(grown) == target:
                chosen.append(v)
                current = grown
                break
        else:
            return None
    if span_size(current) != size:
        return None
    return chosen


def free_basis_of_quotient(q: QuotientComodule, rng: random.Random | None = None,
                           cap: int = DEFAULT_MAX_ELEMENTS) -> list[tuple[int, ...]] | None:
    """Representatives forming a free basis of the quotient, or None."""
    ring = q.ring
    n = ring.modulus
    size = q.size()
    t = 0
    while n ** t < size:
        t += 1
    if n ** t != size:
        return None
    candidates = q.elements(cap)
    if rng is not None:
        candidates = list(candidates)
        rng.shuffle(candidates)
    chosen: list[tuple[int, ...]] = []
    subgroup = {q.zero()}
    for step in range(t):
        target = n ** (step + 1)
        for v in candidates:
            order = next((k for k in range(1, n + 1)
                          if q.scale(k, v) == q.zero()), None)
            if order != n:
                continue
            grown = {q.add(a, q.scale(c, v)) for a in subgroup for c in range(n)}
            if len(grown) == target:
                chosen.append(v)
                subgroup = grown
                break
        else:
            return None
    if len(subgroup) != size:
        return None
    return chosen


def comodule_from_subcomodule(w: Subcomodule,
                              basis: list[tuple[int, ...]]) -> Comodule:
    """Structure constants of w in the given free basis."""
    amb = w.ambient
    ring = w.ring
    r = amb.coalgebra.rank
    t = len(basis)
    rows = RMatrix.from_rows(ring, basis) if basis else RMatrix(ring, 0, amb.rank, ())
    flat = [0] * (t * r * t)
    for j, b in enumerate(basis):
        for k, sl in enumerate(amb.coaction_slices(b)):
            coeffs = _coords_in_rows(rows, sl)
            if coeffs is None:
                raise InternalCheckError("coaction slice escapes the carrier")
            for i in range(t):
                flat[(i * r + k) * t + j] = coeffs[i]
    m = Comodule(amb.coalgebra, t, RMatrix(ring, t * r, t, tuple(flat)))
    return ensure_valid_comodule(m)


def comodule_from_quotient(q: QuotientComodule,
                           basis: list[tuple[int, ...]]) -> Comodule:
    """Structure constants of the quotient in the given free basis of
    representatives."""
    ring = q.ring
    r = q.ambient.coalgebra.rank
    t = len(basis)
    rows = RMatrix.from_rows(ring, basis) if basis else RMatrix(ring, 0, q.ambient.rank, ())
    rel = q.relations
    stacked = vstack(rows, rel) if rel.rows else rows
    flat = [0] * (t * r * t)
    for j, b in enumerate(basis):
        for k, sl in enumerate(q.coaction_slices(b)):
            sol = solve(stacked.transpose(),
                        RMatrix(ring, 1, len(sl), sl).transpose())
            if sol is None:
                raise InternalCheckError("quotient coaction slice not expressible")
            for i in range(t):
                flat[(i * r + k) * t + j] = sol.entry(i, 0)
    m = Comodule(q.ambient.coalgebra, t, RMatrix(ring, t * r, t, tuple(flat)))
    return ensure_valid_comodule(m)


def _coords_in_rows(rows: RMatrix, v: tuple[int, ...]) -> tuple[int, ...] | None:
    if rows.rows == 0:
        return () if not any(v) else None
    sol = solve(rows.transpose(), RMatrix(rows.ring, 1, len(v), v).transpose())
    if sol is None:
        return None
    return sol.col_vec(0)


# ---------------------------------------------------------------------------
# Random sampling
# ---------------------------------------------------------------------------

def _random_subcomodule(rng: random.Random, amb: Comodule,
                        cap: int) -> Subcomodule:
    count = rng.randint(1, max(1, amb.rank))
    w = zero_subcomodule(amb)
    for _ in range(count):
        x = tuple(rng.randrange(amb.ring.modulus) for _ in range(amb.rank))
        w = sub_sum(w, generated_subcomodule(amb, x))
    return w


def random_comodule(rng: random.Random, coalg: Coalgebra, strategy: str,
                    power: int, size_bound: int,
                    cap: int = DEFAULT_MAX_ELEMENTS,
                    end_bound: int | None = None) -> Comodule:
    """A valid random comodule instance, free over the base ring.

    Non-free samples are resampled, as are samples whose endomorphism ring
    outruns the optional end bound; after bounded retries the sample falls
    back to the full free comodule of power one, which always works.
    """
    from .comodule import end_ring

    amb = free_comodule(coalg, power)
    for _ in range(40):
        w = _random_subcomodule(rng, amb, cap)
        if strategy == "quotient":
            q = quotient_comodule(amb, w)
            if q.size() > size_bound:
                continue
            basis = free_basis_of_quotient(q, rng, cap)
            if basis is None:
                continue
            m = comodule_from_quotient(q, basis)
        else:
            if w.size() > size_bound:
                continue
            basis = free_basis_of_subcomodule(w, rng, cap)
            if basis is None:
                continue
            m = comodule_from_subcomodule(w, basis)
        if end_bound is not None and end_ring(m).size() > end_bound:
            continue
        return m
    return free_comodule(coalg, 1)


# ---------------------------------------------------------------------------
# The campaign
# ---------------------------------------------------------------------------

def _bundle_outcome(m: Comodule, cap: int) -> tuple[str, list[str], list[CheckResult]]:
    ctx = _Ctx(m, cap)
    try:
        results = theorem_bundle(ctx)
    except CapExceeded as exc:
        return CAP, [str(exc)], []
    failed = [r.name for r in results if r.verdict == FAIL]
    capped = [r.name for r in results if r.verdict == CAP]
    if failed:
        return FAIL, failed, results
    if capped:
        return CAP, capped, results
    return PASS, [], results


def minimize_failure(m: Comodule, cap: int) -> Comodule:
    """Greedily drop basis generators while the bundle still fails."""
    current = m
    progress = True
    while progress and current.rank > 0:
        progress = False
        full = full_subcomodule(current)
        for drop in range(current.rank):
            keep = [tuple(1 if i == j else 0 for i in range(current.rank))
                    for j in range(current.rank) if j != drop]
            w = zero_subcomodule(current)
            for v in keep:
                w = sub_sum(w, generated_subcomodule(current, v))
            if w == full:
                continue
            basis = free_basis_of_subcomodule(w, None, cap)
            if basis is None:
                continue
            smaller = comodule_from_subcomodule(w, basis)
            verdict, _, _ = _bundle_outcome(smaller, cap)
            if verdict == FAIL:
                current = smaller
                progress = True
                break
    return current


def run_fuzz(spec: FuzzSpec) -> Report:
    """Generate instances, run the theorem bundle on each, and report.

    Counterexamples are minimized and dumped as instance files in the dump
    directory; iterations derive independent deterministic seeds so the
    merge order never depends on scheduling.
    """
    ring = RingSpec(spec.modulus)
    coalg = catalog_coalgebra(ring, spec.coalgebra)
    report = Report(
        instance={
            "fuzz": {
                "modulus": spec.modulus,
                "coalgebra": spec.coalgebra,
                "strategy": spec.strategy,
                "power": spec.power,
                "count": spec.count,
            }
        },
        caps={"max_elements": spec.max_elements, "max_module": spec.max_module},
        seed=spec.seed,
    )
    for i in range(spec.count):
        start = time.perf_counter()
        rng = random.Random(f"{spec.seed}:{i}")
        m = random_comodule(rng, coalg, spec.strategy, spec.power,
                            spec.max_module, spec.max_elements, spec.max_end)
        inst = InstanceFile(ring, coalg, (("M", m),))
        verdict, failed, _ = _bundle_outcome(m, spec.max_elements)
        details = {
            "digest": instance_digest(inst),
            "rank": m.rank,
            "size": m.size(),
        }
        counterexample = None
        if verdict == FAIL:
            small = minimize_failure(m, spec.max_elements)
            small_inst = InstanceFile(ring, coalg, (("M", small),))
            path = os.path.join(spec.dump_dir, f"fuzz-fail-{spec.seed}-{i}.cmod")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(serialize_instance(small_inst))
            counterexample = {"failed": failed, "dump": path,
                              "minimized_rank": small.rank}
        reason = "; ".join(failed) if verdict == CAP else None
        report.checks.append(CheckResult(
            f"fuzz[{i}]", verdict, "M", details=details,
            counterexample=counterexample, reason=reason,
            millis=int((time.perf_counter() - start) * 1000)))
    passed = sum(1 for c in report.checks if c.verdict == PASS)
    report.checks.append(CheckResult(
        "fuzz.summary",
        FAIL if any(c.verdict == FAIL for c in report.checks) else PASS,
        details={"instances": spec.count, "passed": passed}))
    return report
