"""Orchestration of all verification passes over a parsed instance.

Each named check produces one or more :class:`CheckResult` rows.  Axiom
validation always runs first and gates everything else; hypothesis-gated
theorem checks mark themselves skipped with a reason instead of silently
passing; cap overruns flag the single affected check and leave the rest of
the report intact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .clean import (
    annihilator_condition,
    clean_ring,
    decomposition_equivalence,
    summand_pairs,
)
from .coalgebra import InvalidStructureError, dual_algebra, validate_coalgebra
from .comodule import Comodule, cstar_end, end_ring, free_comodule, validate_comodule
from .continuity import (
    alpha_star_check,
    clean_extension_check,
    clean_pair_poset,
    closed_complement,
    closures,
    continuity_classify,
    end_tables,
    essential_mono_extension_check,
    essential_transitivity_check,
    hypothesis_profile,
    idempotent_extension_check,
    lattice_info,
    maximal_preimage_check,
    pinned_clean_decomposition_check,
    poset_maximality_check,
)
from .instancefile import InstanceFile, instance_digest
from .linalg import CapExceeded, DEFAULT_MAX_ELEMENTS, all_vectors
from .report import CAP, FAIL, PASS, SKIPPED, CheckResult, Report, matrix_json, sub_json
from .subcomodule import (
    full_subcomodule,
    restrict_endomorphism,
    sub_intersect,
    sub_sum,
    zero_subcomodule,
)

CHECK_NAMES = ("validate", "dual", "endo", "clean", "lattice", "continuity",
               "alpha", "annihilator", "theorems")

THEOREM_BUNDLE = (
    "theorems.clean-equivalence",
    "theorems.essential-transitivity",
    "theorems.closures-exist",
    "theorems.closed-complements",
    "theorems.idempotent-extension",
    "theorems.essential-mono-extension",
    "theorems.maximal-preimage",
    "theorems.poset-maximality",
    "theorems.clean-extension",
    "theorems.pinned-decomposition",
    "theorems.continuous-implies-clean",
)

_GATE_REASON = ("hypotheses not met: needs a semisimple instance, or a "
                "continuous one satisfying the essential annihilator condition")


@dataclass
class _Ctx:
    """Lazily computed shared artifacts for one comodule."""

    m: Comodule
    cap: int
    _ring: object = None
    _info: object = None
    _profile: object = None
    _tables: object = None
    _pairs: object = None
    _posets: dict = None

    def ring(self):
        if self._ring is None:
            self._ring = end_ring(self.m)
        return self._ring

    def info(self):
        if self._info is None:
            self._info = lattice_info(self.m, self.cap)
        return self._info

    def profile(self):
        if self._profile is None:
            self._profile = hypothesis_profile(self.m, self.info(), self.cap)
        return self._profile

    def tables(self):
        if self._tables is None:
            self._tables = end_tables(self.info(), self.ring(), self.cap)
        return self._tables

    def pairs(self):
        if self._pairs is None:
            info = self.info()
            self._pairs = [
                (info.nodes[i], info.nodes[j])
                for i in range(len(info.nodes))
                for j in info.summand_complements[i]
            ]
        return self._pairs

    def poset(self, f):
        if self._posets is None:
            self._posets = {}
        got = self._posets.get(f.entries)
        if got is None:
            got = clean_pair_poset(self.m, f, self.info(), self.ring(),
                                   self.cap, self.tables())
            self._posets[f.entries] = got
        return got


def _timed(name: str, comodule: str | None, fn) -> CheckResult:
    start = time.perf_counter()
    try:
        result = fn()
    except CapExceeded as exc:
        result = CheckResult(name, CAP, comodule, reason=str(exc))
    millis = int((time.perf_counter() - start) * 1000)
    result.name = name
    result.comodule = comodule
    result.millis = millis
    return result


def run_checks(inst: InstanceFile, selection: list[str],
               cap: int = DEFAULT_MAX_ELEMENTS, seed: int = 0) -> Report:
    """Run the selected checks over every comodule of the instance.

    An instance without comodule sections is checked against the coalgebra
    coacting on itself.  Failed axiom validation stops the report after the
    validation rows.
    """
    for name in selection:
        if name not in CHECK_NAMES:
            raise ValueError(f"unknown check {name!r}")
    report = Report(
        instance={
            "digest": instance_digest(inst),
            "modulus": inst.ring.modulus,
            "coalgebra_rank": inst.coalgebra.rank,
            "comodules": [name for name, _ in inst.comodules],
        },
        caps={"max_elements": cap},
        seed=seed,
    )

    coalg_report = validate_coalgebra(inst.coalgebra)
    want_validate = "validate" in selection
    if want_validate or not coalg_report.ok:
        report.checks.append(_axiom_result("validate.coalgebra", None, coalg_report))
    if not coalg_report.ok:
        return report

    comodules = list(inst.comodules)
    if not comodules:
        comodules = [("C", free_comodule(inst.coalgebra, 1))]

    validated: list[tuple[str, Comodule]] = []
    for name, m in comodules:
        m_report = validate_comodule(m)
        if want_validate or not m_report.ok:
            report.checks.append(_axiom_result("validate.comodule", name, m_report))
        if m_report.ok:
            validated.append((name, m))
        else:
            return report

    if "dual" in selection:
        report.checks.append(_timed("dual", None, lambda: _check_dual(inst)))

    for name, m in validated:
        ctx = _Ctx(m, cap)
        if "endo" in selection:
            report.checks.append(_timed("endo", name, lambda c=ctx: _check_endo(c)))
        if "clean" in selection:
            report.checks.append(_timed("clean", name, lambda c=ctx: _check_clean(c)))
        if "lattice" in selection:
            report.checks.append(_timed("lattice", name, lambda c=ctx: _check_lattice(c)))
        if "continuity" in selection:
            report.checks.append(_timed("continuity", name,
                                        lambda c=ctx: _check_continuity(c)))
        if "alpha" in selection:
            report.checks.append(_timed("alpha", name, lambda c=ctx: _check_alpha(c)))
        if "annihilator" in selection:
            report.checks.append(_timed("annihilator", name,
                                        lambda c=ctx: _check_annihilator(c)))
        if "theorems" in selection:
            report.checks.extend(theorem_bundle(ctx, name))
    return report


def _axiom_result(name: str, comodule: str | None, axioms) -> CheckResult:
    details = {c.axiom: c.ok for c in axioms.checks}
    counterexample = None
    if not axioms.ok:
        counterexample = {
            "axiom": axioms.failures()[0].axiom,
            "basis_index": axioms.failures()[0].violating_index,
        }
    return CheckResult(name, PASS if axioms.ok else FAIL, comodule,
                       details=details, counterexample=counterexample)


def _check_dual(inst: InstanceFile) -> CheckResult:
    try:
        dual = dual_algebra(inst.coalgebra)
    except InvalidStructureError as exc:
        return CheckResult("dual", FAIL, counterexample={"error": str(exc)})
    r = inst.coalgebra.rank
    table = {
        f"f{i + 1}*f{j + 1}": list(dual.basis_product(i, j))
        for i in range(r) for j in range(r)
    }
    return CheckResult("dual", PASS,
                       details={"rank": r, "size": inst.ring.modulus ** r},
                       witnesses={"mult_table": table, "unit": list(dual.unit)})


def _check_endo(ctx: _Ctx) -> CheckResult:
    ring = ctx.ring()
    cstar_end(ctx.m)  # raises if the commutant disagrees for our free coalgebras
    return CheckResult(
        "endo", PASS,
        details={"basis_rank": len(ring.space.basis), "size": ring.size()},
        witnesses={"basis": [matrix_json(t) for t in ring.space.basis]},
    )


def _check_clean(ctx: _Ctx) -> CheckResult:
    rep = clean_ring(ctx.ring(), ctx.cap)
    details = {
        "size": rep.ring_size,
        "idempotents": rep.idempotent_count,
        "units": rep.unit_count,
        "clean": rep.is_clean,
    }
    witnesses = {
        "decompositions": [
            {"f": matrix_json(f), "u": matrix_json(w.u), "e": matrix_json(w.e)}
            for f, w in rep.witnesses if w is not None
        ]
    }
    if rep.is_clean:
        return CheckResult("clean", PASS, details=details, witnesses=witnesses)
    return CheckResult(
        "clean", FAIL, details=details, witnesses=witnesses,
        counterexample={
            "non_clean": [matrix_json(f) for f in rep.non_clean_elements()],
            "note": "finite rings are clean; this indicates an implementation bug",
        })


def _check_lattice(ctx: _Ctx) -> CheckResult:
    info = ctx.info()
    nodes = info.nodes
    full = full_subcomodule(ctx.m)
    problems = []
    if zero_subcomodule(ctx.m) not in nodes:
        problems.append("zero module missing")
    if full not in nodes:
        problems.append("full module missing")
    for a in nodes:
        for b in nodes:
            if sub_sum(a, b) not in nodes:
                problems.append("sum escapes lattice")
            if sub_intersect(a, b) not in nodes:
                problems.append("intersection escapes lattice")
    details = {"nodes": len(nodes)}
    witnesses = {"generators": [sub_json(s) for s in nodes]}
    if problems:
        return CheckResult("lattice", FAIL, details=details, witnesses=witnesses,
                           counterexample={"problems": sorted(set(problems))})
    return CheckResult("lattice", PASS, details=details, witnesses=witnesses)


def _check_continuity(ctx: _Ctx) -> CheckResult:
    rep = continuity_classify(ctx.m, ctx.info(), ctx.cap)
    details = {
        "cm1": rep.cm1, "cm2": rep.cm2, "cm3": rep.cm3,
        "cs": rep.cs, "continuous": rep.continuous,
        "quasi_continuous": rep.quasi_continuous, "semisimple": rep.semisimple,
    }
    counterexample = {}
    if rep.cm1_counterexample is not None:
        counterexample["cm1"] = sub_json(rep.cm1_counterexample)
    if rep.cm2_counterexample is not None:
        counterexample["cm2"] = [sub_json(s) for s in rep.cm2_counterexample]
    if rep.cm3_counterexample is not None:
        counterexample["cm3"] = [sub_json(s) for s in rep.cm3_counterexample]
    return CheckResult("continuity", PASS, details=details,
                       counterexample=counterexample or None)


def _check_alpha(ctx: _Ctx) -> CheckResult:
    m = ctx.m
    checked = 0
    skipped = 0
    bad = []
    for x in all_vectors(m.ring, m.rank, ctx.cap):
        try:
            verdict = alpha_star_check(m, x, ctx.cap)
        except CapExceeded:
            skipped += 1
            continue
        checked += 1
        if not verdict.injective:
            bad.append(list(x))
    details = {"checked": checked, "skipped_over_cap": skipped}
    if bad:
        return CheckResult("alpha", FAIL, details=details,
                           counterexample={"non_injective_at": bad})
    return CheckResult("alpha", PASS, details=details)


def _check_annihilator(ctx: _Ctx) -> CheckResult:
    rep = annihilator_condition(ctx.m, ctx.cap)
    details = {
        "literal_reading_holds": rep.literal_holds,
        "essential_reading_holds": rep.essential_holds,
        "left_ideals": rep.ideal_count,
    }
    witnesses = {
        "annihilators": [
            {"element": list(e.element),
             "generators": matrix_json(e.annihilator),
             "essential": e.essential}
            for e in rep.entries if e.nonzero
        ]
    }
    return CheckResult("annihilator", PASS, details=details, witnesses=witnesses)


# ---------------------------------------------------------------------------
# The theorem bundle
# ---------------------------------------------------------------------------

def theorem_bundle(ctx: _Ctx, comodule_name: str | None = None) -> list[CheckResult]:
    """All structural lemma and theorem checks for one comodule."""
    out = []
    for name, fn in (
        ("theorems.clean-equivalence", _thm_clean_equivalence),
        ("theorems.essential-transitivity", _thm_transitivity),
        ("theorems.closures-exist", _thm_closures),
        ("theorems.closed-complements", _thm_closed_complements),
        ("theorems.idempotent-extension", _thm_idempotent_extension),
        ("theorems.essential-mono-extension", _thm_essential_mono),
        ("theorems.maximal-preimage", _thm_maximal_preimage),
        ("theorems.poset-maximality", _thm_poset_maximality),
        ("theorems.clean-extension", _thm_clean_extension),
        ("theorems.pinned-decomposition", _thm_pinned),
        ("theorems.continuous-implies-clean", _thm_corollary),
    ):
        out.append(_timed(name, comodule_name, lambda f=fn: f(ctx)))
    return out


def _thm_clean_equivalence(ctx: _Ctx) -> CheckResult:
    ring = ctx.ring()
    lattice = list(ctx.info().nodes)
    pairs = ctx.pairs()
    checked = 0
    for f in ring.elements(ctx.cap):
        eq = decomposition_equivalence(ring, f, lattice, ctx.cap, pairs)
        checked += 1
        if not eq.agree:
            return CheckResult("", FAIL, counterexample={"f": matrix_json(f)})
    return CheckResult("", PASS, details={"elements": checked})


def _thm_transitivity(ctx: _Ctx) -> CheckResult:
    v = essential_transitivity_check(ctx.info())
    if v.ok:
        return CheckResult("", PASS, details={"chains": v.checked})
    small, mid, big = v.failures[0]
    info = ctx.info()
    return CheckResult("", FAIL, details={"chains": v.checked},
                       counterexample={"chain": [sub_json(info.nodes[i])
                                                 for i in (small, mid, big)]})


def _thm_closures(ctx: _Ctx) -> CheckResult:
    info = ctx.info()
    counts = []
    for node in info.nodes:
        counts.append(len(closures(info, node)))
    return CheckResult("", PASS,
                       details={"nodes": len(info.nodes),
                                "min_closures": min(counts) if counts else 0})


def _thm_closed_complements(ctx: _Ctx) -> CheckResult:
    info = ctx.info()
    full = info.full_index
    checked = 0
    for g in info.nodes:
        for n in info.nodes:
            if not sub_intersect(g, n).is_zero:
                continue
            checked += 1
            h = closed_complement(info, g, n)
            hi = info.node_index(h)
            ok = (info.closed_flags[hi]
                  and h.contains(n)
                  and sub_intersect(g, h).is_zero
                  and info.essential_in(info.node_index(sub_sum(g, h)), full))
            if not ok:
                return CheckResult("", FAIL, counterexample={
                    "g": sub_json(g), "n": sub_json(n), "h": sub_json(h)})
    return CheckResult("", PASS, details={"pairs": checked})


def _thm_idempotent_extension(ctx: _Ctx) -> CheckResult:
    v = idempotent_extension_check(ctx.m, ctx.info(), ctx.ring(), ctx.cap,
                                   ctx.tables())
    if v.skipped_reason:
        return CheckResult("", SKIPPED, reason=v.skipped_reason)
    if v.ok:
        return CheckResult("", PASS, details={"idempotents": v.checked})
    fail = v.failures[0]
    return CheckResult("", FAIL, details={"idempotents": v.checked},
                       counterexample={"node": sub_json(fail.node),
                                       "endo": matrix_json(fail.endo.coeffs)})


def _thm_essential_mono(ctx: _Ctx) -> CheckResult:
    v = essential_mono_extension_check(ctx.m, ctx.info(), ctx.ring(), ctx.cap,
                                       ctx.tables())
    if v.skipped_reason:
        return CheckResult("", SKIPPED, reason=v.skipped_reason)
    if v.ok:
        return CheckResult("", PASS, details={"cases": v.checked})
    w, f, e = v.failures[0]
    return CheckResult("", FAIL, details={"cases": v.checked},
                       counterexample={"w": sub_json(w), "f": matrix_json(f),
                                       "e": matrix_json(e.coeffs)})


def _gate(ctx: _Ctx) -> CheckResult | None:
    profile = ctx.profile()
    if not profile.main_gate:
        return CheckResult("", SKIPPED, reason=_GATE_REASON, details={
            "semisimple": profile.semisimple,
            "continuous": profile.continuous,
            "annihilator_essential": profile.annihilator_essential,
        })
    return None


def _thm_maximal_preimage(ctx: _Ctx) -> CheckResult:
    gated = _gate(ctx)
    if gated is not None:
        return gated
    ring = ctx.ring()
    info = ctx.info()
    total = 0
    for f in ring.elements(ctx.cap):
        v = maximal_preimage_check(ctx.m, f, info, ring, ctx.cap,
                                   ctx.tables(), ctx.poset(f))
        total += v.checked
        if not v.ok:
            kind, pair, xnode, vec = v.failures[0]
            return CheckResult("", FAIL, counterexample={
                "kind": kind, "f": matrix_json(f), "w": sub_json(pair.w),
                "x": sub_json(xnode), "vector": list(vec)})
    return CheckResult("", PASS, details={"cases": total})


def _thm_poset_maximality(ctx: _Ctx) -> CheckResult:
    gated = _gate(ctx)
    if gated is not None:
        return gated
    ring = ctx.ring()
    info = ctx.info()
    entries = 0
    for f in ring.elements(ctx.cap):
        v = poset_maximality_check(ctx.m, f, info, ring, ctx.cap,
                                   ctx.tables(), ctx.poset(f))
        entries += v.checked
        if not v.ok:
            return CheckResult("", FAIL,
                               counterexample={"f": matrix_json(f)})
    return CheckResult("", PASS, details={"poset_entries": entries})


def _thm_clean_extension(ctx: _Ctx) -> CheckResult:
    gated = _gate(ctx)
    if gated is not None:
        return gated
    ring = ctx.ring()
    info = ctx.info()
    entries = 0
    for f in ring.elements(ctx.cap):
        v = clean_extension_check(ctx.m, f, info, ring, ctx.cap,
                                  ctx.tables(), ctx.poset(f))
        entries += v.checked
        if not v.ok:
            pair = v.failures[0]
            return CheckResult("", FAIL, counterexample={
                "f": matrix_json(f), "w": sub_json(pair.w),
                "e": matrix_json(pair.e)})
    return CheckResult("", PASS, details={"poset_entries": entries})


def _thm_pinned(ctx: _Ctx) -> CheckResult:
    gated = _gate(ctx)
    if gated is not None:
        return gated
    ring = ctx.ring()
    info = ctx.info()
    tables = ctx.tables()
    ident = ring.identity_matrix()
    checked = 0
    unit_fixes = 0
    for f in ring.elements(ctx.cap):
        auto_w1 = []
        auto_w2 = []
        for i, node in enumerate(info.nodes):
            fw = restrict_endomorphism(f, node)
            if fw is not None and fw.is_bijective():
                auto_w1.append(i)
            gw = restrict_endomorphism(ident - f, node)
            if gw is not None and gw.is_bijective():
                auto_w2.append(i)
        for i1 in auto_w1:
            for i2 in auto_w2:
                if not info.disjoint(i1, i2):
                    continue
                checked += 1
                pinned = pinned_clean_decomposition_check(
                    ctx.m, f, info.nodes[i1], info.nodes[i2], ring, ctx.cap,
                    tables, info)
                if pinned is None:
                    return CheckResult("", FAIL, counterexample={
                        "f": matrix_json(f), "w1": sub_json(info.nodes[i1]),
                        "w2": sub_json(info.nodes[i2])})
                if pinned.unit_restricts_to_identity:
                    unit_fixes += 1
    return CheckResult("", PASS, details={
        "cases": checked,
        "unit_fixes_w2": unit_fixes,  # diagnostic only, not asserted
    })


def _thm_corollary(ctx: _Ctx) -> CheckResult:
    gated = _gate(ctx)
    if gated is not None:
        return gated
    rep = clean_ring(ctx.ring(), ctx.cap)
    if rep.is_clean:
        return CheckResult("", PASS, details={"elements": rep.ring_size})
    return CheckResult("", FAIL, counterexample={
        "non_clean": [matrix_json(f) for f in rep.non_clean_elements()]})
