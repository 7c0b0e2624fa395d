"""Essential/closed/summand structure of the subcomodule lattice, the
CS / continuous / quasi-continuous classification, and executable checks
for the structural lemmas driving the cleanness of continuous comodules.

Every check sweeps finite lattices and finite endomorphism rings
exhaustively under the element cap and returns explicit witnesses or
counterexamples.  Lattice-wide sweeps work on precomputed atom bitmasks
(disjointness and essentiality reduce to bit operations), and ring-wide
sweeps share per-idempotent image tables, which keeps whole-ring passes
at desk scale even for rings with a few hundred elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .clean import annihilator_condition, idempotents
from .comodule import Comodule, EndRing, end_ring
from .linalg import (
    DEFAULT_MAX_ELEMENTS,
    CapExceeded,
    InternalCheckError,
    PreconditionError,
    RMatrix,
    howell,
    kernel,
    is_unit_matrix,
    span_elements,
)
from .subcomodule import (
    SubMorphism,
    Subcomodule,
    acts_as_identity,
    comodule_iso,
    invariant_under,
    maps_to_zero,
    restrict_endomorphism,
    sub_end_ring,
    sub_intersect,
    sub_sub,
    sub_sum,
    subcomodule_lattice,
    try_subcomodule,
)


# ---------------------------------------------------------------------------
# Annotated lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeInfo:
    """The full subcomodule lattice with inclusion structure precomputed."""

    comodule: Comodule
    nodes: tuple[Subcomodule, ...]

    @cached_property
    def index(self) -> dict[tuple, int]:
        return {node.gens.entries: i for i, node in enumerate(self.nodes)}

    def node_index(self, s: Subcomodule) -> int:
        try:
            return self.index[s.gens.entries]
        except KeyError:
            raise PreconditionError("subcomodule is not a lattice node") from None

    @cached_property
    def zero_index(self) -> int:
        return next(i for i, s in enumerate(self.nodes) if s.is_zero)

    @cached_property
    def full_index(self) -> int:
        return next(i for i, s in enumerate(self.nodes) if s.is_full)

    @cached_property
    def contains_matrix(self) -> tuple[tuple[bool, ...], ...]:
        """contains_matrix[i][j]: node j is contained in node i."""
        return tuple(
            tuple(big.contains(small) for small in self.nodes)
            for big in self.nodes
        )

    @cached_property
    def atom_masks(self) -> tuple[int, ...]:
        """Per node, a bitmask over the atoms (minimal nonzero nodes) below it.

        Two nodes intersect trivially exactly when their atom masks are
        disjoint, and essentiality reduces to mask containment."""
        cm = self.contains_matrix
        nz = [j for j in range(len(self.nodes)) if not self.nodes[j].is_zero]
        atoms = [j for j in nz if not any(k != j and cm[j][k] for k in nz)]
        masks = []
        for i in range(len(self.nodes)):
            mask = 0
            for bit, a in enumerate(atoms):
                if cm[i][a]:
                    mask |= 1 << bit
            masks.append(mask)
        return tuple(masks)

    def disjoint(self, i: int, j: int) -> bool:
        return not (self.atom_masks[i] & self.atom_masks[j])

    @cached_property
    def summand_complements(self) -> tuple[tuple[int, ...], ...]:
        """For each node, the nodes forming a direct decomposition with it."""
        full_size = self.nodes[self.full_index].size()
        out = []
        for i, a in enumerate(self.nodes):
            comps = []
            for j, b in enumerate(self.nodes):
                if self.disjoint(i, j) and a.size() * b.size() == full_size:
                    comps.append(j)
            out.append(tuple(comps))
        return tuple(out)

    def is_summand(self, i: int) -> bool:
        return bool(self.summand_complements[i])

    def essential_in(self, small: int, big: int) -> bool:
        """Essentiality relative to ``big``: every atom below ``big`` must
        already lie below ``small``."""
        if not self.contains_matrix[big][small]:
            raise PreconditionError("essentiality needs containment")
        return self.atom_masks[big] & ~self.atom_masks[small] == 0

    def essential_in_bruteforce(self, small: int, big: int) -> bool:
        """Oracle variant straight from the definition."""
        if not self.contains_matrix[big][small]:
            raise PreconditionError("essentiality needs containment")
        s = self.nodes[small]
        for j, l in enumerate(self.nodes):
            if l.is_zero or not self.contains_matrix[big][j]:
                continue
            if sub_intersect(l, s).is_zero:
                return False
        return True

    @cached_property
    def closed_flags(self) -> tuple[bool, ...]:
        """Closed in the full comodule: no strictly larger essential extension."""
        cm = self.contains_matrix
        out = []
        for i in range(len(self.nodes)):
            closed = not any(
                k != i and cm[k][i] and self.essential_in(i, k)
                for k in range(len(self.nodes))
            )
            out.append(closed)
        return tuple(out)

    def subnode_indexes(self, big: int) -> list[int]:
        return [j for j in range(len(self.nodes)) if self.contains_matrix[big][j]]

    def generator_tuples(self, i: int) -> list[tuple[int, ...]]:
        return self.nodes[i].generator_rows()


def lattice_info(m: Comodule, cap: int = DEFAULT_MAX_ELEMENTS) -> LatticeInfo:
    return LatticeInfo(m, tuple(subcomodule_lattice(m, cap)))


def is_essential(n: Subcomodule, within: Subcomodule, info: LatticeInfo) -> bool:
    """Whether n is an essential subcomodule of ``within`` (atom criterion)."""
    return info.essential_in(info.node_index(n), info.node_index(within))


# ---------------------------------------------------------------------------
# Lattice lemma checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepVerdict:
    ok: bool
    checked: int
    failures: tuple = ()
    skipped_reason: str | None = None


def essential_transitivity_check(info: LatticeInfo) -> SweepVerdict:
    """For every chain small <= mid <= big of nodes, essential-in-big must
    agree with essential-in-mid and mid-essential-in-big combined."""
    bad = []
    checked = 0
    for big in range(len(info.nodes)):
        for mid in info.subnode_indexes(big):
            for small in info.subnode_indexes(mid):
                checked += 1
                whole = info.essential_in(small, big)
                split = (info.essential_in(small, mid)
                         and info.essential_in(mid, big))
                if whole != split:
                    bad.append((small, mid, big))
    return SweepVerdict(not bad, checked, tuple(bad))


def closures(info: LatticeInfo, n: Subcomodule) -> list[Subcomodule]:
    """All closed nodes in which n sits essentially; never empty."""
    i = info.node_index(n)
    out = [info.nodes[k]
           for k in range(len(info.nodes))
           if (info.closed_flags[k] and info.contains_matrix[k][i]
               and info.essential_in(i, k))]
    if not out:
        raise InternalCheckError("a subcomodule without any closure")
    return out


def closed_complement(info: LatticeInfo, g: Subcomodule, n: Subcomodule) -> Subcomodule:
    """A closed node containing n, meeting g trivially, whose sum with g is
    essential in the whole comodule.  Exists whenever g and n are disjoint."""
    gi = info.node_index(g)
    ni = info.node_index(n)
    if not info.disjoint(gi, ni):
        raise PreconditionError("closed complement needs disjoint arguments")
    full = info.full_index
    for k in range(len(info.nodes)):
        if not info.closed_flags[k]:
            continue
        if not info.contains_matrix[k][ni]:
            continue
        if not info.disjoint(gi, k):
            continue
        joined = sub_sum(g, info.nodes[k])
        if info.essential_in(info.node_index(joined), full):
            return info.nodes[k]
    raise InternalCheckError("no closed complement found where one must exist")


def closed_pair(info: LatticeInfo, n1: Subcomodule, n2: Subcomodule
                ) -> tuple[Subcomodule, Subcomodule]:
    """A closure of n1 and a closed complement containing n2, jointly
    independent with essential direct sum."""
    if not sub_intersect(n1, n2).is_zero:
        raise PreconditionError("closed pair needs disjoint arguments")
    m2 = closed_complement(info, n1, n2)
    m2i = info.node_index(m2)
    full = info.full_index
    for m1 in closures(info, n1):
        if not info.disjoint(info.node_index(m1), m2i):
            continue
        joined = sub_sum(m1, m2)
        if info.essential_in(info.node_index(joined), full):
            return m1, m2
    raise InternalCheckError("no closure pairs with the closed complement")


# ---------------------------------------------------------------------------
# CS / continuity classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuityReport:
    cm1: bool
    cm2: bool
    cm3: bool
    cm1_counterexample: Subcomodule | None
    cm2_counterexample: tuple[Subcomodule, Subcomodule] | None
    cm3_counterexample: tuple[Subcomodule, Subcomodule] | None
    semisimple: bool

    @property
    def cs(self) -> bool:
        return self.cm1

    @property
    def continuous(self) -> bool:
        return self.cm1 and self.cm2

    @property
    def quasi_continuous(self) -> bool:
        return self.cm1 and self.cm3


def continuity_classify(m: Comodule, info: LatticeInfo | None = None,
                        cap: int = DEFAULT_MAX_ELEMENTS) -> ContinuityReport:
    """Decide the three summand conditions over the whole lattice.

    First condition: every node essential in some summand.  Second: nodes
    isomorphic to a summand are summands.  Third: disjoint summands sum to
    a summand.  Semisimplicity is every node being a summand.
    """
    if info is None:
        info = lattice_info(m, cap)
    n = len(info.nodes)
    summands = [i for i in range(n) if info.is_summand(i)]

    cm1, cm1_bad = True, None
    for a in range(n):
        if not any(info.contains_matrix[k][a] and info.essential_in(a, k)
                   for k in summands):
            cm1, cm1_bad = False, info.nodes[a]
            break

    cm2, cm2_bad = True, None
    for a in range(n):
        if info.is_summand(a):
            continue
        for k in summands:
            if info.nodes[a].size() != info.nodes[k].size():
                continue
            if comodule_iso(info.nodes[a], info.nodes[k], cap) is not None:
                cm2, cm2_bad = False, (info.nodes[a], info.nodes[k])
                break
        if not cm2:
            break

    cm3, cm3_bad = True, None
    for a in summands:
        for b in summands:
            if not info.disjoint(a, b):
                continue
            total = sub_sum(info.nodes[a], info.nodes[b])
            if not info.is_summand(info.node_index(total)):
                cm3, cm3_bad = False, (info.nodes[a], info.nodes[b])
                break
        if not cm3:
            break

    semisimple = all(info.is_summand(i) for i in range(n))
    return ContinuityReport(cm1, cm2, cm3, cm1_bad, cm2_bad, cm3_bad, semisimple)


@dataclass(frozen=True)
class HypothesisProfile:
    """Instance-level hypotheses gating the deeper theorem checks."""

    semisimple: bool
    cs: bool
    continuous: bool
    quasi_continuous: bool
    annihilator_literal: bool
    annihilator_essential: bool

    @property
    def main_gate(self) -> bool:
        return self.semisimple or (self.continuous and self.annihilator_essential)


def hypothesis_profile(m: Comodule, info: LatticeInfo | None = None,
                       cap: int = DEFAULT_MAX_ELEMENTS) -> HypothesisProfile:
    if info is None:
        info = lattice_info(m, cap)
    cont = continuity_classify(m, info, cap)
    ann = annihilator_condition(m, cap)
    return HypothesisProfile(cont.semisimple, cont.cs, cont.continuous,
                             cont.quasi_continuous,
                             ann.literal_holds, ann.essential_holds)


# ---------------------------------------------------------------------------
# Shared per-ring tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndTables:
    """Idempotents of the endomorphism ring with their action on every
    lattice node precomputed: generator images, invariance, vanishing and
    identity bitmasks.  Restriction comparisons become tuple equality."""

    info: LatticeInfo
    idems: tuple[RMatrix, ...]
    images: tuple[tuple[tuple[tuple[int, ...], ...], ...], ...]
    invariant_mask: tuple[int, ...]
    zero_mask: tuple[int, ...]
    identity_mask: tuple[int, ...]


def node_images(info: LatticeInfo, t: RMatrix) -> list[tuple[tuple[int, ...], ...]]:
    """Images of every node's generators under t."""
    return [tuple(t.apply(g) for g in info.generator_tuples(i))
            for i in range(len(info.nodes))]


def node_invariance_mask(info: LatticeInfo, images) -> int:
    mask = 0
    for i, node in enumerate(info.nodes):
        if all(node.contains_vector(v) for v in images[i]):
            mask |= 1 << i
    return mask


def end_tables(info: LatticeInfo, ring: EndRing,
               cap: int = DEFAULT_MAX_ELEMENTS) -> EndTables:
    idems = tuple(idempotents(ring, cap))
    images = []
    inv = []
    zero = []
    ident = []
    for e in idems:
        imgs = node_images(info, e)
        images.append(tuple(imgs))
        inv.append(node_invariance_mask(info, imgs))
        zmask = imask = 0
        for i in range(len(info.nodes)):
            gens = info.generator_tuples(i)
            if all(not any(v) for v in imgs[i]):
                zmask |= 1 << i
            if all(v == g for v, g in zip(imgs[i], gens)):
                imask |= 1 << i
        zero.append(zmask)
        ident.append(imask)
    return EndTables(info, idems, tuple(images), tuple(inv),
                     tuple(zero), tuple(ident))


# ---------------------------------------------------------------------------
# Idempotent extension for quasi-continuous comodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionFailure:
    node: Subcomodule
    endo: SubMorphism


def idempotent_extension_check(m: Comodule, info: LatticeInfo | None = None,
                               ring: EndRing | None = None,
                               cap: int = DEFAULT_MAX_ELEMENTS,
                               tables: EndTables | None = None) -> SweepVerdict:
    """Every idempotent endomorphism of every subcomodule must extend to an
    idempotent endomorphism of the whole comodule.  Requires the instance
    to be quasi-continuous; otherwise the check reports itself skipped."""
    if info is None:
        info = lattice_info(m, cap)
    report = continuity_classify(m, info, cap)
    if not report.quasi_continuous:
        return SweepVerdict(True, 0, (), "instance is not quasi-continuous")
    if ring is None:
        ring = end_ring(m)
    if tables is None:
        tables = end_tables(info, ring, cap)
    checked = 0
    failures = []
    for ni, node in enumerate(info.nodes):
        ser = sub_end_ring(node)
        for e in ser.idempotents(cap):
            checked += 1
            wanted = tuple(e.apply(g) for g in node.generator_rows())
            if not any(tables.images[ci][ni] == wanted
                       for ci in range(len(tables.idems))):
                failures.append(ExtensionFailure(node, e))
    return SweepVerdict(not failures, checked, tuple(failures))


# ---------------------------------------------------------------------------
# Monomorphism classification and the extension of essential monomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndoClassification:
    endo: RMatrix
    mono: bool
    onto: bool
    essential_mono: bool


def classify_endomorphism(m: Comodule, info: LatticeInfo, t: RMatrix) -> EndoClassification:
    mono = kernel(t.transpose()).rows == 0
    image_h = howell(t.transpose()).matrix
    image = try_subcomodule(m, image_h)
    if image is None:
        raise InternalCheckError("image of an endomorphism is not a subcomodule")
    onto = image.is_full
    essential = mono and info.essential_in(info.node_index(image), info.full_index)
    return EndoClassification(t, mono, onto, essential)


def essential_mono_classify(ring: EndRing, info: LatticeInfo,
                            cap: int = DEFAULT_MAX_ELEMENTS) -> list[EndoClassification]:
    """Classify every endomorphism; for finite carriers mono and onto agree,
    which is asserted as a structural fact rather than a theorem check."""
    out = []
    for t in sorted(ring.elements(cap), key=lambda x: x.entries):
        cl = classify_endomorphism(ring.comodule, info, t)
        if cl.mono != cl.onto:
            raise InternalCheckError("mono/onto mismatch on a finite comodule")
        out.append(cl)
    return out


def _sub_morphism_essential_mono(t: SubMorphism, info: LatticeInfo) -> bool:
    """Essential monomorphism inside the endomorphism ring of t's source."""
    if not t.is_injective():
        return False
    return info.essential_in(info.node_index(t.image()),
                             info.node_index(t.source))


def essential_mono_extension_check(m: Comodule, info: LatticeInfo | None = None,
                                   ring: EndRing | None = None,
                                   cap: int = DEFAULT_MAX_ELEMENTS,
                                   tables: EndTables | None = None) -> SweepVerdict:
    """On a quasi-continuous instance: whenever the restriction of f minus an
    idempotent of an essential invariant subcomodule is an essential mono
    there, some idempotent extension makes f minus it an essential mono on
    the whole comodule."""
    if info is None:
        info = lattice_info(m, cap)
    report = continuity_classify(m, info, cap)
    if not report.quasi_continuous:
        return SweepVerdict(True, 0, (), "instance is not quasi-continuous")
    if ring is None:
        ring = end_ring(m)
    if tables is None:
        tables = end_tables(info, ring, cap)
    full = info.full_index
    checked = 0
    failures = []
    classify_cache: dict[tuple, EndoClassification] = {}

    def classify(t: RMatrix) -> EndoClassification:
        got = classify_cache.get(t.entries)
        if got is None:
            got = classify_endomorphism(m, info, t)
            classify_cache[t.entries] = got
        return got

    for wi, w in enumerate(info.nodes):
        if not info.essential_in(wi, full):
            continue
        ser = sub_end_ring(w)
        idems_w = ser.idempotents(cap)
        seen_restrictions: set = set()
        for f in ring.elements(cap):
            fw = restrict_endomorphism(f, w)
            if fw is None:
                continue
            for e in idems_w:
                if not _sub_morphism_essential_mono(sub_sub(fw, e), info):
                    continue
                key = (fw.coeffs.entries, e.coeffs.entries, f.entries)
                if key in seen_restrictions:
                    continue
                seen_restrictions.add(key)
                checked += 1
                wanted = tuple(e.apply(g) for g in w.generator_rows())
                ok = False
                for ci in range(len(tables.idems)):
                    if tables.images[ci][wi] != wanted:
                        continue
                    if classify(f - tables.idems[ci]).essential_mono:
                        ok = True
                        break
                if not ok:
                    failures.append((w, f, e))
    return SweepVerdict(not failures, checked, tuple(failures))


# ---------------------------------------------------------------------------
# Injectivity of the coefficient-evaluation map on quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaVerdict:
    element: tuple[int, ...]
    quotient_size: int
    injective: bool
    domain_size: int


def alpha_star_check(m: Comodule, x: tuple[int, ...],
                     cap: int = DEFAULT_MAX_ELEMENTS) -> AlphaVerdict:
    """Realize the evaluation map from (quotient tensor coalgebra) into
    homs out of the dual algebra concretely and check injectivity by an
    exhaustive kernel sweep.

    Both sides are r-fold powers of the quotient by the dual orbit of x;
    the map sends a coordinate tuple to its dual-basis evaluations.  For a
    free coalgebra this is coordinate permutation, hence always injective;
    the sweep verifies it rather than assuming it.
    """
    from .subcomodule import generated_subcomodule, quotient_comodule

    orbit = generated_subcomodule(m, x)
    q = quotient_comodule(m, orbit)
    r = m.coalgebra.rank
    qsize = q.size()
    domain = qsize ** r
    if domain > cap:
        raise CapExceeded("evaluation-map kernel sweep", domain, cap)
    reps = q.elements(cap)
    zero = q.zero()
    delta = [[1 if l == k else 0 for k in range(r)] for l in range(r)]
    injective = True
    for tup in itertools.product(reps, repeat=r):
        values = []
        for l in range(r):
            acc = zero
            for k in range(r):
                if delta[l][k]:
                    acc = q.add(acc, q.scale(delta[l][k], tup[k]))
            values.append(acc)
        if all(v == zero for v in values) and any(t != zero for t in tup):
            injective = False
            break
    return AlphaVerdict(x, qsize, injective, domain)


# ---------------------------------------------------------------------------
# The poset of partial clean witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CleanPair:
    """A pair (w, e): an invariant subcomodule together with a global
    idempotent preserving it whose difference from f restricts to a unit."""

    w: Subcomodule
    e: RMatrix


def pair_leq(p1: CleanPair, p2: CleanPair) -> bool:
    """The partial order: containment plus restriction agreement."""
    return p2.w.contains(p1.w) and maps_to_zero(p2.e - p1.e, p1.w)


@dataclass(frozen=True)
class CleanPairPoset:
    f: RMatrix
    entries: tuple[CleanPair, ...]
    maximal: tuple[int, ...]
    restricted_count: int  # distinct (subcomodule, restricted idempotent) pairs


def clean_pair_poset(m: Comodule, f: RMatrix, info: LatticeInfo | None = None,
                     ring: EndRing | None = None,
                     cap: int = DEFAULT_MAX_ELEMENTS,
                     tables: EndTables | None = None) -> CleanPairPoset:
    """All pairs of an f-invariant subcomodule and a compatible idempotent
    whose difference from f is a unit on the subcomodule, with the maximal
    entries of the containment-plus-agreement order.

    The unit condition is equivalent to the subcomodule meeting the kernel
    of the difference trivially, so each idempotent costs one kernel plus
    bitmask intersections.  Maximality is decided by searching for a
    strict dominator: an entry on a strictly larger subcomodule whose
    idempotent agrees on the smaller one.
    """
    if info is None:
        info = lattice_info(m, cap)
    if ring is None:
        ring = end_ring(m)
    if not ring.contains(f):
        raise PreconditionError("f is not a comodule endomorphism")
    if tables is None:
        tables = end_tables(info, ring, cap)

    f_images = node_images(info, f)
    f_mask = node_invariance_mask(info, f_images)

    node_count = len(info.nodes)
    entries: list[tuple[int, int]] = []  # (node index, idempotent index)
    restricted = set()
    for ci, e in enumerate(tables.idems):
        d = f - e
        ker_h = kernel(d.transpose())
        ki = info.index.get(ker_h.entries)
        if ki is None:
            raise InternalCheckError("kernel of a comodule morphism is not a node")
        ker_atoms = info.atom_masks[ki]
        mask = f_mask & tables.invariant_mask[ci]
        for ni in range(node_count):
            if not (mask >> ni) & 1:
                continue
            if info.atom_masks[ni] & ker_atoms:
                continue
            entries.append((ni, ci))
            restricted.add((ni, tables.images[ci][ni]))

    by_node: dict[int, list[int]] = {}
    for idx, (ni, ci) in enumerate(entries):
        by_node.setdefault(ni, []).append(idx)
    full_entry_idems = [ci for ni, ci in entries if ni == info.full_index]

    maximal = []
    cm = info.contains_matrix
    for idx, (ni, ci) in enumerate(entries):
        if ni == info.full_index:
            maximal.append(idx)  # nothing sits strictly above the full carrier
            continue
        here = tables.images[ci][ni]
        dominated = any(tables.images[cj][ni] == here for cj in full_entry_idems)
        if not dominated:
            for nj, idxs in by_node.items():
                if nj == ni or not cm[nj][ni]:
                    continue
                if any(tables.images[entries[j][1]][ni] == here for j in idxs):
                    dominated = True
                    break
        if not dominated:
            maximal.append(idx)

    pairs = tuple(CleanPair(info.nodes[ni], tables.idems[ci])
                  for ni, ci in entries)
    return CleanPairPoset(f, pairs, tuple(maximal), len(restricted))


def poset_maximality_check(m: Comodule, f: RMatrix, info: LatticeInfo,
                           ring: EndRing,
                           cap: int = DEFAULT_MAX_ELEMENTS,
                           tables: EndTables | None = None,
                           poset: CleanPairPoset | None = None) -> SweepVerdict:
    """Maximal entries of the partial-witness poset must be exactly the
    entries on the whole comodule, and the trivial zero pair must exist."""
    if poset is None:
        poset = clean_pair_poset(m, f, info, ring, cap, tables)
    failures = []
    for i, pair in enumerate(poset.entries):
        if (i in poset.maximal) != pair.w.is_full:
            failures.append((f, pair))
    if not any(pair.w.is_zero and pair.e.is_zero for pair in poset.entries):
        failures.append((f, "zero pair missing"))
    return SweepVerdict(not failures, len(poset.entries), tuple(failures))


def clean_extension_check(m: Comodule, f: RMatrix, info: LatticeInfo,
                          ring: EndRing,
                          cap: int = DEFAULT_MAX_ELEMENTS,
                          tables: EndTables | None = None,
                          poset: CleanPairPoset | None = None) -> SweepVerdict:
    """Every partial witness extends to a full clean decomposition whose
    idempotent restricts to the partial one."""
    if tables is None:
        tables = end_tables(info, ring, cap)
    if poset is None:
        poset = clean_pair_poset(m, f, info, ring, cap, tables)
    clean_idems = [ci for ci, e in enumerate(tables.idems)
                   if is_unit_matrix(f - e)]
    failures = []
    for pair in poset.entries:
        ni = info.node_index(pair.w)
        wanted = tuple(pair.e.apply(g) for g in pair.w.generator_rows())
        if not any(tables.images[ci][ni] == wanted for ci in clean_idems):
            failures.append(pair)
    return SweepVerdict(not failures, len(poset.entries), tuple(failures))


@dataclass(frozen=True)
class PinnedDecomposition:
    e: RMatrix
    u: RMatrix
    unit_restricts_to_identity: bool


def pinned_clean_decomposition_check(m: Comodule, f: RMatrix,
                                     w1: Subcomodule, w2: Subcomodule,
                                     ring: EndRing,
                                     cap: int = DEFAULT_MAX_ELEMENTS,
                                     tables: EndTables | None = None,
                                     info: LatticeInfo | None = None
                                     ) -> PinnedDecomposition | None:
    """A clean decomposition of f whose idempotent vanishes on w1 and fixes
    w2 pointwise; additionally reports whether the unit also fixes w2 (a
    diagnostic only, not asserted)."""
    if not sub_intersect(w1, w2).is_zero:
        raise PreconditionError("the two subcomodules must be disjoint")
    fw1 = restrict_endomorphism(f, w1)
    if fw1 is None or not fw1.is_bijective():
        raise PreconditionError("f must restrict to an automorphism of w1")
    ident = ring.identity_matrix()
    gw2 = restrict_endomorphism(ident - f, w2)
    if gw2 is None or not gw2.is_bijective():
        raise PreconditionError("1 - f must restrict to an automorphism of w2")
    if tables is not None and info is not None:
        i1 = info.node_index(w1)
        i2 = info.node_index(w2)
        candidates = [
            e for ci, e in enumerate(tables.idems)
            if (tables.zero_mask[ci] >> i1) & 1 and (tables.identity_mask[ci] >> i2) & 1
        ]
    else:
        candidates = [e for e in idempotents(ring, cap)
                      if maps_to_zero(e, w1) and acts_as_identity(e, w2)]
    for e in candidates:
        u = f - e
        if is_unit_matrix(u):
            return PinnedDecomposition(e, u, acts_as_identity(u, w2))
    return None


def maximal_preimage_check(m: Comodule, f: RMatrix, info: LatticeInfo,
                           ring: EndRing,
                           cap: int = DEFAULT_MAX_ELEMENTS,
                           tables: EndTables | None = None,
                           poset: CleanPairPoset | None = None) -> SweepVerdict:
    """For every maximal partial witness (w, e) and every subcomodule x
    disjoint from w: nothing nonzero in x lands in w under f, and inside
    the sum of w and x the preimage of w is exactly w."""
    if poset is None:
        poset = clean_pair_poset(m, f, info, ring, cap, tables)
    failures = []
    checked = 0
    for i in poset.maximal:
        pair = poset.entries[i]
        w = pair.w
        wi = info.node_index(w)
        for xi, xnode in enumerate(info.nodes):
            if not info.disjoint(wi, xi):
                continue
            checked += 1
            for xv in span_elements(xnode.gens, cap):
                if w.contains_vector(f.apply(xv)) and any(xv):
                    failures.append(("nonzero into w", pair, xnode, xv))
            total = sub_sum(w, xnode)
            for mv in span_elements(total.gens, cap):
                if w.contains_vector(f.apply(mv)) and not w.contains_vector(mv):
                    failures.append(("preimage escapes w", pair, xnode, mv))
    return SweepVerdict(not failures, checked, tuple(failures))
