"""Line-oriented instance files: a ring, one coalgebra, optional comodules.

Grammar (UTF-8, ``#`` comments, 1-based basis indexes)::

    [ring]
    modulus = <n>

    [coalgebra]
    rank = <r>
    delta <j> = <c>*(<i>,<k>) [+ <c>*(<i>,<k>) ...]
    counit = <e1> ... <er>

    [comodule <name>]
    rank = <m>
    rho <j> = <c>*(<i>,<k>) [+ ...]

For ``delta``, both indexes of a term refer to the coalgebra basis; for
``rho``, the first index is a comodule basis index and the second a
coalgebra basis index.  Coefficients must already be reduced into
``[0, modulus)``.  Missing ``delta``/``rho`` lines leave zero columns
(caught later by axiom validation, not by the parser).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .coalgebra import Coalgebra
from .comodule import Comodule
from .linalg import RMatrix, RingSpec


class InstanceSyntaxError(ValueError):
    """Malformed input, positioned at line and column (both 1-based)."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


class InstanceSemanticError(ValueError):
    """Well-formed input with out-of-range indexes or residues."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


@dataclass(frozen=True)
class InstanceFile:
    ring: RingSpec
    coalgebra: Coalgebra
    comodules: tuple[tuple[str, Comodule], ...]

    def comodule_named(self, name: str) -> Comodule:
        for nm, m in self.comodules:
            if nm == name:
                return m
        raise KeyError(name)


_SECTION_RE = re.compile(r"\[(ring|coalgebra|comodule)(?:\s+([A-Za-z0-9_.-]+))?\]\s*$")
_KEYVAL_RE = re.compile(r"(\w+)\s*=\s*(.*)$")
_TERMLINE_RE = re.compile(r"(delta|rho)\s+(\d+)\s*=\s*(.*)$")
_TERM_RE = re.compile(r"\s*(\d+)\s*\*\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_instance(text: str) -> InstanceFile:
    """Parse and shape-check an instance file.

    Raises :class:`InstanceSyntaxError` with position for grammar errors and
    :class:`InstanceSemanticError` for range violations.  Structural axioms
    (coassociativity and friends) are deliberately not enforced here.
    """
    modulus: int | None = None
    ring: RingSpec | None = None
    coalg_rank: int | None = None
    delta_terms: dict[int, list[tuple[int, int, int]]] = {}
    counit: list[int] | None = None
    comodules: list[tuple[str, int | None, dict[int, list[tuple[int, int, int]]], int]] = []
    section: str | None = None
    seen_sections: set[str] = set()

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col = line.index(stripped[0]) + 1

        if stripped.startswith("["):
            match = _SECTION_RE.match(stripped)
            if not match:
                raise InstanceSyntaxError(
                    lineno, col, "expected [ring], [coalgebra] or [comodule <name>]")
            kind, name = match.group(1), match.group(2)
            if kind == "comodule":
                if name is None:
                    raise InstanceSyntaxError(lineno, col, "comodule section needs a name")
                if any(nm == name for nm, *_ in comodules):
                    raise InstanceSemanticError(lineno, f"duplicate comodule {name!r}")
                comodules.append((name, None, {}, lineno))
            else:
                if kind in seen_sections:
                    raise InstanceSemanticError(lineno, f"duplicate [{kind}] section")
                seen_sections.add(kind)
            section = kind
            continue

        if section is None:
            raise InstanceSyntaxError(lineno, col, "content before any section header")

        if section == "ring":
            kv = _KEYVAL_RE.match(stripped)
            if not kv or kv.group(1) != "modulus":
                raise InstanceSyntaxError(lineno, col, "expected 'modulus = <n>'")
            try:
                modulus = int(kv.group(2).strip())
            except ValueError:
                raise InstanceSyntaxError(
                    lineno, line.index("=") + 2, "modulus must be an integer") from None
            if modulus < 2:
                raise InstanceSemanticError(lineno, "modulus must be at least 2")
            ring = RingSpec(modulus)
            continue

        if section == "coalgebra":
            if ring is None:
                raise InstanceSemanticError(lineno, "[ring] must come before [coalgebra]")
            term = _TERMLINE_RE.match(stripped)
            if term:
                if term.group(1) != "delta":
                    raise InstanceSyntaxError(lineno, col, "expected 'delta' in [coalgebra]")
                if coalg_rank is None:
                    raise InstanceSemanticError(lineno, "rank must come before delta lines")
                j = int(term.group(2))
                if not 1 <= j <= coalg_rank:
                    raise InstanceSemanticError(
                        lineno, f"delta index {j} out of range 1..{coalg_rank}")
                if j in delta_terms:
                    raise InstanceSemanticError(lineno, f"duplicate delta line for index {j}")
                delta_terms[j] = _parse_terms(term.group(3), lineno,
                                              col + term.start(3),
                                              ring, coalg_rank, coalg_rank)
                continue
            kv = _KEYVAL_RE.match(stripped)
            if kv and kv.group(1) == "rank":
                try:
                    coalg_rank = int(kv.group(2).strip())
                except ValueError:
                    raise InstanceSyntaxError(lineno, col, "rank must be an integer") from None
                if coalg_rank < 1:
                    raise InstanceSemanticError(lineno, "coalgebra rank must be >= 1")
                continue
            if kv and kv.group(1) == "counit":
                if coalg_rank is None:
                    raise InstanceSemanticError(lineno, "rank must come before counit")
                parts = kv.group(2).split()
                if len(parts) != coalg_rank:
                    raise InstanceSemanticError(
                        lineno, f"counit needs exactly {coalg_rank} values")
                try:
                    counit = [int(p) for p in parts]
                except ValueError:
                    raise InstanceSyntaxError(lineno, col, "counit values must be integers") from None
                for v in counit:
                    if not 0 <= v < ring.modulus:
                        raise InstanceSemanticError(
                            lineno, f"counit value {v} out of range 0..{ring.modulus - 1}")
                continue
            raise InstanceSyntaxError(lineno, col,
                                      "expected 'rank', 'delta <j> = ...' or 'counit'")

        if section == "comodule":
            if ring is None or coalg_rank is None:
                raise InstanceSemanticError(lineno, "comodule sections need ring and coalgebra")
            name, m_rank, rho_terms, at = comodules[-1]
            term = _TERMLINE_RE.match(stripped)
            if term:
                if term.group(1) != "rho":
                    raise InstanceSyntaxError(lineno, col, "expected 'rho' in [comodule]")
                if m_rank is None:
                    raise InstanceSemanticError(lineno, "rank must come before rho lines")
                j = int(term.group(2))
                if not 1 <= j <= m_rank:
                    raise InstanceSemanticError(
                        lineno, f"rho index {j} out of range 1..{m_rank}")
                if j in rho_terms:
                    raise InstanceSemanticError(lineno, f"duplicate rho line for index {j}")
                rho_terms[j] = _parse_terms(term.group(3), lineno,
                                            col + term.start(3),
                                            ring, m_rank, coalg_rank)
                continue
            kv = _KEYVAL_RE.match(stripped)
            if kv and kv.group(1) == "rank":
                try:
                    m_rank = int(kv.group(2).strip())
                except ValueError:
                    raise InstanceSyntaxError(lineno, col, "rank must be an integer") from None
                if m_rank < 0:
                    raise InstanceSemanticError(lineno, "comodule rank must be >= 0")
                comodules[-1] = (name, m_rank, rho_terms, at)
                continue
            raise InstanceSyntaxError(lineno, col, "expected 'rank' or 'rho <j> = ...'")

    if ring is None:
        raise InstanceSemanticError(len(lines) or 1, "missing [ring] section")
    if coalg_rank is None:
        raise InstanceSemanticError(len(lines) or 1, "missing [coalgebra] rank")
    if counit is None:
        raise InstanceSemanticError(len(lines) or 1, "missing counit")

    r = coalg_rank
    delta_flat = [0] * (r * r * r)
    for j, terms in delta_terms.items():
        for c, i, k in terms:
            idx = ((i - 1) * r + (k - 1)) * r + (j - 1)
            delta_flat[idx] = (delta_flat[idx] + c) % ring.modulus
    coalg = Coalgebra(ring, r, RMatrix(ring, r * r, r, tuple(delta_flat)), tuple(counit))

    built = []
    for name, m_rank, rho_terms, at in comodules:
        if m_rank is None:
            raise InstanceSemanticError(at, f"comodule {name!r} has no rank")
        rho_flat = [0] * (m_rank * r * m_rank)
        for j, terms in rho_terms.items():
            for c, i, k in terms:
                idx = ((i - 1) * r + (k - 1)) * m_rank + (j - 1)
                rho_flat[idx] = (rho_flat[idx] + c) % ring.modulus
        built.append((name, Comodule(coalg, m_rank,
                                     RMatrix(ring, m_rank * r, m_rank, tuple(rho_flat)))))
    return InstanceFile(ring, coalg, tuple(built))


def _parse_terms(rhs: str, lineno: int, col: int, ring: RingSpec,
                 first_max: int, second_max: int) -> list[tuple[int, int, int]]:
    out = []
    pos = 0
    rhs = rhs.strip()
    if not rhs:
        raise InstanceSyntaxError(lineno, col, "empty term list")
    while True:
        m = _TERM_RE.match(rhs, pos)
        if not m:
            raise InstanceSyntaxError(lineno, col + pos,
                                      "expected a term of the form c*(i,k)")
        c, i, k = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if not 0 <= c < ring.modulus:
            raise InstanceSemanticError(
                lineno, f"coefficient {c} out of range 0..{ring.modulus - 1}")
        if not 1 <= i <= first_max:
            raise InstanceSemanticError(
                lineno, f"basis index {i} out of range 1..{first_max}")
        if not 1 <= k <= second_max:
            raise InstanceSemanticError(
                lineno, f"basis index {k} out of range 1..{second_max}")
        out.append((c, i, k))
        pos = m.end()
        if pos == len(rhs):
            return out
        if rhs[pos] != "+":
            raise InstanceSyntaxError(lineno, col + pos, "expected '+' between terms")
        pos += 1


def serialize_instance(inst: InstanceFile) -> str:
    """Canonical text form: fixed ordering and spacing, zero terms omitted."""
    out = ["[ring]", f"modulus = {inst.ring.modulus}", "", "[coalgebra]",
           f"rank = {inst.coalgebra.rank}"]
    r = inst.coalgebra.rank
    for j in range(1, r + 1):
        col = inst.coalgebra.delta.col_vec(j - 1)
        terms = [(c, idx // r + 1, idx % r + 1)
                 for idx, c in enumerate(col) if c]
        if terms:
            body = " + ".join(f"{c}*({i},{k})" for c, i, k in terms)
            out.append(f"delta {j} = {body}")
    out.append("counit = " + " ".join(str(v) for v in inst.coalgebra.counit))
    for name, m in inst.comodules:
        out.extend(["", f"[comodule {name}]", f"rank = {m.rank}"])
        for j in range(1, m.rank + 1):
            col = m.rho.col_vec(j - 1)
            terms = [(c, idx // r + 1, idx % r + 1)
                     for idx, c in enumerate(col) if c]
            if terms:
                body = " + ".join(f"{c}*({i},{k})" for c, i, k in terms)
                out.append(f"rho {j} = {body}")
    return "\n".join(out) + "\n"


def instance_digest(inst: InstanceFile) -> str:
    return hashlib.sha256(serialize_instance(inst).encode("utf-8")).hexdigest()


def load_instance(path: str) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
