"""Structured, machine-readable reports with a stable schema.

A report is a flat list of named check results plus instance and cap
metadata.  Rendering is deterministic for fixed inputs and seed; the only
fields that vary between runs are the per-check timings, which consumers
are expected to normalize before byte comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .linalg import RMatrix
from .subcomodule import Subcomodule

TOOL_NAME = "comodkit"
TOOL_VERSION = "0.1.0"

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
CAP = "cap-exceeded"


def matrix_json(t: RMatrix) -> list[list[int]]:
    return [list(r) for r in t.rows_list()]


def sub_json(s: Subcomodule) -> list[list[int]]:
    return matrix_json(s.gens)


@dataclass
class CheckResult:
    name: str
    verdict: str
    comodule: str | None = None
    millis: int = 0
    details: dict = field(default_factory=dict)
    witnesses: dict | None = None
    counterexample: dict | None = None
    reason: str | None = None

    def to_dict(self, include_witnesses: bool) -> dict:
        return {
            "name": self.name,
            "comodule": self.comodule,
            "verdict": self.verdict,
            "details": self.details,
            "witnesses": self.witnesses if include_witnesses else None,
            "counterexample": self.counterexample,
            "reason": self.reason,
            "millis": self.millis,
        }


@dataclass
class Report:
    instance: dict
    caps: dict
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    def exit_code(self) -> int:
        if any(c.verdict == FAIL for c in self.checks):
            return 1
        if any(c.verdict == CAP for c in self.checks):
            return 3
        return 0

    def to_dict(self, include_witnesses: bool = False) -> dict:
        return {
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "instance": self.instance,
            "caps": self.caps,
            "seed": self.seed,
            "checks": [c.to_dict(include_witnesses) for c in self.checks],
        }

    def render_json(self, include_witnesses: bool = False) -> str:
        return json.dumps(self.to_dict(include_witnesses), indent=2,
                          sort_keys=False) + "\n"

    def render_text(self, include_witnesses: bool = False) -> str:
        lines = [f"{TOOL_NAME} {TOOL_VERSION}"]
        for key, value in self.instance.items():
            lines.append(f"  {key}: {value}")
        lines.append(f"  caps: {self.caps}  seed: {self.seed}")
        lines.append("")
        for c in self.checks:
            scope = f" [{c.comodule}]" if c.comodule else ""
            line = f"{c.verdict.upper():<13} {c.name}{scope} ({c.millis} ms)"
            if c.reason:
                line += f"  -- {c.reason}"
            lines.append(line)
            if c.details:
                lines.append(f"    {_compact(c.details)}")
            if c.counterexample:
                lines.append(f"    counterexample: {_compact(c.counterexample)}")
            if include_witnesses and c.witnesses:
                lines.append(f"    witnesses: {_compact(c.witnesses)}")
        lines.append("")
        total = len(self.checks)
        failed = sum(1 for c in self.checks if c.verdict == FAIL)
        capped = sum(1 for c in self.checks if c.verdict == CAP)
        skipped = sum(1 for c in self.checks if c.verdict == SKIPPED)
        lines.append(
            f"{total} checks: {total - failed - capped - skipped} passed, "
            f"{failed} failed, {skipped} skipped, {capped} cap-exceeded"
        )
        return "\n".join(lines) + "\n"

    def render(self, fmt: str, include_witnesses: bool = False) -> str:
        if fmt == "json":
            return self.render_json(include_witnesses)
        return self.render_text(include_witnesses)


def _compact(d: dict) -> str:
    return json.dumps(d, sort_keys=False)
