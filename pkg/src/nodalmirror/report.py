"""Structured pass/fail records shared by every verification routine."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def _plain(x: Any) -> Any:
    # JSON-friendly copy; fractions become "p/q" strings so output stays exact
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class CheckRecord:
    name: str
    side: str = ""
    passed: bool = True
    dims_a: list | None = None
    dims_b: list | None = None
    dims_target: list | None = None
    diffs: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def fail(self, witness: Any) -> None:
        self.passed = False
        self.witnesses.append(witness)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "side": self.side,
                               "passed": self.passed}
        for key in ("dims_a", "dims_b", "dims_target"):
            val = getattr(self, key)
            if val is not None:
                out[key] = _plain(val)
        out["diffs"] = _plain(self.diffs)
        out["witnesses"] = _plain(self.witnesses)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class Report:
    title: str
    checks: list[CheckRecord] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def add(self, rec: CheckRecord) -> CheckRecord:
        self.checks.append(rec)
        return rec

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            if prefix:
                c.name = f"{prefix}{c.name}"
            self.checks.append(c)

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    def find(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"title": self.title, "verdict": self.verdict,
                "checks": [c.to_dict() for c in self.checks],
                "provenance": _plain(self.provenance)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.title}: {self.verdict.upper()}"]
        width = max((len(c.name) for c in self.checks), default=4)
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            extra = ""
            if c.dims_a is not None:
                extra += f" A={c.dims_a}"
            if c.dims_b is not None:
                extra += f" B={c.dims_b}"
            if c.dims_target is not None:
                extra += f" target={c.dims_target}"
            lines.append(f"  [{mark}] {c.name:<{width}}{extra}")
            for w in c.witnesses[:3]:
                lines.append(f"         witness: {_plain(w)}")
        return "\n".join(lines) + "\n"
