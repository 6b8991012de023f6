"""Deterministic reports: an echo of the command, check statuses and value dumps."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .finset import FinSet, SetMap, sort_key

SCHEMA = "fincat.report/1"


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""


def canonical(x: Any) -> Any:
    """JSON-ready form; sets are sorted, mappings with non-string keys become pair lists."""
    if isinstance(x, FinSet):
        return [canonical(e) for e in x.elements]
    if isinstance(x, SetMap):
        return [[canonical(a), canonical(b)] for a, b in x.graph()]
    if isinstance(x, (set, frozenset)):
        return [canonical(e) for e in sorted(x, key=sort_key)]
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: canonical(v) for k, v in x.items()}
        return [[canonical(k), canonical(v)] for k, v in x.items()]
    if isinstance(x, (list, tuple)):
        return [canonical(e) for e in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def render(x: Any) -> str:
    """Compact one-line text form."""
    if isinstance(x, FinSet):
        return "{" + ", ".join(render(e) for e in x.elements) + "}"
    if isinstance(x, SetMap):
        return "{" + ", ".join(f"{render(a)} -> {render(b)}" for a, b in x.graph()) + "}"
    if isinstance(x, (set, frozenset)):
        return "{" + ", ".join(render(e) for e in sorted(x, key=sort_key)) + "}"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{render(k)}: {render(v)}" for k, v in x.items()) + "}"
    if isinstance(x, list):
        return "[" + ", ".join(render(e) for e in x) + "]"
    if isinstance(x, tuple):
        return "(" + ", ".join(render(e) for e in x) + ("," if len(x) == 1 else "") + ")"
    return str(x)


class Report:
    def __init__(self, command: list):
        self.command = list(command)
        self.checks: list = []
        self.values: list = []

    def ok(self, name: str, detail: str = "") -> None:
        self.checks.append(Check(name, "pass", detail))

    def fail(self, name: str, witness: str) -> None:
        self.checks.append(Check(name, "fail", witness))

    def skip(self, name: str, reason: str) -> None:
        self.checks.append(Check(name, "skip", reason))

    def value(self, name: str, data: Any) -> None:
        self.values.append((name, data))

    def extend(self, other: "Report", prefix: str = "") -> None:
        self.checks += [Check(prefix + c.name, c.status, c.detail) for c in other.checks]
        self.values += [(prefix + n, v) for n, v in other.values]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def text(self) -> str:
        lines = ["command: " + " ".join(self.command)]
        for n, v in self.values:
            lines.append(f"{n} = {render(v)}")
        for c in self.checks:
            tail = f"  [{c.detail}]" if c.detail else ""
            lines.append(f"{c.status.upper()} {c.name}{tail}")
        n_fail = sum(c.status == "fail" for c in self.checks)
        n_pass = sum(c.status == "pass" for c in self.checks)
        n_skip = sum(c.status == "skip" for c in self.checks)
        lines.append(f"summary: {n_pass} passed, {n_fail} failed, {n_skip} skipped")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "command": self.command,
            "status": "pass" if self.passed else "fail",
            "values": [{"name": n, "value": canonical(v)} for n, v in self.values],
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
