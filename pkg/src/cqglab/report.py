"""Structured verification reports.

A report is a keyed collection of checks.  During long runs every finished
check is appended to a JSON-lines sidecar so partial results survive a
crash; ``finalize`` collapses the run into a single JSON document with the
checks sorted by name, which makes reports byte-comparable across runs
(timings excluded).
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    law: str            # identity being verified, or "plumbing"
    residual: float
    tol: float
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "law": self.law,
            "residual": float(self.residual),
            "tol": float(self.tol),
            "pass": self.passed,
            "runtime_ms": float(self.runtime_ms),
        }


@dataclass
class Report:
    metadata: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)   # name -> Check, order-independent
    _jsonl_path: str | None = None

    def attach_jsonl(self, path: str) -> None:
        self._jsonl_path = path
        open(path, "w").close()

    def add(self, check: Check) -> Check:
        if check.name in self.checks:
            raise ValueError(f"duplicate check name: {check.name}")
        self.checks[check.name] = check
        if self._jsonl_path:
            with open(self._jsonl_path, "a") as fh:
                fh.write(json.dumps(check.as_dict(), sort_keys=True) + "\n")
        return check

    def record(self, name: str, law: str, residual: float, tol: float,
               started: float | None = None) -> Check:
        ms = 0.0 if started is None else (time.perf_counter() - started) * 1e3
        return self.add(Check(name, law, float(residual), float(tol), ms))

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[Check]:
        return [c for c in self.checks.values() if not c.passed]

    def as_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "pass": self.passed,
            "checks": [self.checks[k].as_dict() for k in sorted(self.checks)],
        }

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def finalize(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")
        if self._jsonl_path and os.path.exists(self._jsonl_path):
            os.remove(self._jsonl_path)
            self._jsonl_path = None

    def summary_lines(self):
        for name in sorted(self.checks):
            c = self.checks[name]
            status = "PASS" if c.passed else "FAIL"
            yield f"{status} {c.name}: residual {c.residual:.3e} (tol {c.tol:.1e})"
