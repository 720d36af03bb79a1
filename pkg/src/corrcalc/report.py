"""Run configuration and deterministic suite reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = 100
    field_char: int = 7          # prime p, or 0 for exact rationals
    max_set: int = 4
    max_dim: int = 3
    max_edges: int = 6
    suite: str = ""

    def validate(self):
        if self.trials < 0 or self.max_set <= 0 or self.max_dim <= 0 \
           or self.max_edges <= 0:
            raise ValueError("caps must be positive and trials non-negative")
        if self.field_char < 0:
            raise ValueError("field must be a prime or 0 for rationals")


@dataclass
class Report:
    """Outcome of a verification suite.

    ``failures`` holds fully serialized counterexamples; a report with
    zero failures is a pass.  Reports for a fixed (config, inputs) pair
    are byte-identical across runs.
    """

    suite: str
    passes: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, counterexample=None):
        if ok:
            self.passes += 1
        else:
            self.failures.append(counterexample or {})

    def note(self, text: str):
        self.notes.append(text)

    def merge(self, other: "Report"):
        self.passes += other.passes
        self.failures.extend(other.failures)
        self.notes.extend(f"{other.suite}: {n}" for n in other.notes)
        return self

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passes": self.passes,
            "failures": self.failures,
            "notes": self.notes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, default=_fallback)

    def summary(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"[{mark}] {self.suite}: {self.passes} checks, {len(self.failures)} failures"


def _fallback(o):
    return repr(o)


class Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False
