"""Check reports: pass/fail entries with polynomial witnesses."""
from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class Witness:
    generator: str
    lhs: str
    rhs: str
    check: str = ""

    def to_dict(self):
        return {"generator": self.generator, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class Report:
    command: str
    entries: list = field(default_factory=list)  # (name, ok)
    witnesses: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    error: str | None = None
    elapsed_ms: float = 0.0
    data: dict = field(default_factory=dict)
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None and all(ok for _, ok in self.entries)

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if self.ok else "fail"

    def record(self, name, ok, witness: Witness | None = None):
        self.entries.append((name, bool(ok)))
        if not ok and witness is not None:
            witness.check = witness.check or name
            self.witnesses.append(witness)
        return bool(ok)

    def equal(self, name, lhs, rhs, generator=""):
        """Record whether two polynomials agree exactly."""
        diff = lhs - rhs
        ok = diff.is_zero() if hasattr(diff, "is_zero") else diff == 0
        return self.record(name, ok, Witness(str(generator), str(lhs), str(rhs)))

    def zero(self, name, value, generator=""):
        ok = value.is_zero() if hasattr(value, "is_zero") else value == 0
        return self.record(name, ok, Witness(str(generator), str(value), "0"))

    def failures(self):
        return [n for n, ok in self.entries if not ok]

    def merge(self, other: "Report", prefix=""):
        for n, ok in other.entries:
            self.entries.append((prefix + n, ok))
        for w in other.witnesses:
            self.witnesses.append(Witness(w.generator, w.lhs, w.rhs, prefix + w.check))
        self.lines.extend(other.lines)
        if other.error and not self.error:
            self.error = other.error
        return self

    def finish(self):
        self.elapsed_ms = (time.perf_counter() - self._t0) * 1000.0
        return self

    def summary(self) -> str:
        n = len(self.entries)
        bad = len(self.failures())
        if self.error:
            return f"{self.command}: error: {self.error}"
        return f"{self.command}: {self.status} ({n - bad}/{n} checks)"

    def to_dict(self, deterministic=False):
        d = {
            "command": self.command,
            "status": self.status,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
        if self.lines:
            d["output"] = list(self.lines)
        if self.error:
            d["error"] = self.error
        if not deterministic:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d
