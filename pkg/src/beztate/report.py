"""Check reports shared by the verifiers and the CLI."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class Check:
    name: str
    location: tuple
    status: str
    detail: str = ""
    seconds: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name, "location": list(self.location),
               "status": self.status, "detail": self.detail}
        if timing:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def add(self, name: str, location, ok: bool | None, detail: str = "", seconds: float = 0.0) -> Check:
        """Record a check; ``ok=None`` marks it inconclusive."""
        status = INCONCLUSIVE if ok is None else (PASS if ok else FAIL)
        c = Check(name, tuple(location), status, detail, seconds)
        self.checks.append(c)
        return c

    @contextmanager
    def timed(self, name: str, location):
        """Time a block that sets ``box["ok"]`` (and optionally ``box["detail"]``)."""
        box = {"ok": True, "detail": ""}
        start = time.perf_counter()
        yield box
        self.add(name, location, box["ok"], box["detail"], time.perf_counter() - start)

    def extend(self, other: Report) -> Report:
        self.checks.extend(other.checks)
        return self

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status != PASS]

    def to_json(self, timing: bool = False) -> dict:
        return {"status": self.status, "checks": [c.to_json(timing) for c in self.checks]}

    def summary(self) -> str:
        counts = {}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        parts = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        lines = [f"{self.status.upper()} ({parts or 'no checks'})"]
        for c in self.failures()[:10]:
            lines.append(f"  {c.status}: {c.name} at {c.location}: {c.detail}")
        return "\n".join(lines)
