"""Result containers for the randomized property suites."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

PASS = "pass"
FAIL = "fail"
EXPLORE = "explore"


def _plain(obj):
    """Convert numpy scalars/arrays (possibly nested) to JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    if hasattr(obj, "values") and not callable(obj.values):
        return _plain(np.asarray(obj.values))
    return obj


@dataclass
class AxiomResult:
    """Outcome of one sampled property.

    ``expected`` is ``"pass"`` (no failures allowed), ``"fail"`` (a documented
    counterexample must be found) or ``"explore"`` (informational only).
    """

    axiom: str
    trials: int = 0
    failures: int = 0
    first_counterexample: object = None
    expected: str = PASS

    def record(self, ok: bool, witness=None):
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.first_counterexample is None:
                self.first_counterexample = witness

    def record_batch(self, ok: np.ndarray, witnesses):
        """``witnesses(i)`` builds the counterexample for row ``i`` lazily."""
        ok = np.asarray(ok, dtype=bool)
        self.trials += int(ok.size)
        bad = np.flatnonzero(~ok)
        self.failures += int(bad.size)
        if bad.size and self.first_counterexample is None:
            self.first_counterexample = witnesses(int(bad[0]))

    @property
    def as_expected(self) -> bool:
        if self.expected == PASS:
            return self.failures == 0
        if self.expected == FAIL:
            return self.failures > 0
        return True

    def to_dict(self):
        d = asdict(self)
        d["first_counterexample"] = _plain(self.first_counterexample)
        d["as_expected"] = self.as_expected
        return d


@dataclass
class PropertyReport:
    title: str
    results: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, result: AxiomResult) -> AxiomResult:
        self.results.append(result)
        return result

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def __contains__(self, axiom):
        return any(r.axiom == axiom for r in self.results)

    @property
    def as_expected(self) -> bool:
        return all(r.as_expected for r in self.results)

    @property
    def total_failures(self) -> int:
        return sum(r.failures for r in self.results if r.expected == PASS)

    def to_dict(self):
        return {
            "title": self.title,
            "meta": _plain(self.meta),
            "as_expected": self.as_expected,
            "results": [r.to_dict() for r in self.results],
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)

    def summary(self) -> str:
        lines = [self.title]
        for r in self.results:
            flag = "ok " if r.as_expected else "BAD"
            lines.append(
                f"  [{flag}] {r.axiom}: {r.failures}/{r.trials} failures (expected {r.expected})"
            )
        return "\n".join(lines)
