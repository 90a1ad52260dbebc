from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass
class ViolationReport:
    """Outcome of one property over many trials.

    Every record carries its own ``slack`` and ``allowance``.  The headline
    pair is taken from the trial with the largest ``slack - allowance``, so
    ``passed`` holds exactly when every trial is within its allowance.
    """

    property: str
    trials: int
    records: list = field(default_factory=list)
    worst_slack: float = 0.0
    allowance: float = 0.0
    worst_trial: Optional[int] = None
    passed: bool = True

    def __post_init__(self):
        if self.records:
            t = max(range(len(self.records)),
                    key=lambda k: self.records[k]["slack"] - self.records[k]["allowance"])
            self.worst_trial = t
            self.worst_slack = float(self.records[t]["slack"])
            self.allowance = float(self.records[t]["allowance"])
        self.passed = self.worst_slack <= self.allowance

    def violations(self) -> list:
        return [r for r in self.records if r["slack"] > r["allowance"]]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class DemoReport:
    """A construction with its raw component values and the checks derived from them."""

    name: str
    params: dict
    values: dict
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def to_json(*reports, meta: Optional[dict] = None) -> str:
    doc = {"schema": "mid.report/1", "reports": [r.to_dict() for r in reports]}
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=1)
