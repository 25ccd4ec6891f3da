"""Trial summaries, Wilson intervals and bound verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.stats import binomtest

WITHIN = "WithinBound"
VIOLATES = "Violates"
NO_BOUND = "NoBound"


@dataclass(frozen=True)
class Bound:
    """A theoretical value the estimate is compared against.

    ``relation`` is ``"<="`` (estimate should not exceed ``value``), ``">="``
    or ``"=="``.
    """

    formula: str
    value: float
    relation: str = "<="

    def to_dict(self) -> dict:
        return {"formula": self.formula, "value": self.value, "relation": self.relation}


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    lo, hi = float(ci.low), float(ci.high)
    est = successes / trials
    # guard against rounding pushing the point estimate just outside
    return (min(lo, est), max(hi, est))


def sigma(p: float, trials: int) -> float:
    """Standard error of a proportion."""
    return math.sqrt(max(p * (1 - p), 0.0) / trials)


@dataclass
class TrialSummary:
    trials: int
    successes: int
    estimate: float
    ci95: tuple[float, float]
    bound: Optional[Bound] = None
    verdict: str = NO_BOUND
    event: str = "success"
    extra: dict = field(default_factory=dict)
    scenario: Optional[str] = None
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    runtime_ms: Optional[float] = None

    def to_dict(self, timing: bool = False) -> dict:
        """JSON-ready dict. ``runtime_ms`` is left out unless ``timing`` so equal seeds give equal bytes."""
        doc = {
            "scenario": self.scenario,
            "params": self.params,
            "seed": self.seed,
            "trials": self.trials,
            "successes": self.successes,
            "event": self.event,
            "estimate": self.estimate,
            "ci95": list(self.ci95),
            "bound": None if self.bound is None else self.bound.to_dict(),
            "verdict": self.verdict,
            "extra": self.extra,
        }
        if timing:
            doc["runtime_ms"] = None if self.runtime_ms is None else round(self.runtime_ms, 3)
        return doc


def judge(ci: tuple[float, float], bound: Optional[Bound]) -> str:
    """Violates only when the whole 95% interval sits on the wrong side of the bound."""
    if bound is None:
        return NO_BOUND
    lo, hi = ci
    if bound.relation == "<=":
        ok = lo <= bound.value
    elif bound.relation == ">=":
        ok = hi >= bound.value
    elif bound.relation == "==":
        ok = lo <= bound.value <= hi
    else:
        raise ValueError(f"unknown relation {bound.relation!r}")
    return WITHIN if ok else VIOLATES


def summarize(trials: int, successes: int, bound: Optional[Bound] = None, event: str = "success", **extra) -> TrialSummary:
    if trials < 1:
        raise ValueError("a summary needs at least one trial")
    ci = wilson_interval(successes, trials)
    return TrialSummary(
        trials=trials,
        successes=successes,
        estimate=successes / trials,
        ci95=ci,
        bound=bound,
        verdict=judge(ci, bound),
        event=event,
        extra=dict(extra),
    )
