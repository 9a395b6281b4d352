"""Estimators and verdicts over trial logs."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundResult
from .core import Expression, TrialLog

VIOLATION_SIGMAS = 3.0


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class TermEstimate:
    estimate: float
    count: int
    std_error: float


@dataclass(frozen=True)
class Verdict:
    violated: bool
    margin: float
    z_score: float | None
    gamma_mean: float
    bound_min: int
    bound_max: int
    std_error: float

    @property
    def label(self) -> str:
        return "violated" if self.violated else "respected"

    def to_dict(self) -> dict:
        return {
            "verdict": self.label,
            "margin": self.margin,
            "z_score": self.z_score,
            "gamma_mean": self.gamma_mean,
            "bound_min": self.bound_min,
            "bound_max": self.bound_max,
            "std_error": self.std_error,
        }


@dataclass
class CorrelationReport:
    per_term: list[TermEstimate]
    gamma_mean: float
    singles: dict[tuple[str, str], float]
    gamma_per_trial: np.ndarray | None = field(default=None, repr=False)
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def combined_std_error(self) -> float:
        return math.sqrt(sum(t.std_error**2 for t in self.per_term))

    def to_dict(self) -> dict:
        out = {
            "per_term": [
                {"term": i, "estimate": t.estimate, "count": t.count, "std_error": t.std_error}
                for i, t in enumerate(self.per_term)
            ],
            "gamma_mean": self.gamma_mean,
            "combined_std_error": self.combined_std_error,
            "singles": [
                {"setting": s, "station": st, "mean": m} for (s, st), m in sorted(self.singles.items())
            ],
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
        }
        if self.gamma_per_trial is not None:
            g = self.gamma_per_trial
            values, counts = np.unique(g, return_counts=True)
            out["gamma_per_trial"] = {
                "trials": int(g.size),
                "min": int(g.min()),
                "histogram": {str(int(v)): int(c) for v, c in zip(values, counts)},
            }
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("term,estimate,count,std_error\n")
        for i, t in enumerate(self.per_term):
            buf.write(f"{i},{t.estimate!r},{t.count},{t.std_error!r}\n")
        return buf.getvalue()


def _term_products(log: TrialLog, expr: Expression) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per term: (times, product values) over the dates measuring it."""
    sched = log.schedule
    offsets = sched.offsets
    collected: list[list[tuple[np.ndarray, np.ndarray]]] = [[] for _ in range(expr.T)]
    for p, pattern in enumerate(sched.patterns):
        times = np.flatnonzero(sched.assignment == p)
        if times.size == 0:
            continue
        base = offsets[times]
        prods = {}
        for k, e in enumerate(pattern):
            column = log.values[base + k].astype(np.int64)
            for ti, _ in e.term_slots:
                prods[ti] = prods.get(ti, 1) * column
        for ti, prod in prods.items():
            collected[ti].append((times, prod))
    out = []
    for parts in collected:
        if not parts:
            out.append((np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)))
            continue
        times = np.concatenate([t for t, _ in parts])
        vals = np.concatenate([v for _, v in parts])
        order = np.argsort(times, kind="stable")
        out.append((times[order], vals[order]))
    return out


def gamma_per_trial(log: TrialLog, expr: Expression | None = None) -> np.ndarray:
    """Sum of term products at every date; needs every term at every date."""
    expr = log.schedule.expression if expr is None else expr
    sched = log.schedule
    for p in range(len(sched.patterns)):
        if np.any(sched.assignment == p) and sched.pattern_terms(p) != tuple(range(expr.T)):
            raise AnalysisError("schedule does not co-date all terms at every trial")
    gamma = np.zeros(sched.trials, dtype=np.int64)
    for times, prods in _term_products(log, expr):
        gamma[times] += prods
    return gamma


def mean_correlations(log: TrialLog, expr: Expression | None = None) -> CorrelationReport:
    """Per-term product means, their sum, and singles marginals.

    Products are integers, so sums are exact and independent of order.
    """
    expr = log.schedule.expression if expr is None else expr
    per_term = []
    for ti, (_, prods) in enumerate(_term_products(log, expr)):
        n = int(prods.size)
        if n == 0:
            raise AnalysisError(f"term {ti} was never measured")
        s = int(prods.sum())
        mean = s / n
        if n > 1:
            # ±1 data: sum of squares is n
            var = max(0.0, (n - s * s / n) / (n - 1))
            se = math.sqrt(var / n)
        else:
            se = 0.0
        per_term.append(TermEstimate(mean, n, se))

    singles: dict[tuple[str, str], list[int]] = {}
    sched = log.schedule
    offsets = sched.offsets
    for p, pattern in enumerate(sched.patterns):
        base = offsets[sched.assignment == p]
        for k, e in enumerate(pattern):
            col = log.values[base + k]
            acc = singles.setdefault((e.setting, e.station), [0, 0])
            acc[0] += int(col.astype(np.int64).sum())
            acc[1] += int(col.size)
    singles_mean = {k: s / n for k, (s, n) in singles.items() if n}

    try:
        g = gamma_per_trial(log, expr)
    except AnalysisError:
        g = None
    return CorrelationReport(per_term, math.fsum(t.estimate for t in per_term), singles_mean, g)


def verdict(report: CorrelationReport, bound: BoundResult) -> Verdict:
    """Compare the mean against a bound with a 3-sigma allowance.

    ``margin`` is the distance outside ``[min, max]`` (negative when inside).
    """
    se = report.combined_std_error
    g = report.gamma_mean
    margin = max(bound.min - g, g - bound.max)
    violated = margin > VIOLATION_SIGMAS * se
    if se > 0:
        z = margin / se
    else:
        z = None
    return Verdict(violated, margin, z, g, bound.min, bound.max, se)
