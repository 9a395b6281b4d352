"""Runs a model against a schedule to produce a reproducible trial log."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Expression, PatternEvent, Schedule, TrialLog, validate_schedule
from .models import Model
from .rng import ROTATION_DRAW, check_seed, uniforms

ROTATIONS = ("round-robin", "uniform-random")
DEFAULT_SEED = 20091


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    seed: int = DEFAULT_SEED
    term_rotation: str = "round-robin"
    workers: int = 1

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("N must be at least 1")
        check_seed(self.seed)
        if self.term_rotation not in ROTATIONS:
            raise ValueError(f"term_rotation must be one of {ROTATIONS}")
        if int(self.workers) < 1:
            raise ValueError("workers must be at least 1")


def term_pattern(expr: Expression, terms) -> tuple[PatternEvent, ...]:
    """Measurements needed at one date to fill every slot of ``terms``.

    Slots sharing a (station, setting) pair are served by a single
    measurement; the result may still repeat a station, which validation
    reports.
    """
    events: dict[tuple[str, str], list] = {}
    for ti in terms:
        for si, slot in enumerate(expr.terms[ti].slots):
            events.setdefault((slot.station, slot.setting), []).append((ti, si))
    return tuple(PatternEvent(st, se, tuple(ts)) for (st, se), ts in events.items())


def build_schedule(expr: Expression, n: int, rotation: str = "round-robin", seed: int = DEFAULT_SEED) -> Schedule:
    """All terms at every date when ``expr.co_dated``, else one term per date.

    One-term-per-date schedules pick the term round-robin or uniformly at
    random from ``(seed, date)``.
    """
    if n < 1:
        raise ValueError("N must be at least 1")
    if expr.co_dated:
        return Schedule(expr, (term_pattern(expr, range(expr.T)),), np.zeros(n, dtype=np.int64))
    patterns = tuple(term_pattern(expr, [t]) for t in range(expr.T))
    times = np.arange(n, dtype=np.int64)
    if rotation == "round-robin":
        assignment = times % expr.T
    elif rotation == "uniform-random":
        u = uniforms(seed, times, ROTATION_DRAW)
        assignment = np.minimum((u * expr.T).astype(np.int64), expr.T - 1)
    else:
        raise ValueError(f"unknown rotation {rotation!r}; choose from {ROTATIONS}")
    return Schedule(expr, patterns, assignment)


def _chunks(times: np.ndarray, parts: int) -> list[np.ndarray]:
    parts = max(1, min(parts, times.size))
    return [c for c in np.array_split(times, parts) if c.size]


def run(model: Model, schedule: Schedule, config: RunConfig) -> TrialLog:
    """Outcome of every scheduled measurement.

    Trials are grouped by pattern and answered in chunks, optionally on
    several threads; randomness is keyed by ``(seed, trial)`` so the log does
    not depend on ``config.workers``.
    """
    if config.n != schedule.trials:
        raise ScheduleError(f"config asks for {config.n} trials but the schedule has {schedule.trials}")
    problems = validate_schedule(schedule)
    if problems:
        raise ScheduleError("invalid schedule: " + "; ".join(problems[:5]))
    for pattern in schedule.patterns:
        model.check_group(pattern)

    offsets = schedule.offsets
    values = np.zeros(schedule.event_count, dtype=np.int8)
    jobs = []
    for p, pattern in enumerate(schedule.patterns):
        times = np.flatnonzero(schedule.assignment == p)
        jobs.extend((pattern, chunk) for chunk in _chunks(times, config.workers))

    def work(job):
        pattern, times = job
        return times, len(pattern), model.sample(pattern, times, config.seed)

    if config.workers == 1:
        results = map(work, jobs)
    else:
        pool = ThreadPoolExecutor(config.workers)
        results = pool.map(work, jobs)
    for times, width, block in results:
        idx = offsets[times][:, None] + np.arange(width)[None, :]
        values[idx.ravel()] = block.ravel()
    if config.workers != 1:
        pool.shutdown()
    return TrialLog(schedule, values, config.seed, model.name)
