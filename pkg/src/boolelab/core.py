"""Domain types shared by every module: settings, observations, expressions,
schedules and trial logs."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class Outcome(int):
    """A dichotomic measurement result, either -1 or +1."""

    def __new__(cls, value):
        if isinstance(value, bool) or value not in (-1, 1):
            raise ValueError(f"outcome must be -1 or +1, got {value!r}")
        return super().__new__(cls, int(value))


@dataclass(frozen=True)
class Setting:
    id: str
    direction: tuple[float, float, float] | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("setting id must be nonempty")
        if self.direction is not None:
            vec = [float(x) for x in self.direction]
            norm = math.sqrt(sum(x * x for x in vec))
            if len(vec) != 3 or not math.isfinite(norm) or norm == 0.0:
                raise ValueError(f"setting {self.id!r}: direction must be a nonzero 3-vector")
            object.__setattr__(self, "direction", tuple(x / norm for x in vec))


@dataclass(frozen=True)
class Observation:
    setting: str
    station: str
    time: int
    value: Outcome

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("time index must be nonnegative")
        object.__setattr__(self, "value", Outcome(self.value))


class Slot(NamedTuple):
    setting: str
    station: str


@dataclass(frozen=True)
class Term:
    """A product of ±1 factors; coefficient is always +1."""

    slots: tuple[Slot, ...]

    def __post_init__(self):
        slots = tuple(Slot(*s) for s in self.slots)
        if not slots:
            raise ValueError("a term needs at least one slot")
        for s in slots:
            if not s.setting or not s.station:
                raise ValueError(f"empty setting or station in slot {s}")
        object.__setattr__(self, "slots", slots)

    @property
    def coefficient(self) -> int:
        return 1

    def __len__(self):
        return len(self.slots)


@dataclass(frozen=True)
class Expression:
    """Sum of product terms.

    ``co_dated`` says whether all terms are measured at one common time (the
    three-doctor arrangement) or each term at its own date. Time-aware
    labeling schemes use :meth:`term_date` for bare expressions.
    """

    terms: tuple[Term, ...]
    co_dated: bool = False

    def __post_init__(self):
        terms = tuple(t if isinstance(t, Term) else Term(tuple(t)) for t in self.terms)
        if not terms:
            raise ValueError("an expression needs at least one term")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[Sequence[str]]], co_dated: bool = False) -> "Expression":
        return cls(tuple(Term(tuple(Slot(*s) for s in term)) for term in pairs), co_dated)

    @property
    def T(self) -> int:
        return len(self.terms)

    def term_date(self, index: int) -> int:
        return 0 if self.co_dated else index

    @property
    def settings(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(s.setting for t in self.terms for s in t.slots))

    @property
    def stations(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(s.station for t in self.terms for s in t.slots))

    def to_dict(self) -> dict:
        return {
            "terms": [[[s.setting, s.station] for s in t.slots] for t in self.terms],
            "co_dated": self.co_dated,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Expression":
        return cls.from_pairs(data["terms"], bool(data.get("co_dated", False)))


def lg_expression(stations: Sequence[str] = ("Lille", "Lyon")) -> Expression:
    """A_a A_b + A_a A_c + A_b A_c with the given station layout.

    Two stations give the two-doctor form (a1 b2, a1 c2, b1 c2) measured on
    separate dates; three stations give the co-dated three-doctor form.
    """
    if len(stations) == 2:
        s1, s2 = stations
        return Expression.from_pairs(
            [[("a", s1), ("b", s2)], [("a", s1), ("c", s2)], [("b", s1), ("c", s2)]]
        )
    if len(stations) == 3:
        s1, s2, s3 = stations
        return Expression.from_pairs(
            [[("a", s1), ("b", s2)], [("a", s1), ("c", s3)], [("b", s2), ("c", s3)]],
            co_dated=True,
        )
    raise ValueError("the LG expression needs two or three stations")


# --------------------------------------------------------------------------
# schedules


class PatternEvent(NamedTuple):
    """One measurement within a time pattern: which slots it fills."""

    station: str
    setting: str
    term_slots: tuple[tuple[int, int], ...]


class MeasurementEvent(NamedTuple):
    station: str
    setting: str
    time: int
    term_slots: tuple[tuple[int, int], ...]


def _freeze_pattern(pattern) -> tuple[PatternEvent, ...]:
    return tuple(
        PatternEvent(str(e[0]), str(e[1]), tuple((int(t), int(s)) for t, s in e[2])) for e in pattern
    )


@dataclass(frozen=True, eq=False)
class Schedule:
    """Measurement plan for ``trials`` co-dated trial groups.

    Each time index uses one of a small set of ``patterns`` (lists of
    measurements); ``assignment[t]`` picks the pattern for time ``t``.
    """

    expression: Expression
    patterns: tuple[tuple[PatternEvent, ...], ...]
    assignment: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(_freeze_pattern(p) for p in self.patterns))
        a = np.array(self.assignment, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("schedule needs at least one trial group")
        if a.min() < 0 or a.max() >= len(self.patterns):
            raise ValueError("assignment references an undefined pattern")

    @property
    def trials(self) -> int:
        return int(self.assignment.size)

    def __eq__(self, other):
        if not isinstance(other, Schedule):
            return NotImplemented
        return (
            self.expression == other.expression
            and self.patterns == other.patterns
            and np.array_equal(self.assignment, other.assignment)
        )

    __hash__ = None

    def pattern_terms(self, p: int) -> tuple[int, ...]:
        return tuple(sorted({t for e in self.patterns[p] for t, _ in e.term_slots}))

    def terms_at(self, time: int) -> tuple[int, ...]:
        return self.pattern_terms(int(self.assignment[time]))

    @property
    def grouping(self) -> list[tuple[int, int, tuple[int, ...]]]:
        """Run-length view ``(start, stop, terms)`` of which terms each date feeds."""
        a = self.assignment
        cuts = np.flatnonzero(np.diff(a)) + 1
        starts = np.concatenate(([0], cuts))
        stops = np.concatenate((cuts, [a.size]))
        return [(int(s), int(e), self.pattern_terms(int(a[s]))) for s, e in zip(starts, stops)]

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(p) for p in self.patterns], dtype=np.int64)[self.assignment]

    @property
    def offsets(self) -> np.ndarray:
        """Index of each time's first event in the flat event order."""
        sizes = self.sizes
        return np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)

    @property
    def event_count(self) -> int:
        return int(self.sizes.sum())

    @property
    def events(self) -> list[MeasurementEvent]:
        out = []
        for t, p in enumerate(self.assignment):
            out.extend(MeasurementEvent(e.station, e.setting, t, e.term_slots) for e in self.patterns[p])
        return out

    @classmethod
    def from_events(cls, expression: Expression, events: Iterable, trials: int) -> "Schedule":
        by_time: dict[int, list] = {t: [] for t in range(trials)}
        for e in events:
            e = MeasurementEvent(str(e[0]), str(e[1]), int(e[2]), tuple(tuple(ts) for ts in e[3]))
            if not 0 <= e.time < trials:
                raise ValueError(f"event time {e.time} outside [0, {trials})")
            by_time[e.time].append(PatternEvent(e.station, e.setting, e.term_slots))
        index: dict[tuple, int] = {}
        assignment = []
        for t in range(trials):
            key = _freeze_pattern(by_time[t])
            assignment.append(index.setdefault(key, len(index)))
        return cls(expression, tuple(index), np.array(assignment))

    def to_dict(self) -> dict:
        return {
            "expression": self.expression.to_dict(),
            "patterns": [
                [{"station": e.station, "setting": e.setting, "term_slots": [list(ts) for ts in e.term_slots]} for e in p]
                for p in self.patterns
            ],
            "assignment": self.assignment.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Schedule":
        patterns = tuple(
            tuple(PatternEvent(e["station"], e["setting"], tuple(tuple(ts) for ts in e["term_slots"])) for e in p)
            for p in data["patterns"]
        )
        return cls(Expression.from_dict(data["expression"]), patterns, np.array(data["assignment"], dtype=np.int64))


def validate_schedule(schedule: Schedule, expr: Expression | None = None) -> list[str]:
    """Violations of the schedule invariants against ``expr`` (empty when valid).

    Checks are done per pattern and reported for the first date using it.
    """
    expr = schedule.expression if expr is None else expr
    violations = []
    first_time = {}
    for t, p in enumerate(schedule.assignment.tolist()):
        first_time.setdefault(p, t)
    for p, t in sorted(first_time.items(), key=lambda kv: kv[1]):
        pattern = schedule.patterns[p]
        seen_stations = set()
        filled: dict[tuple[int, int], int] = {}
        for e in pattern:
            if e.station in seen_stations:
                violations.append(f"station repeated at time {t}: {e.station} ({e.setting})")
            seen_stations.add(e.station)
            if not e.term_slots:
                violations.append(f"event feeds no term at time {t}: {e.station}/{e.setting}")
            for ti, si in e.term_slots:
                if not 0 <= ti < expr.T or not 0 <= si < len(expr.terms[ti]):
                    violations.append(f"invalid term slot ({ti}, {si}) at time {t}: {e.station}/{e.setting}")
                    continue
                slot = expr.terms[ti].slots[si]
                if (slot.setting, slot.station) != (e.setting, e.station):
                    violations.append(
                        f"slot mismatch at time {t}: term {ti} slot {si} expects "
                        f"{slot.setting}@{slot.station}, got {e.setting}@{e.station}"
                    )
                if (ti, si) in filled:
                    violations.append(f"slot filled twice at time {t}: term {ti} slot {si}")
                filled[(ti, si)] = 1
        for ti in sorted({ti for ti, _ in filled}):
            missing = [si for si in range(len(expr.terms[ti])) if (ti, si) not in filled]
            if missing:
                violations.append(f"term not co-dated at time {t}: term {ti} lacks slots {missing}")
    return violations


# --------------------------------------------------------------------------
# trial logs


@dataclass(frozen=True, eq=False)
class TrialLog:
    """Outcomes of one run, stored flat in the schedule's event order."""

    schedule: Schedule
    values: np.ndarray = field(repr=False)
    seed: int = 0
    model_name: str = ""

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int8)
        if v.shape != (self.schedule.event_count,):
            raise ValueError(f"expected {self.schedule.event_count} values, got {v.shape}")
        if not np.all(np.abs(v) == 1):
            raise ValueError("outcome values must be -1 or +1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        if not isinstance(other, TrialLog):
            return NotImplemented
        return (
            self.schedule == other.schedule
            and np.array_equal(self.values, other.values)
            and (self.seed, self.model_name) == (other.seed, other.model_name)
        )

    __hash__ = None

    def __len__(self):
        return int(self.values.size)

    @property
    def observations(self) -> list[Observation]:
        return [
            Observation(e.setting, e.station, e.time, Outcome(int(v)))
            for e, v in zip(self.schedule.events, self.values.tolist())
        ]

    def header(self) -> dict:
        return {"seed": self.seed, "model_name": self.model_name, "schedule": self.schedule.to_dict()}

    def _rows(self, fmt: str) -> str:
        sched = self.schedule
        def esc(text):
            return text.replace("{", "{{").replace("}", "}}")

        cells = [
            [
                fmt.format(
                    st=esc(json.dumps(e.station)), se=esc(json.dumps(e.setting)),
                    rst=esc(e.station), rse=esc(e.setting), t="{t}", v="{v}",
                )
                for e in p
            ]
            for p in sched.patterns
        ]
        values = self.values.tolist()
        out = []
        k = 0
        for t, p in enumerate(sched.assignment.tolist()):
            for cell in cells[p]:
                out.append(cell.format(t=t, v=values[k]))
                k += 1
        return "".join(out)

    def to_jsonl(self) -> str:
        """Header record followed by one observation record per line."""
        head = json.dumps({"record": "header", **self.header()}, sort_keys=True) + "\n"
        fmt = '{{{{"trial": {t}, "station": {st}, "setting": {se}, "time": {t}, "value": {v}}}}}\n'
        return head + self._rows(fmt)

    @classmethod
    def from_jsonl(cls, text: str) -> "TrialLog":
        lines = text.splitlines()
        head = json.loads(lines[0])
        if head.get("record") != "header":
            raise ValueError("log must start with a header record")
        schedule = Schedule.from_dict(head["schedule"])
        records = [json.loads(line) for line in lines[1:] if line.strip()]
        expected = schedule.events
        if len(records) != len(expected):
            raise ValueError(f"log has {len(records)} observations, schedule expects {len(expected)}")
        for r, e in zip(records, expected):
            if (r["time"], r["station"], r["setting"]) != (e.time, e.station, e.setting):
                raise ValueError(f"observation {r} does not match scheduled event {e}")
        return cls(schedule, np.array([r["value"] for r in records]), int(head["seed"]), head["model_name"])

    def to_csv(self) -> str:
        return "trial,station,setting,time,value\n" + self._rows("{t},{rst},{rse},{t},{v}\n")
