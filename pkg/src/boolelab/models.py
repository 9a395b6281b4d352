"""Outcome-generating models.

Every model answers a co-dated group of measurement events through
``sample(events, times, seed)``, which is vectorised over the trial/time
indices that share the same event pattern. Randomness comes only from
:func:`boolelab.rng.uniforms`, so a trial's outcomes depend on nothing but
``(seed, trial)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import MeasurementEvent, Outcome, PatternEvent
from .rng import CounterStream, uniforms

#: order of the 8 outcomes of a JointTripleModel
TRIPLE_OUTCOMES = tuple(itertools.product((1, -1), repeat=3))


class ArityError(ValueError):
    pass


class Model:
    name = "model"
    arity: int | None = None

    def check_group(self, events: Sequence) -> None:
        if self.arity is not None and len(events) != self.arity:
            raise ArityError(f"{self.name} answers groups of {self.arity} events, got {len(events)}")

    def sample(self, events: Sequence[PatternEvent], times: np.ndarray, seed: int) -> np.ndarray:
        """Outcomes shaped ``(len(times), len(events))``, entries ±1 (int8)."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def respond(model: Model, events: Sequence[MeasurementEvent], stream: CounterStream) -> list[Outcome]:
    """Outcomes of one co-dated event group, drawn from ``stream``."""
    times = {e.time for e in events}
    if len(times) != 1:
        raise ValueError(f"event group is not co-dated: times {sorted(times)}")
    (time,) = times
    model.check_group(events)
    pattern = [PatternEvent(e.station, e.setting, e.term_slots) for e in events]
    row = model.sample(pattern, np.array([time], dtype=np.int64), stream.seed)[0]
    return [Outcome(int(v)) for v in row]


def _pm1(value) -> int:
    return int(Outcome(int(value)))


@dataclass(frozen=True)
class EvenOddCityModel(Model):
    """Deterministic city/date dependent responses.

    On even dates ``even_values`` apply, with the sign of each
    ``(setting, station)`` in ``flipped`` inverted; odd dates reverse every sign.
    The defaults give the two-doctor counterexample with Lyon as the station
    where ``b`` is negative.
    """

    station_flip: str = "Lyon"
    even_values: Mapping[str, int] = field(default_factory=lambda: {"a": 1, "b": 1, "c": -1})
    flipped_settings: tuple[str, ...] = ("b",)
    name = "even-odd-city"

    def __post_init__(self):
        object.__setattr__(self, "even_values", {k: _pm1(v) for k, v in dict(self.even_values).items()})

    def value(self, setting: str, station: str, time: int) -> int:
        try:
            v = self.even_values[setting]
        except KeyError:
            raise KeyError(f"{self.name} has no response for setting {setting!r}") from None
        if station == self.station_flip and setting in self.flipped_settings:
            v = -v
        return -v if time % 2 else v

    def sample(self, events, times, seed):
        self.check_group(events)
        times = np.asarray(times, dtype=np.int64)
        sign = np.where(times % 2 == 1, -1, 1).astype(np.int8)
        base = np.array([self.value(e.setting, e.station, 0) for e in events], dtype=np.int8)
        return sign[:, None] * base[None, :]

    def to_dict(self):
        return {
            "type": self.name,
            "station_flip": self.station_flip,
            "even_values": dict(sorted(self.even_values.items())),
            "flipped_settings": list(self.flipped_settings),
        }


@dataclass(frozen=True)
class IidHiddenVariableModel(Model):
    """A hidden variable drawn once per trial group, shared by every station."""

    lambda_values: tuple[str, ...]
    lambda_probs: tuple[float, ...]
    response_table: Mapping[tuple[str, str], int]
    name = "iid-hidden-variable"

    def __post_init__(self):
        lams = tuple(str(v) for v in self.lambda_values)
        probs = tuple(float(p) for p in self.lambda_probs)
        if not lams or len(lams) != len(probs):
            raise ValueError("lambda_values and lambda_probs must be nonempty and equally long")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("lambda_probs must be nonnegative and sum to 1")
        table = {(str(s), str(lam)): _pm1(v) for (s, lam), v in dict(self.response_table).items()}
        settings = {s for s, _ in table}
        missing = [(s, lam) for s in settings for lam in lams if (s, lam) not in table]
        if missing:
            raise ValueError(f"response_table is not total; missing {missing[:3]}")
        object.__setattr__(self, "lambda_values", lams)
        object.__setattr__(self, "lambda_probs", probs)
        object.__setattr__(self, "response_table", table)

    @classmethod
    def symmetric(cls, settings: Sequence[str] = ("a", "b", "c")) -> "IidHiddenVariableModel":
        """Equiprobable hidden variable enumerating every sign pattern of ``settings``."""
        patterns = list(itertools.product((1, -1), repeat=len(settings)))
        lams = tuple(f"l{i}" for i in range(len(patterns)))
        table = {(s, lam): pat[k] for lam, pat in zip(lams, patterns) for k, s in enumerate(settings)}
        return cls(lams, tuple([1.0 / len(lams)] * len(lams)), table)

    def draw_lambda(self, times, seed) -> np.ndarray:
        cum = np.cumsum(self.lambda_probs)
        last = max(i for i, p in enumerate(self.lambda_probs) if p > 0)
        idx = np.searchsorted(cum, uniforms(seed, times, 0), side="right")
        return np.minimum(idx, last)

    def sample(self, events, times, seed):
        self.check_group(events)
        lam = self.draw_lambda(times, seed)
        out = np.empty((len(times), len(events)), dtype=np.int8)
        for k, e in enumerate(events):
            try:
                row = np.array([self.response_table[(e.setting, l)] for l in self.lambda_values], dtype=np.int8)
            except KeyError:
                raise KeyError(f"{self.name} has no response for setting {e.setting!r}") from None
            out[:, k] = row[lam]
        return out

    def to_dict(self):
        return {
            "type": self.name,
            "lambda_values": list(self.lambda_values),
            "lambda_probs": list(self.lambda_probs),
            "response_table": [
                {"setting": s, "lambda": lam, "value": v} for (s, lam), v in sorted(self.response_table.items())
            ],
        }


@dataclass(frozen=True)
class EquipmentTimeParamModel(Model):
    """Deterministic responses driven by periodic device parameters.

    ``param_table[(setting, t mod period)]`` names the parameter in force and
    ``response_table[(setting, station, parameter)]`` gives the outcome.
    """

    period: int
    param_table: Mapping[tuple[str, int], str]
    response_table: Mapping[tuple[str, str, str], int]
    name = "equipment-time-param"

    def __post_init__(self):
        if int(self.period) < 1:
            raise ValueError("period must be at least 1")
        object.__setattr__(self, "period", int(self.period))
        params = {(str(s), int(ph)): str(v) for (s, ph), v in dict(self.param_table).items()}
        for s in {s for s, _ in params}:
            for ph in range(self.period):
                if (s, ph) not in params:
                    raise ValueError(f"param_table is not total; missing ({s!r}, {ph})")
        object.__setattr__(self, "param_table", params)
        object.__setattr__(
            self, "response_table", {(str(a), str(b), str(c)): _pm1(v) for (a, b, c), v in dict(self.response_table).items()}
        )

    def value(self, setting: str, station: str, time: int) -> int:
        try:
            param = self.param_table[(setting, time % self.period)]
            return self.response_table[(setting, station, param)]
        except KeyError as exc:
            raise KeyError(f"{self.name} has no response for {setting!r} at {station!r}: {exc}") from None

    def sample(self, events, times, seed):
        self.check_group(events)
        times = np.asarray(times, dtype=np.int64)
        phase = times % self.period
        out = np.empty((len(times), len(events)), dtype=np.int8)
        for k, e in enumerate(events):
            row = np.array([self.value(e.setting, e.station, ph) for ph in range(self.period)], dtype=np.int8)
            out[:, k] = row[phase]
        return out

    def to_dict(self):
        return {
            "type": self.name,
            "period": self.period,
            "param_table": [{"setting": s, "phase": ph, "param": p} for (s, ph), p in sorted(self.param_table.items())],
            "response_table": [
                {"setting": s, "station": st, "param": p, "value": v}
                for (s, st, p), v in sorted(self.response_table.items())
            ],
        }


def _unit(vec, what="direction") -> np.ndarray:
    v = np.asarray(vec, dtype=float)
    if v.shape != (3,) or abs(float(np.linalg.norm(v)) - 1.0) > 1e-12:
        raise ValueError(f"{what} must be a unit 3-vector, got {vec!r}")
    return v


def singlet_correlation(a, b) -> float:
    """Singlet-state correlation ``E = -a.b`` for unit measurement directions."""
    c = -float(np.dot(_unit(a), _unit(b)))
    return min(1.0, max(-1.0, c))


def sample_singlet_pairs(a, b, trials, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw outcome pairs from ``P(A, B) = (1 - A B a.b) / 4``.

    ``A`` is a fair sign and ``B = -A`` with probability ``(1 + a.b) / 2``.
    """
    cos = float(np.dot(_unit(a), _unit(b)))
    trials = np.asarray(trials, dtype=np.int64)
    first = np.where(uniforms(seed, trials, 0) < 0.5, 1, -1).astype(np.int8)
    opposite = uniforms(seed, trials, 1) < (1.0 + cos) / 2.0
    second = np.where(opposite, -first, first).astype(np.int8)
    return first, second


@dataclass(frozen=True)
class QuantumSingletModel(Model):
    """Spin-singlet pair sampler; one group = one pair measured at two stations."""

    directions: Mapping[str, tuple[float, float, float]]
    name = "quantum-singlet"
    arity = 2

    def __post_init__(self):
        dirs = {}
        for s, v in dict(self.directions).items():
            if v is None:
                raise ValueError(f"setting {s!r} has no direction vector")
            arr = np.asarray(v, dtype=float)
            dirs[str(s)] = tuple((arr / np.linalg.norm(arr)).tolist())
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def from_settings(cls, settings) -> "QuantumSingletModel":
        return cls({s.id: s.direction for s in settings})

    def direction(self, setting: str):
        try:
            return self.directions[setting]
        except KeyError:
            raise ValueError(f"setting {setting!r} has no direction vector") from None

    def sample(self, events, times, seed):
        self.check_group(events)
        first, second = sample_singlet_pairs(
            self.direction(events[0].setting), self.direction(events[1].setting), times, seed
        )
        return np.stack([first, second], axis=1)

    def to_dict(self):
        return {"type": self.name, "directions": {k: list(v) for k, v in sorted(self.directions.items())}}


@dataclass(frozen=True)
class JointTripleModel(Model):
    """Three co-measured outcomes drawn jointly from 8 probabilities.

    ``triple_distribution[i]`` is the probability of ``TRIPLE_OUTCOMES[i]`` for
    the settings in ``settings`` order.
    """

    triple_distribution: tuple[float, ...]
    settings: tuple[str, str, str] = ("a", "b", "c")
    name = "joint-triple"
    arity = 3

    def __post_init__(self):
        probs = tuple(float(p) for p in self.triple_distribution)
        if len(probs) != 8 or any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("triple_distribution needs 8 nonnegative probabilities summing to 1")
        if len(set(self.settings)) != 3:
            raise ValueError("JointTripleModel needs three distinct settings")
        object.__setattr__(self, "triple_distribution", probs)
        object.__setattr__(self, "settings", tuple(self.settings))

    @classmethod
    def uniform(cls, settings=("a", "b", "c")) -> "JointTripleModel":
        return cls(tuple([0.125] * 8), tuple(settings))

    def sample(self, events, times, seed):
        self.check_group(events)
        try:
            cols = [self.settings.index(e.setting) for e in events]
        except ValueError:
            raise ValueError(f"{self.name} expects settings {self.settings}, got {[e.setting for e in events]}") from None
        if sorted(cols) != [0, 1, 2]:
            raise ValueError(f"{self.name} needs one event per setting, got {[e.setting for e in events]}")
        probs = self.triple_distribution
        last = max(i for i, p in enumerate(probs) if p > 0)
        idx = np.minimum(np.searchsorted(np.cumsum(probs), uniforms(seed, times, 0), side="right"), last)
        table = np.array(TRIPLE_OUTCOMES, dtype=np.int8)
        return table[idx][:, cols]

    def to_dict(self):
        return {"type": self.name, "settings": list(self.settings), "triple_distribution": list(self.triple_distribution)}


MODEL_TYPES = {
    cls.name: cls
    for cls in (EvenOddCityModel, IidHiddenVariableModel, EquipmentTimeParamModel, QuantumSingletModel, JointTripleModel)
}


def model_from_dict(data: dict) -> Model:
    kind = data.get("type")
    if kind == EvenOddCityModel.name:
        return EvenOddCityModel(
            data.get("station_flip", "Lyon"),
            data.get("even_values", {"a": 1, "b": 1, "c": -1}),
            tuple(data.get("flipped_settings", ("b",))),
        )
    if kind == IidHiddenVariableModel.name:
        table = {(r["setting"], r["lambda"]): r["value"] for r in data["response_table"]}
        return IidHiddenVariableModel(tuple(data["lambda_values"]), tuple(data["lambda_probs"]), table)
    if kind == EquipmentTimeParamModel.name:
        params = {(r["setting"], r["phase"]): r["param"] for r in data["param_table"]}
        table = {(r["setting"], r["station"], r["param"]): r["value"] for r in data["response_table"]}
        return EquipmentTimeParamModel(data["period"], params, table)
    if kind == QuantumSingletModel.name:
        return QuantumSingletModel({k: tuple(v) for k, v in data["directions"].items()})
    if kind == JointTripleModel.name:
        return JointTripleModel(tuple(data["triple_distribution"]), tuple(data.get("settings", ("a", "b", "c"))))
    raise ValueError(f"unknown model type {kind!r}; known: {sorted(MODEL_TYPES)}")


def pairwise_60_directions() -> dict[str, tuple[float, float, float]]:
    """Three unit vectors with every pairwise angle equal to 60 degrees."""
    return {
        "a": (1.0, 0.0, 0.0),
        "b": (0.5, math.sqrt(3) / 2, 0.0),
        "c": (0.5, 1 / (2 * math.sqrt(3)), math.sqrt(2 / 3)),
    }
