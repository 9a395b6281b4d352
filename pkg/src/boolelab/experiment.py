"""Experiment definition documents (JSON).

Top-level sections: ``settings``, ``stations``, ``expression``, ``schedule``,
``model``. See ``docs/experiment_schema.md`` for field names.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .core import Expression, Schedule, Setting
from .engine import DEFAULT_SEED, ROTATIONS, RunConfig, build_schedule, run
from .models import Model, model_from_dict

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Experiment:
    settings: tuple[Setting, ...]
    stations: tuple[str, ...]
    expression: Expression
    model: Model
    trials: int = 1000
    rotation: str = "round-robin"
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        ids = [s.id for s in self.settings]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate setting ids in {ids}")
        if len(set(self.stations)) != len(self.stations) or not all(self.stations):
            raise ValueError(f"station ids must be nonempty and unique: {self.stations}")
        for term in self.expression.terms:
            for slot in term.slots:
                if slot.setting not in ids:
                    raise ValueError(f"expression uses undefined setting {slot.setting!r}")
                if slot.station not in self.stations:
                    raise ValueError(f"expression uses undefined station {slot.station!r}")
        if self.rotation not in ROTATIONS:
            raise ValueError(f"rotation must be one of {ROTATIONS}")

    @property
    def setting_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.settings)

    def schedule(self, trials: int | None = None, seed: int | None = None, rotation: str | None = None) -> Schedule:
        return build_schedule(
            self.expression,
            self.trials if trials is None else trials,
            self.rotation if rotation is None else rotation,
            self.seed if seed is None else seed,
        )

    def run(self, trials=None, seed=None, rotation=None, workers: int = 1):
        n = self.trials if trials is None else trials
        s = self.seed if seed is None else seed
        r = self.rotation if rotation is None else rotation
        return run(self.model, self.schedule(n, s, r), RunConfig(n, s, r, workers))

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "settings": [
                {"id": s.id, **({"direction": list(s.direction)} if s.direction is not None else {})}
                for s in self.settings
            ],
            "stations": list(self.stations),
            "expression": self.expression.to_dict(),
            "schedule": {"trials": self.trials, "rotation": self.rotation, "seed": self.seed},
            "model": self.model.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Experiment":
        missing = [k for k in ("settings", "stations", "expression", "schedule", "model") if k not in data]
        if missing:
            raise ValueError(f"experiment definition lacks sections {missing}")
        settings = tuple(Setting(s["id"], tuple(s["direction"]) if s.get("direction") else None) for s in data["settings"])
        sched = data["schedule"]
        return cls(
            settings,
            tuple(data["stations"]),
            Expression.from_dict(data["expression"]),
            model_from_dict(data["model"]),
            int(sched.get("trials", 1000)),
            sched.get("rotation", "round-robin"),
            int(sched.get("seed", DEFAULT_SEED)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Experiment":
        return cls.from_dict(json.loads(Path(path).read_text()))
