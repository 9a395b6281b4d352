"""Built-in reproductions of the patient/doctor and spin experiments."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .analysis import CorrelationReport, mean_correlations, verdict
from .bounds import BoundResult, CyclicityReport, detect_cyclicity, enumerate_bounds
from .core import Setting, TrialLog, lg_expression
from .experiment import Experiment
from .labeling import REFINEMENT_ORDER, LabelingScheme
from .models import EvenOddCityModel, IidHiddenVariableModel, JointTripleModel, QuantumSingletModel, pairwise_60_directions

S = LabelingScheme


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    anchor: str
    build: Callable[[], Experiment] = field(repr=False)
    #: (scheme, expected bound min, expected verdict)
    expected: tuple[tuple[LabelingScheme, int, str], ...] = ()


@dataclass
class Report:
    scenario: str
    n: int
    seed: int
    log: TrialLog = field(repr=False)
    correlations: CorrelationReport
    bounds: dict[LabelingScheme, BoundResult]
    cyclicity: dict[LabelingScheme, CyclicityReport]

    def verdict(self, scheme) -> str:
        return self.correlations.verdicts[LabelingScheme.parse(scheme).value].label

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "n": self.n,
            "seed": self.seed,
            "model": self.log.model_name,
            "expression": self.log.schedule.expression.to_dict(),
            "correlations": self.correlations.to_dict(),
            "bounds": {s.value: b.to_dict() for s, b in self.bounds.items()},
            "cyclicity": {s.value: c.to_dict() for s, c in self.cyclicity.items()},
        }


def _abc(directions=None):
    if directions is None:
        return tuple(Setting(s) for s in "abc")
    return tuple(Setting(s, directions[s]) for s in "abc")


def _three_doctors():
    stations = ("Lille", "Lyon", "Paris")
    return Experiment(_abc(), stations, lg_expression(stations), IidHiddenVariableModel.symmetric(), trials=10_000)


def _two_doctors():
    stations = ("Lille", "Lyon")
    return Experiment(_abc(), stations, lg_expression(stations), EvenOddCityModel("Lyon"), trials=10_000)


def _quantum_triple():
    stations = ("M1", "M2", "M3")
    return Experiment(_abc(), stations, lg_expression(stations), JointTripleModel.uniform(), trials=100_000)


def _singlet_pairs():
    dirs = pairwise_60_directions()
    stations = ("Alice", "Bob")
    return Experiment(_abc(dirs), stations, lg_expression(stations), QuantumSingletModel(dirs), trials=300_000)


_REGISTRY = (
    Scenario(
        "three-doctors",
        "Lille examines a, Lyon b, Paris c on every date; random patients; Gamma(n) >= -1 holds trial by trial.",
        "per-trial Gamma >= -1",
        _three_doctors,
        ((S.SETTING_ONLY, -1, "respected"), (S.SETTING_STATION, -1, "respected"), (S.FULLY_DISTINCT, -3, "respected")),
    ),
    Scenario(
        "two-doctors-evenodd",
        "Lille examines a or b, Lyon b or c; city- and date-parity dependent symptoms give Gamma = -3 "
        "with random singles.",
        "Gamma = -3 vs bound -1",
        _two_doctors,
        (
            (S.SETTING_ONLY, -1, "violated"),
            (S.SETTING_STATION, -3, "respected"),
            (S.SETTING_STATION_PARITY, -3, "respected"),
            (S.FULLY_DISTINCT, -3, "respected"),
        ),
    ),
    Scenario(
        "quantum-triple",
        "Three co-measured spins with a joint outcome law (uniform by default); the three-variable bound holds.",
        "joint law keeps Gamma >= -1",
        _quantum_triple,
        ((S.SETTING_ONLY, -1, "respected"), (S.FULLY_DISTINCT, -3, "respected")),
    ),
    Scenario(
        "quantum-singlet-pairs",
        "Singlet pairs measured on three setting pairs at separate dates, settings pairwise 60 degrees apart; "
        "Gamma = -1.5.",
        "Gamma = -1.5 vs bound -1",
        _singlet_pairs,
        ((S.SETTING_ONLY, -1, "violated"), (S.SETTING_STATION, -3, "respected"), (S.FULLY_DISTINCT, -3, "respected")),
    ),
)
SCENARIOS = {s.name: s for s in _REGISTRY}


def list_scenarios() -> list[tuple[str, str, str]]:
    return [(s.name, s.description, s.anchor) for s in _REGISTRY]


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None


def analyze(log: TrialLog, scheme_list=REFINEMENT_ORDER, *, name: str = "custom") -> Report:
    """Correlations plus bounds, cyclicity and verdicts for every scheme."""
    expr = log.schedule.expression
    report = mean_correlations(log, expr)
    bounds, cycles = {}, {}
    for scheme in scheme_list:
        scheme = LabelingScheme.parse(scheme)
        bounds[scheme] = enumerate_bounds(expr, scheme)
        cycles[scheme] = detect_cyclicity(expr, scheme)
        report.verdicts[scheme.value] = verdict(report, bounds[scheme])
    return Report(name, log.schedule.trials, log.seed, log, report, bounds, cycles)


def run_scenario(
    name: str,
    n: int | None = None,
    seed: int | None = None,
    *,
    rotation: str | None = None,
    workers: int = 1,
) -> Report:
    exp = get_scenario(name).build()
    log = exp.run(n, seed, rotation, workers)
    return analyze(log, name=name)
