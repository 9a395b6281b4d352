"""Boole/Bell/Leggett-Garg inequalities under configurable labeling of outcomes.

Simulates outcome models, estimates correlations, computes tight bounds of
±1 product sums for a chosen labeling scheme, detects cyclicity of their
variable structure and decides joint-distribution existence.
"""

from .analysis import CorrelationReport, gamma_per_trial, mean_correlations, verdict
from .bounds import BoundResult, CapacityError, CyclicityReport, detect_cyclicity, enumerate_bounds, evaluate
from .core import (
    Expression,
    MeasurementEvent,
    Observation,
    Outcome,
    Schedule,
    Setting,
    Slot,
    Term,
    TrialLog,
    lg_expression,
    validate_schedule,
)
from .engine import RunConfig, build_schedule, run
from .experiment import Experiment
from .feasibility import FeasibilityProblem, FeasibilityVerdict, check_feasibility
from .kernels import BACKEND
from .labeling import LabelingScheme, distinct_variable_count, label
from .models import (
    EquipmentTimeParamModel,
    EvenOddCityModel,
    IidHiddenVariableModel,
    JointTripleModel,
    QuantumSingletModel,
    respond,
    singlet_correlation,
)
from .scenarios import list_scenarios, run_scenario

__version__ = "0.1.0"
