"""Joint-distribution existence for target term correlations (the marginal problem)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._simplex import find_feasible
from .bounds import BoundResult, CapacityError, assignment_from_index, enumerate_bounds, term_masks
from .core import Expression
from .labeling import LabelingScheme, LogicalVariableId

DEFAULT_MAX_VARIABLES = 16
WITNESS_FLOOR = 1e-12


@dataclass(frozen=True)
class FeasibilityProblem:
    expr: Expression
    scheme: LabelingScheme
    targets: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "scheme", LabelingScheme.parse(self.scheme))
        targets = tuple(float(t) for t in self.targets)
        if len(targets) != self.expr.T:
            raise ValueError(f"expected {self.expr.T} targets, got {len(targets)}")
        for t in targets:
            if not -1.0 <= t <= 1.0:
                raise ValueError(f"target {t} outside [-1, 1]")
        object.__setattr__(self, "targets", targets)

    def to_dict(self) -> dict:
        return {"expression": self.expr.to_dict(), "labeling": self.scheme.value, "targets": list(self.targets)}

    @classmethod
    def from_dict(cls, data: dict) -> "FeasibilityProblem":
        return cls(Expression.from_dict(data["expression"]), data["labeling"], tuple(data["targets"]))


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    variables: tuple[LogicalVariableId, ...]
    #: assignment index -> exact probability (bit i set means variable i = -1)
    witness: dict[int, Fraction] | None = None
    certificate: BoundResult | None = None
    targets: tuple[float, ...] = field(default=(), repr=False)

    def witness_distribution(self) -> list[tuple[dict[LogicalVariableId, int], float]]:
        if self.witness is None:
            return []
        return [
            (assignment_from_index(self.variables, idx), float(p))
            for idx, p in sorted(self.witness.items())
            if float(p) > WITNESS_FLOOR
        ]

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "targets": list(self.targets),
            "variables": list(self.variables),
            "witness": [
                {"assignment": a, "probability": p} for a, p in self.witness_distribution()
            ] if self.witness is not None else None,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


def moment_matrix(expr: Expression, scheme) -> tuple[list[LogicalVariableId], np.ndarray]:
    """Row ``i`` holds every term's product under assignment index ``i``."""
    names, masks = term_masks(expr, scheme)
    idx = np.arange(1 << len(names), dtype=np.uint64)
    odd = np.bitwise_count(idx[:, None] & masks[None, :]) & 1
    return names, (1 - 2 * odd.astype(np.int64))


def check_feasibility(problem: FeasibilityProblem, *, max_variables: int = DEFAULT_MAX_VARIABLES) -> FeasibilityVerdict:
    """Decide whether some distribution over all assignments reproduces the targets.

    Solved exactly: targets are converted to rationals without rounding and the
    moment system (normalisation plus one row per term) goes through an exact
    phase-one simplex on the distinct moment vectors.
    """
    expr, scheme = problem.expr, problem.scheme
    names, masks = term_masks(expr, scheme)
    if len(names) > max_variables:
        raise CapacityError(len(names), max_variables)
    _, moments = moment_matrix(expr, scheme)
    unique, first = np.unique(moments, axis=0, return_index=True)
    order = np.argsort(first)  # keep columns in assignment-index order
    unique, first = unique[order], first[order]
    columns = [(1, *row) for row in unique.tolist()]
    rhs = [Fraction(1)] + [Fraction(t) for t in problem.targets]
    solution = find_feasible(columns, rhs)
    if solution is not None:
        witness = {int(first[j]): p for j, p in solution.items()}
        return FeasibilityVerdict(True, tuple(names), witness, None, problem.targets)
    bound = enumerate_bounds(expr, scheme, max_variables=max_variables)
    total = sum(rhs[1:], Fraction(0))
    certificate = bound if (total < bound.min or total > bound.max) else None
    return FeasibilityVerdict(False, tuple(names), None, certificate, problem.targets)
