"""Tight bounds of ±1 product sums and cyclicity of their variable structure."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .core import Expression, Term  # noqa: F401  (re-exported)
from .labeling import LabelingScheme, LogicalVariableId, slot_labels, variables

DEFAULT_MAX_VARIABLES = 24


class CapacityError(ValueError):
    """Raised when an expression has more variables than the enumeration cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} distinct variables exceed the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class BoundResult:
    min: int
    max: int
    trivial_min: int
    trivial_max: int
    nontrivial: bool
    witness_min: dict[LogicalVariableId, int]
    variable_count: int
    scheme: LabelingScheme | None = None
    variables: tuple[LogicalVariableId, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "scheme": None if self.scheme is None else self.scheme.value,
            "min": self.min,
            "max": self.max,
            "trivial_min": self.trivial_min,
            "trivial_max": self.trivial_max,
            "nontrivial": self.nontrivial,
            "variable_count": self.variable_count,
            "witness_min": dict(self.witness_min),
        }


@dataclass(frozen=True)
class CyclicityReport:
    has_cycle: bool
    cycle_witness: list[int]
    scheme: LabelingScheme | None = None

    def to_dict(self) -> dict:
        return {
            "scheme": None if self.scheme is None else self.scheme.value,
            "has_cycle": self.has_cycle,
            "cycle_witness": list(self.cycle_witness),
        }


def term_masks(expr: Expression, scheme) -> tuple[list[LogicalVariableId], np.ndarray]:
    """Variables (bit order) and one XOR bitmask per term.

    Bit ``i`` of an assignment index set means variable ``i`` is -1, so a
    term's product is ``(-1) ** popcount(index & mask)``. A variable repeated
    inside a term cancels out of its mask.
    """
    labels = slot_labels(expr, scheme)
    names = variables(expr, scheme)
    bit = {v: i for i, v in enumerate(names)}
    masks = np.zeros(len(labels), dtype=np.uint64)
    for ti, row in enumerate(labels):
        m = 0
        for v in row:
            m ^= 1 << bit[v]
        masks[ti] = m
    return names, masks


def assignment_from_index(names, index: int) -> dict[LogicalVariableId, int]:
    return {v: -1 if (index >> i) & 1 else 1 for i, v in enumerate(names)}


def evaluate(expr: Expression, scheme, assignment: Mapping[LogicalVariableId, int]) -> int:
    """Sum over terms of the product of assigned values."""
    total = 0
    for row in slot_labels(expr, scheme):
        prod = 1
        for v in row:
            try:
                value = assignment[v]
            except KeyError:
                raise KeyError(f"assignment lacks variable {v!r}") from None
            if value not in (-1, 1):
                raise ValueError(f"variable {v!r} assigned {value!r}, expected ±1")
            prod *= value
        total += prod
    return total


def _partition(size: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, size))
    edges = [size * k // parts for k in range(parts + 1)]
    return [(lo, hi) for lo, hi in zip(edges, edges[1:]) if hi > lo]


def enumerate_bounds(
    expr: Expression,
    scheme: LabelingScheme | str,
    *,
    max_variables: int = DEFAULT_MAX_VARIABLES,
    workers: int = 1,
) -> BoundResult:
    """Exact min and max of ``expr`` over every ±1 assignment of its variables."""
    scheme = LabelingScheme.parse(scheme)
    names, masks = term_masks(expr, scheme)
    if len(names) > max_variables:
        raise CapacityError(len(names), max_variables)
    ranges = _partition(1 << len(names), workers)
    if len(ranges) == 1:
        parts = [kernels.scan_bounds(masks, *ranges[0])]
    else:
        with ThreadPoolExecutor(len(ranges)) as pool:
            parts = list(pool.map(lambda r: kernels.scan_bounds(masks, *r), ranges))
    # ranges are ascending, so the first part attaining the extremum has the lowest index
    vmin = min(p[0] for p in parts)
    argmin = next(p[1] for p in parts if p[0] == vmin)
    vmax = max(p[2] for p in parts)
    T = expr.T
    return BoundResult(
        min=vmin,
        max=vmax,
        trivial_min=-T,
        trivial_max=T,
        nontrivial=vmin > -T or vmax < T,
        witness_min=assignment_from_index(names, argmin),
        variable_count=len(names),
        scheme=scheme,
        variables=tuple(names),
    )


def detect_cyclicity(expr: Expression, scheme: LabelingScheme | str) -> CyclicityReport:
    """Look for a closed chain of terms linked through shared variables.

    Works on the bipartite incidence multigraph (variables and terms as
    nodes, one edge per slot). For pairwise terms this is the same as a cycle
    in the variable multigraph, parallel edges and self-loops included.
    The witness lists term indices around the cycle.
    """
    scheme = LabelingScheme.parse(scheme)
    labels = slot_labels(expr, scheme)
    adj: dict[tuple, list[tuple[tuple, int]]] = {}
    edge_id = 0
    for ti, row in enumerate(labels):
        for v in row:
            a, b = ("t", ti), ("v", v)
            adj.setdefault(a, []).append((b, edge_id))
            adj.setdefault(b, []).append((a, edge_id))
            edge_id += 1

    state: dict[tuple, int] = {}
    parent: dict[tuple, tuple] = {}
    for root in adj:
        if root in state:
            continue
        # iterative DFS; an edge to a node on the stack (other than via the
        # edge we arrived on) closes a cycle
        state[root] = 1
        parent[root] = (None, -1)
        stack = [(root, iter(adj[root]))]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt, eid in it:
                if eid == parent[node][1]:
                    continue
                if state.get(nxt) == 1:
                    path = [node]
                    while path[-1] != nxt:
                        path.append(parent[path[-1]][0])
                    terms = [n[1] for n in reversed(path) if n[0] == "t"]
                    return CyclicityReport(True, terms, scheme)
                if nxt not in state:
                    state[nxt] = 1
                    parent[nxt] = (node, eid)
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return CyclicityReport(False, [], scheme)
