from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolelab._simplex import find_feasible
from boolelab.bounds import CapacityError, enumerate_bounds
from boolelab.core import Expression
from boolelab.feasibility import FeasibilityProblem, check_feasibility, moment_matrix
from boolelab.labeling import REFINEMENT_ORDER, LabelingScheme, distinct_variable_count

from conftest import pairwise_expressions, random_pairwise_expression
from oracles import in_hull, moment_vertices

S = LabelingScheme


def reproduces(expr, scheme, verdict, targets, tol=1e-7):
    names, moments = moment_matrix(expr, scheme)
    assert tuple(names) == verdict.variables
    total = sum(verdict.witness.values(), Fraction(0))
    assert total == 1
    assert all(p >= 0 for p in verdict.witness.values())
    got = sum((p * moments[idx] for idx, p in verdict.witness.items()), np.zeros(expr.T, dtype=object))
    return all(abs(float(g) - t) <= tol for g, t in zip(got, targets))


def test_lg_minus_one_each_is_infeasible_with_certificate(lg):
    v = check_feasibility(FeasibilityProblem(lg, S.SETTING_ONLY, (-1, -1, -1)))
    assert not v.feasible
    assert v.certificate is not None and v.certificate.min == -1


def test_lg_plus_one_each_is_point_mass(lg):
    v = check_feasibility(FeasibilityProblem(lg, S.SETTING_ONLY, (1, 1, 1)))
    assert v.feasible
    assert v.witness_distribution() == [({"a": 1, "b": 1, "c": 1}, 1.0)]


def test_lg_minus_half_is_infeasible(lg):
    # hull of the 8 assignment moment vectors excludes it
    assert not in_hull(moment_vertices(lg, S.SETTING_ONLY), (-0.5, -0.5, -0.5))
    v = check_feasibility(FeasibilityProblem(lg, S.SETTING_ONLY, (-0.5, -0.5, -0.5)))
    assert not v.feasible and v.certificate.min == -1


def test_lg_minus_third_each_is_feasible(lg):
    # sum exactly at the bound; the facet Γ = -1 is attainable
    v = check_feasibility(FeasibilityProblem(lg, S.SETTING_ONLY, (-1 / 3, -1 / 3, -1 / 3)))
    assert v.feasible
    assert reproduces(lg, S.SETTING_ONLY, v, (-1 / 3,) * 3)


def test_lg_fully_distinct_minus_one_is_feasible(lg):
    v = check_feasibility(FeasibilityProblem(lg, S.FULLY_DISTINCT, (-1, -1, -1)))
    assert v.feasible and reproduces(lg, S.FULLY_DISTINCT, v, (-1, -1, -1))


def test_infeasible_inside_bound_has_no_certificate():
    # two copies of the same product cannot have different expectations
    expr = Expression.from_pairs([[("a", "1"), ("b", "1")], [("a", "1"), ("b", "1")]])
    v = check_feasibility(FeasibilityProblem(expr, S.SETTING_ONLY, (0.5, -0.5)))
    assert not v.feasible and v.certificate is None


def test_problem_validation(lg):
    with pytest.raises(ValueError):
        FeasibilityProblem(lg, S.SETTING_ONLY, (0, 0))
    with pytest.raises(ValueError):
        FeasibilityProblem(lg, S.SETTING_ONLY, (0, 0, 1.5))


def test_variable_cap(lg):
    big = Expression.from_pairs([[(f"x{i}", "1"), (f"y{i}", "1")] for i in range(9)])
    with pytest.raises(CapacityError):
        check_feasibility(FeasibilityProblem(big, S.SETTING_ONLY, (0,) * 9))
    assert check_feasibility(FeasibilityProblem(big, S.SETTING_ONLY, (0,) * 9), max_variables=18).feasible


def test_problem_document_round_trip(lg):
    p = FeasibilityProblem(lg, "fully-distinct", (-1, 0.25, 1))
    assert FeasibilityProblem.from_dict(p.to_dict()) == p


def test_exact_simplex_small_cases():
    assert find_feasible([(1, 1), (1, -1)], [Fraction(1), Fraction(0)]) == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert find_feasible([(1, 1), (1, -1)], [Fraction(1), Fraction(2)]) is None
    # negative right-hand side is handled by row flipping
    assert find_feasible([(1, 1), (1, -1)], [Fraction(1), Fraction(-1)]) == {1: Fraction(1)}


def _dyadic_targets(rng, expr, scheme):
    """Either a random grid point or an exact dyadic mixture of vertices."""
    verts = moment_vertices(expr, scheme)
    if rng.random() < 0.5:
        return tuple(float(x) for x in rng.integers(-4, 5, size=expr.T) / 4)
    counts = rng.multinomial(64, rng.dirichlet(np.ones(len(verts))))
    return tuple(float(x) for x in counts @ verts / 64)


def test_agrees_with_hull_oracle_small():
    rng = np.random.default_rng(11)
    done = 0
    while done < 60:
        expr = random_pairwise_expression(rng, max_terms=4)
        scheme = list(S)[rng.integers(len(S))]
        if distinct_variable_count(expr, scheme) > 4:
            continue
        targets = _dyadic_targets(rng, expr, scheme)
        v = check_feasibility(FeasibilityProblem(expr, scheme, targets))
        assert v.feasible == in_hull(moment_vertices(expr, scheme), targets), (expr, scheme, targets)
        if v.feasible:
            assert reproduces(expr, scheme, v, targets)
        done += 1


@settings(max_examples=80, deadline=None)
@given(pairwise_expressions(max_terms=4), st.sampled_from(list(S)), st.data())
def test_single_assignment_targets_always_feasible(expr, scheme, data):
    names, moments = moment_matrix(expr, scheme)
    row = moments[data.draw(st.integers(0, len(moments) - 1))]
    targets = tuple(float(x) for x in row)
    v = check_feasibility(FeasibilityProblem(expr, scheme, targets))
    assert v.feasible and reproduces(expr, scheme, v, targets)


@settings(max_examples=80, deadline=None)
@given(pairwise_expressions(max_terms=4), st.sampled_from(list(S)), st.data())
def test_targets_outside_bound_always_infeasible(expr, scheme, data):
    b = enumerate_bounds(expr, scheme)
    if b.min == -expr.T:
        return
    # all targets equal and their sum strictly below the bound
    level = data.draw(st.floats(-1.0, (b.min - 0.01) / expr.T))
    v = check_feasibility(FeasibilityProblem(expr, scheme, (level,) * expr.T))
    assert not v.feasible and v.certificate == b


@settings(max_examples=60, deadline=None)
@given(pairwise_expressions(max_terms=3), st.data())
def test_feasibility_monotone_under_refinement(expr, data):
    targets = tuple(data.draw(st.sampled_from([-1, -0.5, 0, 0.5, 1])) for _ in range(expr.T))
    verdicts = [check_feasibility(FeasibilityProblem(expr, s, targets)).feasible for s in REFINEMENT_ORDER]
    for coarse, fine in zip(verdicts, verdicts[1:]):
        assert not coarse or fine
