import pytest
from hypothesis import given, settings

from boolelab.core import Expression
from boolelab.labeling import REFINEMENT_ORDER, LabelingScheme, distinct_variable_count, label, slot_labels

from conftest import pairwise_expressions

S = LabelingScheme


def test_setting_only_ignores_station_and_time():
    assert label("a", "Lille", 5, 0, S.SETTING_ONLY) == label("a", "Lyon", 8, 3, S.SETTING_ONLY) == "a"


def test_setting_station_separates_cities():
    lille = label("b", "Lille", 5, 0, S.SETTING_STATION)
    lyon = label("b", "Lyon", 5, 1, S.SETTING_STATION)
    assert lille != lyon
    assert (lille, lyon) == ("b/Lille", "b/Lyon")


def test_key_formats():
    assert label("a", "Lyon", 7, 4, S.SETTING_STATION_PARITY) == "a/Lyon/odd"
    assert label("a", "Lyon", 8, 4, S.SETTING_STATION_PARITY) == "a/Lyon/even"
    assert label("a", "Lyon", 7, 4, S.SETTING_STATION_TIME) == "a/Lyon/t7"
    assert label("a", "Lyon", 7, 4, S.FULLY_DISTINCT) == "a/Lyon/t7/s4"


def test_unknown_ids_rejected():
    with pytest.raises(KeyError):
        label("z", "Lille", 0, 0, S.SETTING_ONLY, settings={"a", "b"})
    with pytest.raises(KeyError):
        label("a", "Nice", 0, 0, S.SETTING_ONLY, stations={"Lille"})


@pytest.mark.parametrize("text", ["setting-only", "SETTING_ONLY", "settingonly", S.SETTING_ONLY])
def test_scheme_parse(text):
    assert S.parse(text) is S.SETTING_ONLY


def test_scheme_parse_rejects_unknown():
    with pytest.raises(ValueError):
        S.parse("by-colour")


def test_fully_distinct_lg_has_six_variables(lg, lg3):
    assert distinct_variable_count(lg, S.FULLY_DISTINCT) == 6
    assert distinct_variable_count(lg3, S.FULLY_DISTINCT) == 6
    assert len({v for row in slot_labels(lg, S.FULLY_DISTINCT) for v in row}) == 6


def test_setting_only_lg_has_three_variables(lg, lg3):
    assert distinct_variable_count(lg, S.SETTING_ONLY) == 3
    assert distinct_variable_count(lg3, S.SETTING_ONLY) == 3


@pytest.mark.parametrize("scheme", list(S))
def test_single_term_has_two_variables(scheme):
    expr = Expression.from_pairs([[("a", "1"), ("b", "2")]])
    assert distinct_variable_count(expr, scheme) == 2


def _pairs_merged(expr, scheme):
    rows = [v for row in slot_labels(expr, scheme) for v in row]
    return {(i, j) for i in range(len(rows)) for j in range(len(rows)) if rows[i] == rows[j]}


@settings(max_examples=200, deadline=None)
@given(pairwise_expressions())
def test_refinement_never_merges_what_coarser_separates(expr):
    for coarse, fine in zip(REFINEMENT_ORDER, REFINEMENT_ORDER[1:]):
        assert _pairs_merged(expr, fine) <= _pairs_merged(expr, coarse)


@settings(max_examples=200, deadline=None)
@given(pairwise_expressions())
def test_variable_count_monotone_along_refinement(expr):
    counts = [distinct_variable_count(expr, s) for s in REFINEMENT_ORDER]
    assert counts == sorted(counts)
    assert counts[-1] == 2 * expr.T
