import math

import numpy as np
import pytest

from boolelab.analysis import gamma_per_trial
from boolelab.core import Expression, lg_expression
from boolelab.engine import RunConfig, ScheduleError, build_schedule, run
from boolelab.models import ArityError, EvenOddCityModel, JointTripleModel, QuantumSingletModel, pairwise_60_directions


def products(log):
    sched = log.schedule
    v = log.values.reshape(sched.trials, -1).astype(int)
    return v[:, 0] * v[:, 1]


def test_even_odd_two_doctors_thousand_trials(lg):
    log = run(EvenOddCityModel("Lyon"), build_schedule(lg, 1000), RunConfig(1000, 42))
    assert len(log) == 2000
    assert np.all(products(log) == -1)


def test_joint_triple_eight_trials(lg3):
    log = run(JointTripleModel.uniform(), build_schedule(lg3, 8), RunConfig(8, 1))
    assert len(log) == 24
    assert set(gamma_per_trial(log).tolist()) <= {-1, 3}


@pytest.mark.parametrize("model", [EvenOddCityModel(), JointTripleModel.uniform()], ids=lambda m: m.name)
def test_single_trial_run(model):
    expr = lg_expression(("Lille", "Lyon", "Paris")) if model.arity == 3 else lg_expression(("Lille", "Lyon"))
    log = run(model, build_schedule(expr, 1), RunConfig(1))
    assert log.schedule.trials == 1
    assert {o.time for o in log.observations} == {0}


@pytest.mark.parametrize("workers", [2, 3, 8])
@pytest.mark.parametrize("rotation", ["round-robin", "uniform-random"])
def test_log_independent_of_workers(workers, rotation):
    expr = lg_expression(("A", "B"))
    model = QuantumSingletModel(pairwise_60_directions())
    sched = build_schedule(expr, 5000, rotation, 99)
    one = run(model, sched, RunConfig(5000, 99, rotation, 1))
    many = run(model, sched, RunConfig(5000, 99, rotation, workers))
    assert one.to_jsonl() == many.to_jsonl()


def test_same_seed_same_bytes_different_seed_differs():
    expr = lg_expression(("A", "B"))
    model = QuantumSingletModel(pairwise_60_directions())
    sched = build_schedule(expr, 2000)
    a = run(model, sched, RunConfig(2000, 5)).to_jsonl()
    assert a == run(model, sched, RunConfig(2000, 5)).to_jsonl()
    assert a != run(model, sched, RunConfig(2000, 6)).to_jsonl()


def test_trial_randomness_depends_only_on_seed_and_trial():
    expr = lg_expression(("A", "B"))
    model = QuantumSingletModel(pairwise_60_directions())
    long = run(model, build_schedule(expr, 900), RunConfig(900, 3))
    short = run(model, build_schedule(expr, 300), RunConfig(300, 3))
    assert np.array_equal(long.values[:600], short.values)


@pytest.mark.parametrize("n", [3, 300, 3000])
def test_round_robin_balanced(lg, n):
    sched = build_schedule(lg, n)
    assert np.bincount(sched.assignment).tolist() == [n // 3] * 3


def test_uniform_random_rotation_multinomial(lg):
    n = 30_000
    counts = np.bincount(build_schedule(lg, n, "uniform-random", 4).assignment, minlength=3)
    # each count ~ Binomial(n, 1/3)
    sd = math.sqrt(n * (1 / 3) * (2 / 3))
    assert np.all(np.abs(counts - n / 3) < 5 * sd)
    assert not np.array_equal(counts, [n // 3] * 3)


def test_run_rejects_invalid_schedule(lg):
    forced = Expression(lg.terms, co_dated=True)
    with pytest.raises(ScheduleError, match="station repeated"):
        run(EvenOddCityModel(), build_schedule(forced, 3), RunConfig(3))


def test_run_rejects_mismatched_n(lg):
    with pytest.raises(ScheduleError):
        run(EvenOddCityModel(), build_schedule(lg, 3), RunConfig(4))


def test_run_rejects_arity_mismatch(lg):
    with pytest.raises(ArityError):
        run(JointTripleModel.uniform(), build_schedule(lg, 3), RunConfig(3))


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(0)
    with pytest.raises(ValueError):
        RunConfig(5, seed=-1)
    with pytest.raises(ValueError):
        RunConfig(5, seed=2**64)
    with pytest.raises(ValueError):
        RunConfig(5, term_rotation="alphabetical")
