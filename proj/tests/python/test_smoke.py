"""Smoke tests for the python bindings."""

import math

import pytest

import dvsched


def two_jobs():
    return dvsched.JobSet([(1, 0.0, 1.0, 1.0), (2, 0.25, 0.75, 2.0)])


def test_model_operations():
    js = two_jobs()
    assert len(js) == 2
    assert dvsched.intensity(js, 0.25, 0.75) == pytest.approx(4.0)
    assert dvsched.intensity(js, 0.0, 1.0) == pytest.approx(3.0)
    assert dvsched.support(js) == [(0.0, 1.0)]
    assert dvsched.avr(js) == pytest.approx(3.0)


def test_continuous_solve():
    res = dvsched.solve(two_jobs())
    assert res["schedule"].energy(2.0) == pytest.approx(10.0)
    assert res["job_speed"][1] == pytest.approx(2.0)
    assert res["job_speed"][2] == pytest.approx(4.0)
    assert res["sschedule_calls"] <= 2
    assert dvsched.verify_feasible(res["schedule"], two_jobs()) == []

    ref = dvsched.mes_schedule(two_jobs())
    assert ref["schedule"].energy(2.0) == pytest.approx(10.0)


def test_discrete_solve():
    res = dvsched.solve_discrete(two_jobs(), [3.0, 5.0], alpha=2.0)
    assert res["schedule"].energy(2.0) == pytest.approx(11.5)
    assert dvsched.verify_feasible(res["schedule"], two_jobs()) == []
    assert res["brackets"][1] == 1  # speed 2 in [3's lower bracket)
    with pytest.raises(dvsched.InfeasibleError):
        dvsched.solve_discrete(two_jobs(), [1.0, 2.0], alpha=2.0)


def test_s_schedule():
    res = dvsched.s_schedule(two_jobs(), 3.0)
    assert res["unfinished"] == [2]
    assert res["residuals"][2] == pytest.approx(0.5)
    delivered = sum((e - s) * v for (s, e, v, j) in res["segments"] if j == 1)
    assert delivered == pytest.approx(1.0)


def test_two_speed_round():
    t_lo, t_hi = dvsched.two_speed_round(0.5, 2.0, 3.0, 5.0)
    assert t_lo == pytest.approx(0.25)
    assert t_hi == pytest.approx(0.25)


def test_generate_and_verify():
    a = dvsched.generate(12, structure="nested", seed=5, workload_min=1)
    b = dvsched.generate(12, structure="nested", seed=5, workload_min=1)
    assert [(j.id, j.arrival, j.deadline, j.workload) for j in a.jobs] == \
           [(j.id, j.arrival, j.deadline, j.workload) for j in b.jobs]
    res = dvsched.solve(a)
    assert dvsched.verify_feasible(res["schedule"], a) == []
    ref = dvsched.mes_schedule(a)
    assert res["schedule"].energy(3.0) == pytest.approx(ref["schedule"].energy(3.0))


def test_feasibility_violations_reported():
    js = dvsched.JobSet([(1, 0.0, 1.0, 0.5)])
    sched = dvsched.solve(js)["schedule"]
    assert dvsched.verify_feasible(sched, js) == []
    wrong = dvsched.JobSet([(1, 0.0, 1.0, 2.0)])
    assert dvsched.verify_feasible(sched, wrong) != []
