"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed in the summary."""

import math
import time

import numpy as np
import pytest

from crowdlabor.agents import (
    WorkerProfile,
    brute_force_output,
    quadratic_cost_output,
    rational_output,
)
from crowdlabor.calibration import fit_lognormal, point_elasticity, supply_fraction
from crowdlabor.estimation import impute_wage
from crowdlabor.focal import binom_upper_tail, divisible_fraction, focal_point_test, realizable_whole_cents
from crowdlabor.harness import analyze, experiment_b, proportional_null_workers, simulate_experiment
from crowdlabor.schedule import make_schedule, scale
from crowdlabor.stats import geometric_mean

MU, SIGMA = 0.074, 1.634
UNIT = make_schedule(1.0, 10)
LOW = make_schedule(10, 10)
HIGH = make_schedule(30, 10)


def profiles(n, seed, nu=False):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        omega = float(np.exp(rng.uniform(np.log(1e-6), np.log(0.5))))
        t = float(rng.uniform(1.0, 15.0))
        v = float(np.exp(rng.uniform(np.log(1e-4), np.log(1.0)))) if nu else 0.0
        out.append(WorkerProfile(omega=omega, block_time=t, nu=v))
    return out


def test_criterion_01_schedule_table():
    totals = [UNIT.total_payment(y) for y in (1, 5, 25)]
    marginals = [UNIT.marginal_payment(y) for y in (2, 6, 26)]
    assert totals == pytest.approx([0.07, 0.29, 0.82], abs=0.005)
    assert marginals == pytest.approx([0.0625, 0.0474, 0.0118], abs=0.005)
    assert totals == pytest.approx([0.06697, 0.29289, 0.82322], abs=1e-5)
    assert marginals == pytest.approx([0.06248, 0.04735, 0.01184], abs=1e-5)


def test_criterion_02_elasticities():
    got = [point_elasticity(MU, SIGMA, w) for w in (0.321, 1.384, 2.876, 3.625)]
    assert got == pytest.approx([0.81, 0.43, 0.28, 0.24], abs=0.005)


def test_criterion_03_focal_tail_and_share():
    q = divisible_fraction(realizable_whole_cents(HIGH, HIGH.cap, exclude_terminal=True))
    assert round(q, 2) == 0.22
    tail = binom_upper_tail(99, 5 / 23, 33)
    strict = binom_upper_tail(99, 5 / 23, 33, inclusive=False)
    assert 0.002 <= tail <= 0.004, (
        f"Pr(X >= 33) = {tail:.6f}; Pr(X > 33) = {strict:.6f} is the value inside the band"
    )


def test_criterion_04_geometric_mean_bridge():
    assert math.exp(-0.117) == pytest.approx(0.89, abs=0.01)
    assert math.exp(-0.117 + 0.523) == pytest.approx(1.50, abs=0.01)
    assert math.exp(0.447) == pytest.approx(1.56, abs=0.01)
    assert math.exp(0.447 - 0.792) == pytest.approx(0.71, abs=0.01)
    # the pipeline's geometric mean is exp of the mean log wage
    rng = np.random.default_rng(0)
    w = rng.lognormal(-0.117, 1.0, 500)
    assert geometric_mean(w) == pytest.approx(math.exp(np.mean(np.log(w))), rel=1e-12)


def test_criterion_05_oracle_equivalence():
    start = time.perf_counter()
    mismatches = 0
    for i, w in enumerate(profiles(1000, 5)):
        s = LOW if i % 2 else HIGH
        mismatches += rational_output(s, w).y != brute_force_output(s, w.omega, w.block_time)
    for i, w in enumerate(profiles(1000, 6, nu=True)):
        s = LOW if i % 2 else HIGH
        mismatches += quadratic_cost_output(s, w).y != brute_force_output(s, w.omega, w.block_time, w.nu)
    assert mismatches == 0
    assert time.perf_counter() - start < 1.0


def test_criterion_06_bracket_round_trip():
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    failures = checked = 0
    while checked < 1000:
        t = float(rng.uniform(2.0, 15.0))
        w = WorkerProfile(omega=float(np.exp(rng.normal(MU, SIGMA))) / 36, block_time=t)
        y = rational_output(LOW, w).y
        if not 1 <= y < LOW.cap:
            continue
        checked += 1
        est = impute_wage(LOW, y, t)
        failures += not (est.lower < w.omega <= est.upper)
    assert failures == 0
    assert time.perf_counter() - start < 1.0


def test_criterion_07_comparative_statics():
    violations = 0
    times = np.linspace(1.0, 20.0, 50)
    gammas = np.linspace(0.2, 5.0, 50)
    for w in profiles(20, 7):
        ys = [rational_output(LOW, WorkerProfile(omega=w.omega, block_time=float(t))).y for t in times]
        violations += sum(a < b for a, b in zip(ys, ys[1:]))
        ys = [rational_output(scale(LOW, float(g)), w).y for g in gammas]
        violations += sum(a > b for a, b in zip(ys, ys[1:]))
    assert violations == 0


def test_criterion_08_calibration_recovery():
    start = time.perf_counter()
    draws = np.random.default_rng(8).lognormal(MU, SIGMA, 10_000)
    fit = fit_lognormal(draws)
    assert abs(fit.mu - MU) <= 0.05
    assert abs(fit.sigma - SIGMA) <= 0.05
    assert time.perf_counter() - start < 1.0


def test_criterion_09_elasticity_derivative():
    h = 1e-5
    worst = 0.0
    for w in np.geomspace(0.05, 50.0, 50):
        lw = math.log(w)
        numeric = (
            math.log(supply_fraction(MU, SIGMA, math.exp(lw + h)))
            - math.log(supply_fraction(MU, SIGMA, math.exp(lw - h)))
        ) / (2 * h)
        worst = max(worst, abs(numeric - point_elasticity(MU, SIGMA, w)))
    assert worst < 1e-4


def _high_outputs(rho, seed):
    return [r.y for r in simulate_experiment(experiment_b(rho=rho, seed=seed)) if r.group == "HIGH" and r.y > 0]


def test_criterion_10_simulated_signatures(capsys):
    start = time.perf_counter()
    schedules = {"HIGH": HIGH, "LOW": LOW}
    lower = 0
    for rep in range(100):
        report = analyze(simulate_experiment(experiment_b(rho=0.3, seed=rep)), schedules)
        lower += report.geometric_means["LOW"] < report.geometric_means["HIGH"]

    rejected = sum(focal_point_test(_high_outputs(0.5, seed), HIGH).p_value < 0.01 for seed in range(20))
    power_03 = np.mean([focal_point_test(_high_outputs(0.3, seed), HIGH).p_value < 0.01 for seed in range(20)])

    null_p = []
    for rep in range(200):
        ys = [rational_output(HIGH, w).y for w in proportional_null_workers(HIGH, 99, 58, seed=rep)]
        null_p.append(focal_point_test(ys, HIGH, max_y=58).p_value)
    null_rate = float(np.mean(np.array(null_p) < 0.05))
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        print(
            f"\n  LOW below HIGH: {lower}/100; focal rejections rho=0.5: {rejected}/20 "
            f"(rho=0.3 power {power_03:.2f}); null rate {null_rate:.3f}; {elapsed:.1f}s"
        )
    assert lower >= 95
    assert rejected == 20
    assert 0.01 <= null_rate <= 0.12
    assert elapsed < 30
