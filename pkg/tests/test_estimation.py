import numpy as np
import pytest

from crowdlabor.agents import WorkerProfile, rational_output
from crowdlabor.estimation import dollars_per_hour, impute_wage
from crowdlabor.schedule import make_schedule, scale

LOW = make_schedule(10, 10)


def test_impute_example():
    est = impute_wage(LOW, 10, 6.0)
    # (p(10) + p(11)) / 12, p values from a 40-digit evaluation of the schedule
    assert est.omega_hat == pytest.approx(0.0578085295831, abs=1e-12)
    assert est.omega_usd_per_hr == pytest.approx(2.08110706499, abs=1e-9)
    assert est.lower < est.omega_hat <= est.upper
    assert est.omega_hat == pytest.approx((est.lower + est.upper) / 2)
    assert not est.censored


def test_impute_rejects_unidentified():
    with pytest.raises(ValueError):
        impute_wage(LOW, 0, 6.0)
    with pytest.raises(ValueError):
        impute_wage(LOW, 3, 0.0)
    with pytest.raises(ValueError):
        impute_wage(LOW, 201, 6.0)


def test_first_unit_includes_show_up_fee():
    fee = make_schedule(10, 10, show_up_fee=3.0)
    est = impute_wage(fee, 1, 6.0)
    assert est.upper == pytest.approx((LOW.marginal_payment(1) + 3.0) / 6.0)
    assert est.lower == pytest.approx(LOW.marginal_payment(2) / 6.0)


def test_cap_is_censored_and_extrapolated():
    s = make_schedule(10, 10, cap=30)
    est = impute_wage(s, 30, 6.0)
    assert est.censored
    long = make_schedule(10, 10, cap=200)
    assert est.lower == pytest.approx(long.marginal_payment(31) / 6.0)


@pytest.mark.parametrize("omega, expected", [(0.0, 0.0), (0.05781, 2.08116), (1 / 36, 1.0)])
def test_dollars_per_hour(omega, expected):
    assert dollars_per_hour(omega) == pytest.approx(expected, abs=1e-12)


def test_bracket_round_trip():
    rng = np.random.default_rng(11)
    failures = 0
    checked = 0
    for _ in range(1000):
        t = float(rng.uniform(2, 15))
        w = WorkerProfile(omega=float(np.exp(rng.uniform(np.log(1e-5), np.log(0.2)))), block_time=t)
        y = rational_output(LOW, w).y
        if 1 <= y < LOW.cap:
            checked += 1
            est = impute_wage(LOW, y, t)
            failures += not (est.lower < w.omega <= est.upper)
    assert checked > 500
    assert failures == 0


def test_estimate_decreases_with_output():
    values = [impute_wage(LOW, y, 6.0).omega_hat for y in range(1, 200)]
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("gamma", [0.3, 2.0, 3.0])
def test_scale_equivariance(gamma):
    for y in (1, 4, 17, 60):
        assert impute_wage(scale(LOW, gamma), y, 6.0).omega_hat == pytest.approx(
            gamma * impute_wage(LOW, y, 6.0).omega_hat, rel=1e-12
        )
