from fractions import Fraction
from math import comb

import numpy as np
import pytest
from scipy import stats as sps

from crowdlabor.agents import WorkerKind, WorkerProfile, optimal_output, rational_output
from crowdlabor.focal import (
    binom_upper_tail,
    divisible_fraction,
    focal_point_test,
    realizable_whole_cents,
    terminal_band,
)
from crowdlabor.harness.simulate import proportional_null_workers
from crowdlabor.schedule import make_schedule

HIGH = make_schedule(30, 10)


def exact_tail(n, q, s):
    """Direct summation with rational arithmetic."""
    return sum(comb(n, j) * q**j * (1 - q) ** (n - j) for j in range(s, n + 1))


def test_realizable_first_ten():
    assert realizable_whole_cents(HIGH, 10) == [2, 3, 5, 7, 8, 10, 11, 12, 13, 15]


def test_realizable_full_cap():
    values = realizable_whole_cents(HIGH, 200)
    assert len(values) == 24
    assert values[:6] == [2, 3, 5, 7, 8, 10]
    assert values[-1] == 29
    assert values[6:] == [11, 12, 13] + list(range(15, 30))


def test_realizable_modes():
    assert realizable_whole_cents(HIGH, 1) == [2]
    multi = realizable_whole_cents(HIGH, 200, mode="multiset")
    assert len(multi) == 200
    assert terminal_band(HIGH) == 29
    assert 29 not in realizable_whole_cents(HIGH, 200, exclude_terminal=True)
    with pytest.raises(ValueError):
        realizable_whole_cents(HIGH, 0)
    with pytest.raises(ValueError):
        realizable_whole_cents(HIGH, 5, mode="bag")


def test_divisible_fraction():
    assert divisible_fraction([5, 10, 3]) == pytest.approx(2 / 3)
    assert divisible_fraction([3, 7], m=1) == 1.0
    q = divisible_fraction(realizable_whole_cents(HIGH, 200, exclude_terminal=True))
    assert q == pytest.approx(5 / 23)
    assert round(q, 2) == 0.22
    with pytest.raises(ValueError):
        divisible_fraction([])
    with pytest.raises(ValueError):
        divisible_fraction([5], m=0)


@pytest.mark.parametrize("n, q, s, expected", [(1, 0.5, 1, 0.5), (2, 0.5, 1, 0.75)])
def test_tail_small(n, q, s, expected):
    assert binom_upper_tail(n, q, s) == pytest.approx(expected, abs=1e-15)


def test_tail_edges():
    for n in (1, 10, 99, 500):
        for q in (0.01, 0.217, 0.5, 0.93):
            assert binom_upper_tail(n, q, 0) == 1.0
            assert binom_upper_tail(n, q, n) == pytest.approx(q**n, rel=1e-12)


def test_tail_matches_rational_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 31))
        s = int(rng.integers(0, n + 1))
        q = Fraction(int(rng.integers(1, 1000)), 1000)
        got = binom_upper_tail(n, float(q), s)
        assert round(got, 12) == round(float(exact_tail(n, q, s)), 12)


def test_tail_matches_scipy_for_large_n():
    for n, q, s in [(99, 5 / 23, 33), (500, 0.2, 130), (2000, 0.01, 5)]:
        assert binom_upper_tail(n, q, s) == pytest.approx(sps.binom.sf(s - 1, n, q), abs=1e-10)


def test_tail_monotonicity():
    n = 60
    for q in np.linspace(0.05, 0.95, 19):
        tails = [binom_upper_tail(n, q, s) for s in range(n + 1)]
        assert all(a >= b for a, b in zip(tails, tails[1:]))
    for s in range(0, n + 1, 5):
        tails = [binom_upper_tail(n, q, s) for q in np.linspace(0.05, 0.95, 19)]
        assert all(a <= b + 1e-15 for a, b in zip(tails, tails[1:]))


def test_strict_tail_option():
    assert binom_upper_tail(99, 5 / 23, 33, inclusive=False) == pytest.approx(
        float(exact_tail(99, Fraction(5, 23), 34)), abs=1e-12
    )
    assert binom_upper_tail(5, 0.3, 5, inclusive=False) == 0.0


def test_tail_rejects_bad_input():
    for args in [(5, 0.0, 1), (5, 1.0, 1), (5, 0.5, 6), (5, 0.5, -1)]:
        with pytest.raises(ValueError):
            binom_upper_tail(*args)


def test_focal_no_successes_gives_one():
    # y = 2 earns 3.88 cents: whole cents 3
    result = focal_point_test([2] * 40, HIGH)
    assert result.successes == 0
    assert result.p_value == 1.0


def test_focal_rejects_bad_outputs():
    with pytest.raises(ValueError):
        focal_point_test([], HIGH)
    with pytest.raises(ValueError):
        focal_point_test([3, 0], HIGH)


def test_focal_counts_and_q():
    ys = [3, 10, 16, 26, 2, 4, 58]
    result = focal_point_test(ys, HIGH)
    assert result.n == 7
    assert result.successes == 4  # 5, 15, 20, 25 cents
    assert result.realizable == realizable_whole_cents(HIGH, 58)
    assert result.q == pytest.approx(5 / 24)


def test_focal_rejects_targeting_population():
    rng = np.random.default_rng(8)
    ys = []
    for i in range(120):
        t = float(rng.uniform(4, 8))
        if i % 2:
            w = WorkerProfile(omega=0.0, block_time=t, kind=WorkerKind.TARGET_EARNER,
                              target=int(rng.choice([15, 20, 25])))
        else:
            w = WorkerProfile(omega=float(np.exp(rng.normal(0.074, 1.634))) / 36, block_time=t)
        y = optimal_output(HIGH, w).y
        if y > 0:
            ys.append(y)
    assert focal_point_test(ys, HIGH).p_value < 0.01


def test_focal_null_is_calibrated():
    pvals = []
    for rep in range(200):
        workers = proportional_null_workers(HIGH, 99, 58, seed=rep)
        ys = [rational_output(HIGH, w).y for w in workers]
        pvals.append(focal_point_test(ys, HIGH, max_y=58).p_value)
    frac = np.mean(np.array(pvals) < 0.05)
    assert 0.01 <= frac <= 0.12
