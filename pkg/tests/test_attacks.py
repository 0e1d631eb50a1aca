import logging
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from dqi_workbench.attacks import (
    FAST,
    SLOW,
    OPIInstance,
    allocation_mean,
    allocation_success_probability,
    bruteforce_allocation,
    estimate_instance,
    expectation_upper_bound,
    frontier_trials_per_day,
    hoeffding_rate,
    hoeffding_tail_bound,
    hoeffding_trials_lower_bound,
    mm_bound_table,
    mm_overlap_table,
    prange_success_prob,
    prange_trials,
    round_lp_allocation,
    select_comparator,
    semicircle_target,
    semicircle_threshold,
    truncate_to_prange,
    xp_knapsack_dp,
    xp_lp_allocation,
    xp_trials,
)
from dqi_workbench.errors import DomainError

PRANGE_TABLE = {
    (1023, 60): 5.4935525387784946e19,
    (1023, 70): 1.256406251307753e22,
    (1023, 80): 4.2964767808546385e24,
    (1023, 90): 1.0704385285673214e27,
    (1023, 100): 1.74941809707523e29,
    (4095, 60): 2.019633906949013e23,
    (4095, 70): 4.7509334068170893e26,
    (4095, 80): 9.479001846779738e29,
    (4095, 90): 1.413037121295554e33,
    (4095, 100): 2.101371145129246e36,
}

XP_TABLE = {
    (1023, 60): 1915882803738476.8,
    (1023, 70): 4.641439887538182e16,
    (1023, 80): 1.224179182654277e18,
    (1023, 90): 2.078358397648132e19,
    (1023, 100): 2.562701796685802e20,
    (4095, 60): 4.019800669718791e20,
    (4095, 70): 1.965720586103349e23,
    (4095, 80): 7.994544407999735e25,
    (4095, 90): 2.265453777773324e28,
    (4095, 100): 5.912123905073406e30,
}


def test_semicircle_target_edge_cases():
    assert semicircle_target(100, 0, 3, 8) == pytest.approx(3 / 8)
    assert semicircle_target(2, 1, 1, 2) == pytest.approx(1.0)
    m, n = 1000, 200
    rate = n / m
    mu_dqi = 0.5 + math.sqrt(rate / 2 * (1 - rate / 2))
    assert semicircle_target(m, n // 2, 1, 2) == pytest.approx(mu_dqi)


def test_threshold_calibration_anchor():
    target = semicircle_threshold(1023, 60, 496, 1024)
    assert target.t == 669
    assert target.mu * 1023 == pytest.approx(668.97, abs=0.01)


@pytest.mark.parametrize("row", sorted(PRANGE_TABLE))
def test_prange_trials_reproduce_table(row):
    m, n = row
    b, r = (10, 496) if m == 1023 else (12, 2016)
    target = semicircle_threshold(m, n, r, 1 << b)
    trials = float(prange_trials(m, n, r, 1 << b, target.t))
    assert trials == pytest.approx(PRANGE_TABLE[row], rel=0.01)


def test_prange_threshold_at_n_is_certain():
    assert prange_success_prob(200, 30, 5, 16, 30) == 1
    assert prange_success_prob(200, 30, 5, 16, 0) == 1


def test_prange_exact_and_float_paths_agree():
    with mpmath.workprec(256):
        exact = prange_success_prob(200, 20, 50, 128, 110, exact=True)
        approx = prange_success_prob(200, 20, 50, 128, 110, exact=False)
        assert abs(exact - approx) / exact < mpmath.mpf(10) ** -30


def test_prange_rejects_impossible_threshold():
    with pytest.raises(DomainError):
        prange_success_prob(10, 2, 1, 2, 11)


def test_frontier_throughput():
    assert frontier_trials_per_day() == pytest.approx(2.43e21, rel=0.005)


def test_mm_tables():
    assert list(mm_overlap_table(2)) == [0.375, 0.5, 0.75, 1.0, 1.0]
    assert list(mm_overlap_table(1)) == [0.25, 0.5, 1.0]
    for k in range(1, 7):
        table = mm_overlap_table(k)
        bounds = mm_bound_table(k)
        b = 2 * k
        for s in range(b + 1):
            assert table[s] == bounds[b - s] / 2 ** (b - s)
        assert bounds[-1] == 2 ** (2 * k - 1) - 2 ** (k - 1)


def test_lp_on_gf4_example():
    table = [0.5, 1.0, 1.0]
    xp = xp_lp_allocation(table, b=2, n=1, m=2)
    prange = xp_lp_allocation(truncate_to_prange(table), b=2, n=1, m=2)
    assert xp.value == 1
    assert prange.value == Fraction(3, 4)
    assert list(truncate_to_prange(table)) == [0.5, 0.5, 1.0]


def test_lp_with_zero_budget():
    table = mm_overlap_table(2)
    solution = xp_lp_allocation(table, b=4, n=0, m=15)
    assert solution.distribution[0] == 1
    assert solution.value == Fraction(0.375)


def test_lp_rounding_respects_budget():
    table = mm_overlap_table(5)
    solution = xp_lp_allocation(table, b=10, n=60, m=1023)
    assert sum(solution.distribution) == 1
    values = round_lp_allocation(solution, 1023)
    assert len(values) == 1023
    assert sum(values) <= 10 * 60
    assert list(values) == sorted(values, reverse=True)


def test_allocation_probability_small_case():
    table = [0.5, 0.75, 1.0]
    assert allocation_success_probability(table, [0, 0], 1) == pytest.approx(0.75)
    assert allocation_success_probability(table, [2, 1], 2) == pytest.approx(0.75)
    assert allocation_success_probability(table, [0, 1, 2], 0) == 1.0


def test_knapsack_trivial_thresholds():
    table = mm_overlap_table(2)
    for comparator in (FAST, SLOW):
        assert xp_knapsack_dp(table, 10, 8, 0, comparator).gamma == pytest.approx(1.0)
        full = xp_knapsack_dp(table, 10, 10 * 3, 10, comparator)
        assert full.gamma == pytest.approx(1.0)
        assert sum(full.values) <= 30


def _random_monotone_table(rng, b):
    return sorted(rng.random() for _ in range(b + 1))


def test_knapsack_against_exhaustive_oracle():
    rng = random.Random(42)
    for case in range(40):
        k = rng.choice([1, 2])
        table = mm_overlap_table(k) if case % 2 == 0 else _random_monotone_table(rng, 2 * k)
        m = rng.randrange(3, 9)
        budget = rng.randrange(0, 2 * k * m + 1)
        t = rng.randrange(1, m + 1)
        exact = bruteforce_allocation(table, m, budget, t)
        slow = xp_knapsack_dp(table, m, budget, t, SLOW)
        fast = xp_knapsack_dp(table, m, budget, t, FAST)
        assert sum(slow.values) <= budget
        assert len(slow.values) == m
        assert slow.gamma == pytest.approx(exact.gamma)
        assert slow.gamma >= fast.gamma - 1e-12
        assert slow.gamma == pytest.approx(allocation_success_probability(table, slow.values, t))


def test_fast_kernel_reports_its_allocation_probability():
    table = mm_overlap_table(2)
    result = xp_knapsack_dp(table, 15, 12, 11, FAST)
    assert result.gamma == pytest.approx(allocation_success_probability(table, result.values, 11), rel=1e-9)
    assert list(result.values) == sorted(result.values, reverse=True)


def test_hoeffding_and_expectation_bounds_hold_for_dp_allocations():
    instance = OPIInstance(m=15, n=4, b=4, r=6)
    table = mm_overlap_table(2)
    target = semicircle_threshold(instance.m, instance.n, instance.r, instance.q)
    result = xp_knapsack_dp(table, instance.m, instance.budget, target.t, SLOW)
    mean = allocation_mean(table, result.values)
    assert mean <= expectation_upper_bound(instance.m, instance.rate) + 1e-12
    if target.t >= mean:
        assert result.gamma <= hoeffding_tail_bound(mean, target.t, instance.m) + 1e-12


def test_hoeffding_rate_value():
    assert hoeffding_rate(0.10557) == pytest.approx(0.02786, abs=1e-4)
    bound = hoeffding_trials_lower_bound(1000, 0.10557)
    assert float(mpmath.log(bound)) == pytest.approx(27.86, abs=0.1)
    with pytest.raises(DomainError):
        hoeffding_rate(0.0)


def test_instance_validation():
    with pytest.raises(DomainError):
        OPIInstance(m=1000, n=60, b=10, r=496)
    with pytest.raises(DomainError):
        OPIInstance(m=2047, n=60, b=11, r=900).k
    instance = OPIInstance(m=1023, n=60, b=10, r=496)
    assert instance.ell == 30
    assert instance.budget == 600
    assert instance.rate == pytest.approx(60 / 1023)


def test_xp_trials_first_table_row():
    trials = xp_trials(OPIInstance(m=1023, n=60, b=10, r=496))
    assert 1.9158828037384768e15 / 1.10 <= trials <= 1.9158828037384768e15 * 1.10


def test_estimate_small_instance():
    instance = OPIInstance(m=15, n=4, b=4, r=6)
    est = estimate_instance(instance)
    assert est.prange_exact
    assert est.prange_trials >= 1
    assert est.xp.comparator == SLOW
    assert 0 < est.xp.gamma <= 1
    assert est.trials_per_day == pytest.approx(frontier_trials_per_day())
    assert np.isfinite(est.xp_days)


def test_select_comparator():
    assert select_comparator(15) == SLOW
    assert select_comparator(64) == SLOW
    assert select_comparator(65) == FAST
    assert select_comparator(15, slow_max_m=8) == FAST


def test_estimate_records_compiled_comparator_above_threshold(caplog):
    instance = OPIInstance(m=15, n=4, b=4, r=6)
    with caplog.at_level(logging.INFO):
        est = estimate_instance(instance, slow_max_m=8)
    assert est.xp.comparator == FAST
    assert "slow_comparator_max_m=8" in caplog.text


@pytest.mark.slow
@pytest.mark.parametrize("row", sorted(XP_TABLE))
def test_xp_trials_reproduce_table(row):
    m, n = row
    b, r = (10, 496) if m == 1023 else (12, 2016)
    instance = OPIInstance(m=m, n=n, b=b, r=r)
    est = estimate_instance(instance)
    assert est.xp.comparator == select_comparator(m)
    assert XP_TABLE[row] / 1.10 <= est.xp.trials <= XP_TABLE[row] * 1.10
