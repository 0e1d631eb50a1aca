"""Classical attack estimators for OPI instances built on Maiorana-McFarland sets.

Covers the semicircle threshold DQI reaches, the Prange trial count, the
Extended Prange (XP) overlap tables with their LP relaxation and the
knapsack dynamic program that picks a budget allocation, plus the analytic
Hoeffding and expectation bounds.

The XP dynamic program walks rows i = 1..m (clauses still to allocate),
budgets 0..B and a lower bound ``low`` on the values of those clauses. Each
state keeps the distribution of the success deficit, indexed d = 0..t where
d = 0 means at least t clauses are satisfied, and compares candidate
distributions lexicographically from d = 0 (the fast comparator) or by
their success probability once completed by a look-ahead allocation of the
remaining clauses (the slow comparator).
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numba import njit

from .errors import DomainError

EXACT_MAX_M = 256
PRECISION_BITS = 256
FAST = "fast"
SLOW = "slow"


@dataclass(frozen=True)
class OPIInstance:
    """OPI over GF(2^b) with m = 2^b - 1 evaluation points, n constraints rows and |F_i| = r."""

    m: int
    n: int
    b: int
    r: int

    def __post_init__(self) -> None:
        if self.b < 1:
            raise DomainError(f"b must be positive, got {self.b}")
        if self.m != self.q - 1:
            raise DomainError(f"OPI instances need m = 2^b - 1 = {self.q - 1}, got m = {self.m}")
        if not 0 < self.n <= self.m:
            raise DomainError(f"n = {self.n} outside 1..{self.m}")
        if not 0 < self.r < self.q:
            raise DomainError(f"r = {self.r} outside 1..{self.q - 1}")

    @property
    def q(self) -> int:
        return 1 << self.b

    @property
    def rate(self) -> float:
        return self.n / self.m

    @property
    def ell(self) -> int:
        return self.n // 2

    @property
    def budget(self) -> int:
        return self.b * self.n

    @property
    def k(self) -> int:
        if self.b % 2:
            raise DomainError(f"Maiorana-McFarland sets need even b, got {self.b}")
        return self.b // 2

    def as_dict(self) -> Dict[str, int]:
        return {"m": self.m, "n": self.n, "b": self.b, "r": self.r}


@dataclass(frozen=True)
class AttackTarget:
    m: int
    n: int
    ell: int
    r: int
    q: int
    mu: float
    t: int


def semicircle_target(m: int, ell: int, r: int, q: int) -> float:
    """Expected satisfied fraction (sqrt(l/m (1 - r/q)) + sqrt((1 - l/m) r/q))^2, capped at 1."""
    if not 0 <= ell <= m or m <= 0:
        raise DomainError(f"need 0 <= ell <= m, got ell={ell}, m={m}")
    if not 0 < r < q:
        raise DomainError(f"need 0 < r < q, got r={r}, q={q}")
    frac = ell / m
    p = r / q
    if frac > 1 - p:
        return 1.0
    return (math.sqrt(frac * (1 - p)) + math.sqrt((1 - frac) * p)) ** 2


def semicircle_threshold(m: int, n: int, r: int, q: int) -> AttackTarget:
    """Clause threshold DQI meets in expectation: t = round(mu * m) with ell = n // 2."""
    ell = n // 2
    mu = semicircle_target(m, ell, r, q)
    t = min(max(int(round(mu * m)), n), m)
    return AttackTarget(m=m, n=n, ell=ell, r=r, q=q, mu=mu, t=t)


def _prange_exact(m: int, n: int, r: int, q: int, t: int) -> Fraction:
    free = m - n
    numerator = sum(
        math.comb(free, s - n) * r ** (s - n) * (q - r) ** (m - s) for s in range(max(t, n), m + 1)
    )
    return Fraction(numerator, q**free)


def prange_success_prob(m: int, n: int, r: int, q: int, t: int, exact: Optional[bool] = None) -> mpmath.mpf:
    """Probability that one Prange trial satisfies at least t clauses.

    The n solved-for clauses are always satisfied; the other m - n each hold
    with probability r/q. Exact rationals are used for m <= 256 (or when
    ``exact`` is set), 256-bit floating point otherwise.
    """
    if t > m:
        raise DomainError(f"threshold t={t} exceeds m={m}")
    if t <= n:
        return mpmath.mpf(1)
    use_exact = m <= EXACT_MAX_M if exact is None else exact
    with mpmath.workprec(PRECISION_BITS):
        if use_exact:
            value = _prange_exact(m, n, r, q, t)
            return mpmath.mpf(value.numerator) / value.denominator
        p = mpmath.mpf(r) / q
        p_bar = 1 - p
        free = m - n
        return mpmath.fsum(
            math.comb(free, s - n) * p ** (s - n) * p_bar ** (m - s) for s in range(t, m + 1)
        )


def prange_trials(m: int, n: int, r: int, q: int, t: int, exact: Optional[bool] = None) -> mpmath.mpf:
    with mpmath.workprec(PRECISION_BITS):
        return 1 / prange_success_prob(m, n, r, q, t, exact)


@dataclass(frozen=True)
class FrontierMachine:
    """Throughput constants of a frontier-class supercomputer."""

    accelerators: int = 37632
    compute_units: int = 220
    simd_lanes: int = 4
    clock_hz: float = 1.7e9
    trials_per_cycle: float = 0.5
    seconds: float = 24 * 3600


def frontier_trials_per_day(machine: Optional[FrontierMachine] = None) -> float:
    machine = machine or FrontierMachine()
    return (
        machine.seconds
        * machine.trials_per_cycle
        * machine.accelerators
        * machine.compute_units
        * machine.simd_lanes
        * machine.clock_hz
    )


def mm_overlap_table(k: int) -> np.ndarray:
    """Best overlap P[s] of a codimension-s affine subspace with S_k, s = 0..2k."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    table = np.ones(2 * k + 1, dtype=np.float64)
    table[0] = 0.5 - 2.0 ** -(k + 1)
    table[1] = 0.5
    for s in range(2, k + 1):
        table[s] = 0.5 + 2.0 ** (s - k - 2)
    return table


def mm_bound_table(k: int) -> List[int]:
    """Upper bound on |A intersect S_k| for an affine subspace A of each dimension d = 0..2k."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    bounds = []
    for d in range(2 * k + 1):
        if d < k:
            bounds.append(2**d)
        elif d < 2 * k - 1:
            bounds.append(2 ** (d - 1) + 2 ** (k - 2) if k >= 2 else 2 ** (d - 1))
        elif d == 2 * k - 1:
            bounds.append(2 ** (2 * k - 2))
        else:
            bounds.append(2 ** (2 * k - 1) - 2 ** (k - 1))
    return bounds


def validate_overlap_table(table: Sequence[float]) -> np.ndarray:
    arr = np.asarray(table, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError("an overlap table needs entries for s = 0..b with b >= 1")
    if np.any(arr < 0) or np.any(arr > 1):
        raise DomainError("overlap probabilities must lie in [0, 1]")
    if np.any(np.diff(arr) < 0):
        raise DomainError("overlap table must be nondecreasing in s")
    return arr


def truncate_to_prange(table: Sequence[float]) -> np.ndarray:
    """The table Prange effectively uses: whole space (s = 0) or single points (s = b)."""
    arr = validate_overlap_table(table)
    out = np.full_like(arr, arr[0])
    out[-1] = arr[-1]
    return out


@dataclass(frozen=True)
class LPSolution:
    distribution: Tuple[Fraction, ...]
    value: Fraction
    budget_per_clause: Fraction


def xp_lp_allocation(table: Sequence[float], b: int, n: int, m: int) -> LPSolution:
    """max sum p_s P[s] s.t. sum p_s = 1, sum s p_s <= b n / m.

    Two constraints put an optimum on at most two support points, so every
    single point and every pair straddling the budget is tried.
    """
    arr = validate_overlap_table(table)
    if arr.size != b + 1:
        raise DomainError(f"overlap table has {arr.size} entries, expected {b + 1}")
    values = [Fraction(float(v)) for v in arr]
    beta = Fraction(b * n, m)
    best_value = Fraction(-1)
    best: Dict[int, Fraction] = {}
    for s in range(b + 1):
        if s <= beta and values[s] > best_value:
            best_value, best = values[s], {s: Fraction(1)}
    for lo in range(b + 1):
        if lo > beta:
            break
        for hi in range(lo + 1, b + 1):
            if hi <= beta:
                continue
            weight = (beta - lo) / (hi - lo)
            value = (1 - weight) * values[lo] + weight * values[hi]
            if value > best_value:
                best_value, best = value, {lo: 1 - weight, hi: weight}
    distribution = tuple(best.get(s, Fraction(0)) for s in range(b + 1))
    return LPSolution(distribution=distribution, value=best_value, budget_per_clause=beta)


def round_lp_allocation(solution: LPSolution, m: int) -> Tuple[int, ...]:
    """Per-clause values from the LP distribution: floor counts, leftovers on the cheapest support point."""
    counts = [int(p * m) for p in solution.distribution]
    support = [s for s, p in enumerate(solution.distribution) if p > 0]
    counts[support[0]] += m - sum(counts)
    values: List[int] = []
    for s in range(len(counts) - 1, -1, -1):
        values.extend([s] * counts[s])
    return tuple(values)


def allocation_success_probability(table: Sequence[float], values: Sequence[int], t: int) -> float:
    """P(sum X_i >= t) for independent X_i ~ Bernoulli(P[values[i]])."""
    arr = np.asarray(table, dtype=np.float64)
    pmf = np.ones(1, dtype=np.float64)
    for s in values:
        p = arr[s]
        pmf = np.convolve(pmf, np.array([1.0 - p, p]))
    if t <= 0:
        return 1.0
    return float(pmf[t:].sum())


def allocation_mean(table: Sequence[float], values: Sequence[int]) -> float:
    arr = np.asarray(table, dtype=np.float64)
    return float(sum(arr[s] for s in values))


def expectation_upper_bound(m: int, rate: float) -> float:
    """No budget-respecting allocation expects more than (1/2 + R) m satisfied clauses."""
    return (0.5 + rate) * m


def hoeffding_tail_bound(mean: float, t: float, m: int) -> float:
    """exp(-2 (t - mean)^2 / m), valid for t >= mean."""
    if t <= mean:
        return 1.0
    return math.exp(-2.0 * (t - mean) ** 2 / m)


def hoeffding_rate(rate: float) -> float:
    """Exponent c(R) with #trials >= exp(c(R) m) at the DQI threshold."""
    if not 0 < rate < 1:
        raise DomainError(f"rate R must lie in (0, 1), got {rate}")
    gap = math.sqrt(rate / 2 * (1 - rate / 2)) - rate
    return 2.0 * gap * gap


def hoeffding_trials_lower_bound(m: int, rate: float) -> mpmath.mpf:
    with mpmath.workprec(PRECISION_BITS):
        return mpmath.exp(mpmath.mpf(hoeffding_rate(rate)) * m)


def _value_cap(arr: np.ndarray) -> int:
    """Smallest s with P[s] = 1; larger values never help."""
    hits = np.flatnonzero(arr >= 1.0)
    return int(hits[0]) if hits.size else arr.size - 1


@njit(cache=False)
def _xp_fast_kernel(table, m, budget_total, t, cap):  # pragma: no cover - compiled
    width = t + 1
    prev = np.zeros((budget_total + 1, cap + 1, width))
    cur = np.zeros((budget_total + 1, cap + 1, width))
    prev_ok = np.ones((budget_total + 1, cap + 1), dtype=np.bool_)
    cur_ok = np.zeros((budget_total + 1, cap + 1), dtype=np.bool_)
    choice = np.zeros((m + 1, budget_total + 1, cap + 1), dtype=np.int8)
    take = np.zeros(width)
    for budget in range(budget_total + 1):
        for low in range(cap + 1):
            prev[budget, low, t] = 1.0
    for i in range(1, m + 1):
        lo_d = max(0, t - i)
        hi_d = min(t, m - i)
        for budget in range(budget_total + 1):
            for low in range(cap, -1, -1):
                can_take = i * low <= budget and prev_ok[budget - low, low]
                can_up = low < cap and cur_ok[budget, low + 1]
                if not can_take and not can_up:
                    cur_ok[budget, low] = False
                    cur[budget, low, :] = 0.0
                    continue
                use_up = True
                if can_take:
                    p = table[low]
                    for d in range(width):
                        take[d] = 0.0
                    for d in range(lo_d, hi_d + 1):
                        if d == 0:
                            v = prev[budget - low, low, 0]
                            if width > 1:
                                v += p * prev[budget - low, low, 1]
                        else:
                            v = (1.0 - p) * prev[budget - low, low, d]
                            if d + 1 < width:
                                v += p * prev[budget - low, low, d + 1]
                        take[d] = v
                    use_up = False
                    if can_up:
                        for d in range(width):
                            if cur[budget, low + 1, d] > take[d]:
                                use_up = True
                                break
                            if cur[budget, low + 1, d] < take[d]:
                                break
                if use_up:
                    for d in range(width):
                        cur[budget, low, d] = cur[budget, low + 1, d]
                    choice[i, budget, low] = 1
                else:
                    for d in range(width):
                        cur[budget, low, d] = take[d]
                    choice[i, budget, low] = 0
                cur_ok[budget, low] = True
        prev, cur = cur, prev
        prev_ok, cur_ok = cur_ok, prev_ok
    return prev[budget_total, 0, 0], choice


def _recover(choice: np.ndarray, m: int, budget_total: int) -> Tuple[int, ...]:
    values: List[int] = []
    i, budget, low = m, budget_total, 0
    while i > 0:
        if choice[i, budget, low] == 1:
            low += 1
        else:
            values.append(low)
            budget -= low
            i -= 1
    return tuple(reversed(values))


@dataclass
class KnapsackResult:
    """Descending per-clause values and the success probability they reach."""

    values: Tuple[int, ...]
    gamma: float
    comparator: str
    t: int
    budget: int
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def counts(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for s in self.values:
            out[s] = out.get(s, 0) + 1
        return out

    @property
    def trials(self) -> float:
        return math.inf if self.gamma <= 0 else 1.0 / self.gamma


class _LookAhead:
    """Best completion of the clauses still unallocated: values capped at ``low``, a knapsack on sum P[s]."""

    def __init__(self, table: np.ndarray, m: int, budget_total: int) -> None:
        self.table = table
        self.m = m
        self.budget_total = budget_total
        self._choices: Dict[int, np.ndarray] = {}
        self._tails: Dict[Tuple[int, int, int], np.ndarray] = {}

    def _choice_table(self, cap_value: int) -> np.ndarray:
        if cap_value in self._choices:
            return self._choices[cap_value]
        width = self.budget_total + 1
        best = np.zeros(width)
        choice = np.zeros((self.m + 1, width), dtype=np.int64)
        for r in range(1, self.m + 1):
            candidates = np.full((cap_value + 1, width), -np.inf)
            for s in range(cap_value + 1):
                candidates[s, s:] = self.table[s] + best[: width - s]
            choice[r] = np.argmax(candidates, axis=0)
            best = candidates.max(axis=0)
        self._choices[cap_value] = choice
        return choice

    def tail(self, remaining: int, budget: int, cap_value: int, width: int) -> np.ndarray:
        key = (remaining, budget, cap_value)
        if key not in self._tails:
            choice = self._choice_table(cap_value)
            pmf = np.ones(1)
            r, beta = remaining, budget
            while r > 0:
                s = int(choice[r, beta])
                p = self.table[s]
                pmf = np.convolve(pmf, np.array([1.0 - p, p]))
                beta -= s
                r -= 1
            self._tails[key] = pmf[::-1].cumsum()[::-1]
        tail = self._tails[key]
        out = np.zeros(width)
        n_copy = min(width, tail.size)
        out[:n_copy] = tail[:n_copy]
        return out


def _xp_slow(table: np.ndarray, m: int, budget_total: int, t: int, cap: int) -> Tuple[int, ...]:
    width = t + 1
    look = _LookAhead(table, m, budget_total)
    prev = np.zeros((budget_total + 1, cap + 1, width))
    prev[:, :, t] = 1.0
    prev_ok = np.ones((budget_total + 1, cap + 1), dtype=bool)
    choice = np.zeros((m + 1, budget_total + 1, cap + 1), dtype=np.int8)
    for i in range(1, m + 1):
        cur = np.zeros_like(prev)
        cur_ok = np.zeros_like(prev_ok)
        lo_d, hi_d = max(0, t - i), min(t, m - i)
        for budget in range(budget_total + 1):
            for low in range(cap, -1, -1):
                can_take = i * low <= budget and prev_ok[budget - low, low]
                can_up = low < cap and cur_ok[budget, low + 1]
                if not (can_take or can_up):
                    continue
                use_up = True
                if can_take:
                    p = table[low]
                    old = prev[budget - low, low]
                    take = np.zeros(width)
                    shifted = np.zeros(width)
                    shifted[:-1] = old[1:]
                    take[lo_d : hi_d + 1] = ((1.0 - p) * old + p * shifted)[lo_d : hi_d + 1]
                    if lo_d == 0:
                        take[0] = old[0] + p * shifted[0]
                    use_up = False
                    if can_up:
                        up = cur[budget, low + 1]
                        tail = look.tail(m - i, budget_total - budget, low, width)
                        score_up, score_take = float(up @ tail), float(take @ tail)
                        if score_up > score_take:
                            use_up = True
                        elif score_up == score_take:
                            use_up = _lex_greater(up, take)
                if use_up:
                    cur[budget, low] = cur[budget, low + 1]
                    choice[i, budget, low] = 1
                else:
                    cur[budget, low] = take
                cur_ok[budget, low] = True
        prev, prev_ok = cur, cur_ok
    return _recover(choice, m, budget_total)


def _lex_greater(a: np.ndarray, b: np.ndarray) -> bool:
    diff = np.flatnonzero(a != b)
    return bool(diff.size) and bool(a[diff[0]] > b[diff[0]])


def xp_knapsack_dp(
    table: Sequence[float],
    m: int,
    budget_total: int,
    t: int,
    comparator: str = SLOW,
) -> KnapsackResult:
    """Budget allocation s_1 >= ... >= s_m (sum <= B) maximizing P(at least t clauses hold)."""
    arr = validate_overlap_table(table)
    if comparator not in (FAST, SLOW):
        raise DomainError(f"unknown comparator {comparator!r}")
    if t > m:
        raise DomainError(f"threshold t={t} is infeasible with m={m} clauses")
    if budget_total < 0:
        raise DomainError(f"budget must be nonnegative, got {budget_total}")
    t = max(t, 0)
    cap = _value_cap(arr)
    budget_total = min(budget_total, m * cap)
    logging.info(
        "XP knapsack: m=%s B=%s t=%s cap=%s comparator=%s (%.1f MB per DP row)",
        m, budget_total, t, cap, comparator, (budget_total + 1) * (cap + 1) * (t + 1) * 8 / 2**20,
    )
    gamma_fast, choice = _xp_fast_kernel(arr, m, budget_total, t, cap)
    fast_values = _recover(choice, m, budget_total)
    if comparator == FAST:
        return KnapsackResult(fast_values, float(gamma_fast), FAST, t, budget_total, {"fast": float(gamma_fast)})
    slow_values = _xp_slow(arr, m, budget_total, t, cap)
    gamma_slow = allocation_success_probability(arr, slow_values, t)
    gamma_fast_exact = allocation_success_probability(arr, fast_values, t)
    details = {"fast": gamma_fast_exact, "slow_lookahead": gamma_slow}
    if gamma_slow >= gamma_fast_exact:
        return KnapsackResult(slow_values, gamma_slow, SLOW, t, budget_total, details)
    return KnapsackResult(fast_values, gamma_fast_exact, SLOW, t, budget_total, details)


def bruteforce_allocation(table: Sequence[float], m: int, budget_total: int, t: int) -> KnapsackResult:
    """Exhaustive optimum over all descending allocations within budget (small m, b only)."""
    arr = validate_overlap_table(table)
    b = arr.size - 1
    best_values: Tuple[int, ...] = (0,) * m
    best_gamma = -1.0
    for combo in itertools.combinations_with_replacement(range(b + 1), m):
        if sum(combo) > budget_total:
            continue
        gamma = allocation_success_probability(arr, combo, t)
        if gamma > best_gamma:
            best_gamma, best_values = gamma, tuple(sorted(combo, reverse=True))
    return KnapsackResult(best_values, best_gamma, "bruteforce", t, budget_total)


def select_comparator(m: int, slow_max_m: int = 64) -> str:
    """Look-ahead comparator up to ``slow_max_m`` clauses, the compiled kernel beyond."""
    if m <= slow_max_m:
        return SLOW
    logging.info("m=%s exceeds slow_comparator_max_m=%s; XP uses the %s comparator", m, slow_max_m, FAST)
    return FAST


def xp_trials(instance: OPIInstance, slow_max_m: int = 64) -> float:
    """1/gamma of the best XP allocation on the instance's Maiorana-McFarland table.

    The comparator that produced the number is ``select_comparator(instance.m, slow_max_m)``.
    """
    table = mm_overlap_table(instance.k)
    target = semicircle_threshold(instance.m, instance.n, instance.r, instance.q)
    comparator = select_comparator(instance.m, slow_max_m)
    result = xp_knapsack_dp(table, instance.m, instance.budget, target.t, comparator)
    return result.trials


@dataclass
class AttackEstimate:
    instance: OPIInstance
    target: AttackTarget
    prange_trials: mpmath.mpf
    prange_exact: bool
    xp: KnapsackResult
    lp: LPSolution
    lp_rounded_gamma: float
    hoeffding_bound: mpmath.mpf
    expectation_bound: float
    trials_per_day: float

    @property
    def prange_days(self) -> mpmath.mpf:
        return self.prange_trials / self.trials_per_day

    @property
    def xp_days(self) -> float:
        return self.xp.trials / self.trials_per_day


def estimate_instance(
    instance: OPIInstance,
    slow_max_m: int = 64,
    machine: Optional[FrontierMachine] = None,
) -> AttackEstimate:
    """Every classical estimate for one instance."""
    target = semicircle_threshold(instance.m, instance.n, instance.r, instance.q)
    logging.info("Instance %s: mu=%.6f t=%s", instance.as_dict(), target.mu, target.t)
    table = mm_overlap_table(instance.k)
    prange = prange_trials(instance.m, instance.n, instance.r, instance.q, target.t)
    comparator = select_comparator(instance.m, slow_max_m)
    xp = xp_knapsack_dp(table, instance.m, instance.budget, target.t, comparator)
    lp = xp_lp_allocation(table, instance.b, instance.n, instance.m)
    lp_gamma = allocation_success_probability(table, round_lp_allocation(lp, instance.m), target.t)
    if lp_gamma > xp.gamma:
        logging.warning("Rounded LP allocation (gamma=%.3e) beats the DP allocation (gamma=%.3e)", lp_gamma, xp.gamma)
    return AttackEstimate(
        instance=instance,
        target=target,
        prange_trials=prange,
        prange_exact=instance.m <= EXACT_MAX_M,
        xp=xp,
        lp=lp,
        lp_rounded_gamma=lp_gamma,
        hoeffding_bound=hoeffding_trials_lower_bound(instance.m, instance.rate),
        expectation_bound=expectation_upper_bound(instance.m, instance.rate),
        trials_per_day=frontier_trials_per_day(machine),
    )
