"""Ranking and unranking of k-combinations of [0, m).

Combinations are strictly decreasing tuples (c_k, ..., c_1). ``comb_rank``
is the colexicographic rank sum_j C(c_j, j); ``comb_unrank_greedy`` inverts it
digit by digit. The divide-and-conquer unranker splits [0, m) into a lower
and an upper half and picks the number of elements taken from the upper half
by binary search over hypergeometric prefix sums, evaluated exactly by binary
splitting.
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Iterable, Sequence, Tuple

from tqdm import tqdm

from .errors import DomainError

Combination = Tuple[int, ...]


@lru_cache(maxsize=None)
def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def _check_combination(c: Sequence[int], m: int | None = None) -> None:
    for hi, lo in zip(c, c[1:]):
        if hi <= lo:
            raise DomainError(f"combination {tuple(c)} is not strictly decreasing")
    if c and c[-1] < 0:
        raise DomainError(f"combination {tuple(c)} has a negative element")
    if m is not None and c and c[0] >= m:
        raise DomainError(f"combination {tuple(c)} has an element outside [0, {m})")


def _check_rank(m: int, k: int, r: int) -> None:
    if not 0 <= k <= m:
        raise DomainError(f"k={k} outside 0..{m}")
    total = binom(m, k)
    if not 0 <= r < total:
        raise DomainError(f"rank {r} outside [0, C({m},{k}) = {total})")


def comb_rank(c: Sequence[int]) -> int:
    """Colex rank: sum of C(c_j, j) with c_1 the smallest element."""
    _check_combination(c)
    k = len(c)
    return sum(binom(value, k - idx) for idx, value in enumerate(c))


def comb_unrank_greedy(m: int, k: int, r: int) -> Combination:
    """Largest c_k with C(c_k, k) <= r, then recurse on the residual rank.

    Each digit is found by a bitwise binary search over its admissible range.
    """
    _check_rank(m, k, r)
    out = []
    hi = m - 1
    for j in range(k, 0, -1):
        c = j - 1
        step = 1 << max(hi - c, 0).bit_length()
        while step:
            candidate = c + step
            if candidate <= hi and binom(candidate, j) <= r:
                c = candidate
            step >>= 1
        out.append(c)
        r -= binom(c, j)
        hi = c - 1
    return tuple(out)


def _term_p(m1: int, k: int, i: int) -> int:
    return (m1 - i) * (k - i)


def _term_q(m2: int, k: int, i: int) -> int:
    return (i + 1) * (m2 - k + i + 1)


def _split(m1: int, m2: int, k: int, a: int, b: int) -> Tuple[int, int, int]:
    """(P, Q, T) over [a, b) for the ratio H(i+1)/H(i) = p(i)/q(i)."""
    if b - a == 1:
        q = _term_q(m2, k, a)
        return _term_p(m1, k, a), q, q
    c = (a + b) // 2
    p_left, q_left, t_left = _split(m1, m2, k, a, c)
    p_right, q_right, t_right = _split(m1, m2, k, c, b)
    return p_left * p_right, q_left * q_right, q_right * t_left + p_left * t_right


def hypergeometric_term(m1: int, m2: int, k: int, i: int) -> int:
    return binom(m1, i) * binom(m2, k - i)


def hypergeometric_prefix_sum(m1: int, m2: int, k: int, x: int) -> int:
    """sum_{i < x} C(m1, i) C(m2, k - i), by binary splitting on the term ratio."""
    if not 0 <= x <= k + 1:
        raise DomainError(f"prefix length {x} outside 0..{k + 1}")
    start = max(0, k - m2)
    if x <= start:
        return 0
    head = hypergeometric_term(m1, m2, k, start)
    if head == 0:
        return 0
    _, q, t = _split(m1, m2, k, start, x)
    total, rest = divmod(head * t, q)
    if rest:
        raise ArithmeticError("binary splitting produced a non-integral prefix sum")
    return total


def _halves(m: int) -> Tuple[int, int]:
    """(m1, m2): the upper half holds the m1 values [m2, m)."""
    m1 = m // 2
    return m1, m - m1


def comb_unrank_dc(m: int, k: int, r: int) -> Combination:
    """Divide-and-conquer unranking.

    Combinations are grouped by i, the number of elements in the upper half,
    groups in increasing i; inside a group the rank splits as
    r' = r_upper * C(m2, k - i) + r_lower.
    """
    _check_rank(m, k, r)
    return _unrank_dc(m, k, r)


def _unrank_dc(m: int, k: int, r: int) -> Combination:
    if k == 0:
        return ()
    if k == m:
        return tuple(range(m - 1, -1, -1))
    if m <= 2:
        return comb_unrank_greedy(m, k, r)
    m1, m2 = _halves(m)
    # Largest i with PS(i) <= r, searched bitwise over [0, k].
    i = 0
    step = 1 << k.bit_length()
    while step:
        candidate = i + step
        if candidate <= k and hypergeometric_prefix_sum(m1, m2, k, candidate) <= r:
            i = candidate
        step >>= 1
    inner = r - hypergeometric_prefix_sum(m1, m2, k, i)
    r_upper, r_lower = divmod(inner, binom(m2, k - i))
    upper = tuple(m2 + c for c in _unrank_dc(m1, i, r_upper))
    lower = _unrank_dc(m2, k - i, r_lower)
    return upper + lower


def comb_rank_dc(c: Sequence[int], m: int) -> int:
    """Inverse of ``comb_unrank_dc``."""
    _check_combination(c, m)
    return _rank_dc(tuple(c), m)


def _rank_dc(c: Combination, m: int) -> int:
    k = len(c)
    if k == 0 or k == m:
        return 0
    if m <= 2:
        return comb_rank(c)
    m1, m2 = _halves(m)
    upper = tuple(v - m2 for v in c if v >= m2)
    lower = tuple(v for v in c if v < m2)
    i = len(upper)
    return (
        hypergeometric_prefix_sum(m1, m2, k, i)
        + _rank_dc(upper, m1) * binom(m2, k - i)
        + _rank_dc(lower, m2)
    )


def dicke_stage_cost(m: int, k: int, b: int) -> int:
    """Leading-order Toffoli count of the sparse Dicke preparation stage (reporting only)."""
    return m * k + k * k * b * b


def sweep_pairs(max_binom: int, max_m: int) -> Iterable[Tuple[int, int]]:
    for m in range(1, max_m + 1):
        for k in range(0, m + 1):
            if binom(m, k) <= max_binom:
                yield m, k


def bijectivity_sweep(max_binom: int = 10_000, max_m: int = 24, progress: bool = True) -> int:
    """Round-trip both unrankers over every (m, k, r) in range; returns the number of ranks checked.

    Greedy outputs must also come out in increasing colex order.
    """
    pairs = list(sweep_pairs(max_binom, max_m))
    logging.info("Unranking sweep over %s (m, k) pairs (C(m,k) <= %s, m <= %s)", len(pairs), max_binom, max_m)
    checked = 0
    iterator = tqdm(pairs, desc="Unranking sweep") if progress else pairs
    for m, k in iterator:
        previous: Combination | None = None
        seen_dc = set()
        for r in range(binom(m, k)):
            greedy = comb_unrank_greedy(m, k, r)
            if comb_rank(greedy) != r:
                raise DomainError(f"greedy round trip failed at m={m}, k={k}, r={r}")
            if previous is not None and not _colex_less(previous, greedy):
                raise DomainError(f"greedy order broken at m={m}, k={k}, r={r}")
            previous = greedy
            dc = comb_unrank_dc(m, k, r)
            if comb_rank_dc(dc, m) != r or dc in seen_dc:
                raise DomainError(f"divide-and-conquer round trip failed at m={m}, k={k}, r={r}")
            seen_dc.add(dc)
            checked += 1
    return checked


def _colex_less(a: Combination, b: Combination) -> bool:
    # Decreasing tuples: colex order compares the largest elements first.
    return a < b
