"""Cycle-accurate classical run of the synchronized EEA with explicit Bezout cofactors.

Two registers of n+1 cells each hold (v_{i-1}, r_{i-1}) and (v_i, r_i). The
quotient of each division is written into the cells the shrinking remainder
frees, consumed again by the cofactor update, and the registers swap roles.
Every logical iteration runs four synchronized phases of fixed length:

    Division      d_i + 1 cycles
    Normalize     s_i cycles
    Align         d_{i-1} cycles
    BezoutUpdate  d_i + 1 cycles

where d_i = deg r_{i-1} - deg r_i and s_i = deg r_i - deg r_{i+1} (deg 0 = -1).
The total is therefore T = 3D + S - d_k + 2k, and the machine is padded with
idle cycles up to ``cycle_bound`` so the run length does not depend on data.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .errors import DomainError, InvariantViolation
from .gf import Felt, FieldSpec
from .ledger import CostLedger
from .poly import Poly, poly_add, poly_divmod, poly_mod, poly_mul

FULL = "full"
HALF = "half"


class Phase(str, Enum):
    DIVISION = "division"
    NORMALIZE = "normalize"
    ALIGN = "align"
    BEZOUT_UPDATE = "bezout_update"
    SWAP = "swap"


def cycle_bound(n: int, mode: str = FULL) -> int:
    """Worst-case cycle count: 6n - 1 for the full run, 6*floor(n/2) + 5 for the half run."""
    if n < 1:
        raise DomainError(f"cycle bound needs n >= 1, got {n}")
    if mode == FULL:
        return 6 * n - 1
    if mode == HALF:
        return 6 * (n // 2) + 5
    raise DomainError(f"unknown EEA mode {mode!r}")


@dataclass
class SyncRegister:
    """One (n+1)-cell register: cofactor cells, remainder cells and in-place quotient."""

    capacity: int
    cofactor: List[Felt] = field(default_factory=list)
    remainder: List[Felt] = field(default_factory=list)
    quotient: List[Felt] = field(default_factory=list)

    @property
    def live(self) -> int:
        return len(self.cofactor) + len(self.remainder) + len(self.quotient)

    @property
    def boundary(self) -> int:
        """Index of the first remainder cell; cofactors grow from the low end."""
        return self.capacity - len(self.remainder) - len(self.quotient)

    def check(self) -> None:
        if self.live > self.capacity:
            raise InvariantViolation(
                f"register overflow: {self.live} live cells in a {self.capacity}-cell register"
            )


@dataclass
class CycleTrace:
    """Per-iteration (d_i, s_i) and the cycle totals of one run."""

    iterations: List[Tuple[int, int]] = field(default_factory=list)
    phases: List[Tuple[int, Phase, int]] = field(default_factory=list)
    bound: int = 0
    peak_cells: int = 0
    ticked: int = 0

    def tick(self, n: int, ledger: Optional[CostLedger], cycles: int = 1) -> None:
        """Advance the clock; each cycle drives n multipliers and n + 1 swap/add cells."""
        self.ticked += cycles
        if ledger is not None and cycles:
            ledger.charge_qq(n * cycles)
            ledger.charge_cswap((n + 1) * cycles)
            ledger.charge_cadd((n + 1) * cycles)

    @property
    def k(self) -> int:
        return len(self.iterations)

    @property
    def total_d(self) -> int:
        return sum(d for d, _ in self.iterations)

    @property
    def total_s(self) -> int:
        return sum(s for _, s in self.iterations)

    @property
    def cycles(self) -> int:
        total, prev_d = 0, 0
        for d, s in self.iterations:
            total += 2 * d + s + prev_d + 2
            prev_d = d
        return total

    @property
    def closed_form(self) -> int:
        last_d = self.iterations[-1][0] if self.iterations else 0
        return 3 * self.total_d + self.total_s - last_d + 2 * self.k

    @property
    def padded_cycles(self) -> int:
        return max(self.cycles, self.bound)

    @property
    def idle_cycles(self) -> int:
        return self.padded_cycles - self.cycles

    def as_dict(self) -> dict:
        return {
            "iterations": [{"d": d, "s": s} for d, s in self.iterations],
            "k": self.k,
            "D": self.total_d,
            "S": self.total_s,
            "cycles": self.cycles,
            "bound": self.bound,
            "idle_cycles": self.idle_cycles,
            "peak_cells": self.peak_cells,
        }


@dataclass(frozen=True)
class SyncResult:
    """Full mode: (remainder=gcd, u, v). Half mode: (remainder=Omega, v=sigma), u is None."""

    mode: str
    remainder: Poly
    u: Optional[Poly]
    v: Poly
    trace: CycleTrace


def _deg(cells: List[Felt]) -> int:
    d = len(cells) - 1
    while d >= 0 and cells[d] == 0:
        d -= 1
    return d


def _check_degrees(n: int, v_prev: List[Felt], r_prev: List[Felt], v_cur: List[Felt], r_cur: List[Felt]) -> None:
    dv_prev, dr_prev, dv, dr = _deg(v_prev), _deg(r_prev), _deg(v_cur), _deg(r_cur)
    if dv + dr > n:
        raise InvariantViolation(f"deg v + deg r = {dv + dr} exceeds n = {n}")
    if not (dr < dr_prev and dv > dv_prev):
        raise InvariantViolation("remainder degrees must fall while cofactor degrees rise")
    if dv + dr_prev != n:
        raise InvariantViolation(f"deg v_i + deg r_(i-1) = {dv + dr_prev}, expected {n}")


def sync_eea_run(
    a: Poly,
    b: Poly,
    mode: str = FULL,
    ell: Optional[int] = None,
    ledger: Optional[CostLedger] = None,
) -> SyncResult:
    """Run the synchronized EEA on (A, B) with deg A = n > deg B.

    Args:
        a: The larger input, its degree fixes the register size n.
        b: Nonzero, strictly smaller degree than ``a``.
        mode: ``"full"`` runs to the gcd; ``"half"`` stops at the first remainder of degree < ell.
        ell: Half-mode threshold, defaults to n // 2.
        ledger: Charged n QQ multiplications per executed or idle cycle plus the
            inversions of the per-iteration normalization.
    """
    if mode not in (FULL, HALF):
        raise DomainError(f"unknown EEA mode {mode!r}")
    if b.is_zero():
        raise DomainError("synchronized EEA needs a nonzero second input")
    n = a.degree
    if b.degree >= n:
        raise DomainError(f"synchronized EEA needs deg B < deg A (got {b.degree} and {n})")
    if ell is None:
        ell = n // 2
    if mode == HALF and not 0 <= ell <= n:
        raise DomainError(f"half-mode threshold {ell} outside 0..{n}")
    fld = a.field
    trace = CycleTrace(bound=cycle_bound(n, mode))

    if mode == HALF and b.degree < ell:
        _settle(trace, n, ledger)
        return SyncResult(mode, b, None, Poly.one(fld), trace)

    # Initial normalization of B; A*u + B*v = r holds with v_1 = lambda.
    lam = fld.inv(b.lead, ledger)
    if ledger is not None:
        ledger.charge_qq(len(b.coeffs))
    reg_a = SyncRegister(capacity=n + 1, cofactor=[], remainder=list(a.coeffs))
    reg_b = SyncRegister(
        capacity=n + 1,
        cofactor=[lam],
        remainder=[fld.mul(c, lam) for c in b.coeffs],
    )
    prev_d = 0
    iteration = 0
    while True:
        iteration += 1
        deg_a = len(reg_a.remainder) - 1
        deg_b = len(reg_b.remainder) - 1
        d = deg_a - deg_b

        # Division: one quotient digit per cycle, stored where the remainder shrinks.
        work = reg_a.remainder
        reg_a.quotient = []
        for t in range(d, -1, -1):
            q_t = work[deg_b + t]
            if q_t:
                for j, c in enumerate(reg_b.remainder):
                    work[t + j] ^= fld.mul(q_t, c)
            work.pop()
            reg_a.quotient.insert(0, q_t)
            reg_a.check()
            trace.tick(n, ledger)
        trace.phases.append((iteration, Phase.DIVISION, d + 1))

        # Normalize: drop leading zeros, rescale the new remainder to monic.
        deg_new = _deg(work)
        s = deg_b - deg_new
        for _ in range(s - 1):
            work.pop()
        if deg_new >= 0:
            scale = fld.inv(work[-1], ledger)
            reg_a.remainder = [fld.mul(c, scale) for c in work]
            reg_a.cofactor = [fld.mul(c, scale) for c in reg_a.cofactor]
            reg_a.quotient = [fld.mul(c, scale) for c in reg_a.quotient]
        else:
            reg_a.remainder = []
        reg_a.check()
        trace.tick(n, ledger, s)
        trace.phases.append((iteration, Phase.NORMALIZE, s))

        trace.tick(n, ledger, prev_d)
        trace.phases.append((iteration, Phase.ALIGN, prev_d))

        # Bezout update: v_new = v_{i-1} + q * v_i, consuming quotient digits low first.
        acc = list(reg_a.cofactor)
        for t in range(d + 1):
            q_t = reg_a.quotient.pop(0)
            if q_t:
                need = t + len(reg_b.cofactor)
                if len(acc) < need:
                    acc.extend([0] * (need - len(acc)))
                for j, c in enumerate(reg_b.cofactor):
                    acc[t + j] ^= fld.mul(q_t, c)
            reg_a.cofactor = acc
            reg_a.check()
            trace.tick(n, ledger)
        while acc and acc[-1] == 0:
            acc.pop()
        reg_a.cofactor = acc
        trace.phases.append((iteration, Phase.BEZOUT_UPDATE, d + 1))

        trace.iterations.append((d, s))
        trace.peak_cells = max(trace.peak_cells, reg_a.live + reg_b.live)
        if trace.peak_cells > 2 * (n + 1):
            raise InvariantViolation(f"{trace.peak_cells} live cells exceed 2(n+1) = {2 * (n + 1)}")

        reg_a, reg_b = reg_b, reg_a
        trace.phases.append((iteration, Phase.SWAP, 0))
        if reg_b.remainder:
            _check_degrees(n, reg_a.cofactor, reg_a.remainder, reg_b.cofactor, reg_b.remainder)
        prev_d = d

        if mode == FULL and not reg_b.remainder:
            gcd = Poly(fld, tuple(reg_a.remainder))
            v = Poly(fld, tuple(reg_a.cofactor))
            u, rest = poly_divmod(poly_add(gcd, poly_mul(b, v)), a)
            if not rest.is_zero():
                raise InvariantViolation("Bezout identity broken: (gcd - B*v) is not a multiple of A")
            _settle(trace, n, ledger)
            return SyncResult(mode, gcd, u, v, trace)
        if mode == HALF and _deg(reg_b.remainder) < ell:
            _settle(trace, n, ledger)
            return SyncResult(
                mode, Poly(fld, tuple(reg_b.remainder)), None, Poly(fld, tuple(reg_b.cofactor)), trace
            )


def _settle(trace: CycleTrace, n: int, ledger: Optional[CostLedger]) -> None:
    if trace.ticked != trace.cycles:
        raise InvariantViolation(f"{trace.ticked} cycles executed, the phase schedule accounts for {trace.cycles}")
    if trace.cycles != trace.closed_form:
        raise InvariantViolation(f"cycle count {trace.cycles} disagrees with 3D + S - d_k + 2k = {trace.closed_form}")
    if trace.cycles > trace.bound:
        logging.warning("EEA run took %s cycles, above the padded schedule of %s", trace.cycles, trace.bound)
    # Idle padding cycles still clock the multipliers.
    idle = trace.idle_cycles
    if ledger is not None and idle:
        ledger.charge_qq(n * idle)
        ledger.charge_cswap((n + 1) * idle)
        ledger.charge_cadd((n + 1) * idle)


def fibonacci_pair(fld: FieldSpec, n: int) -> Tuple[Poly, Poly]:
    """Inputs whose every quotient has degree 1: the 6n - 1 worst case."""
    cur, prev = Poly.one(fld), Poly.zero(fld)
    z = Poly.monomial(fld, 1)
    for _ in range(n):
        cur, prev = poly_add(poly_mul(z, cur), prev), cur
    return cur, prev


def invert_then_multiply(p: Poly, b: Poly, c: Poly, ledger: Optional[CostLedger] = None) -> Poly:
    """C * B^-1 mod P through an explicit inverse from the full synchronized run."""
    result = sync_eea_run(p, poly_mod(b, p), FULL, ledger=ledger)
    if result.remainder.degree != 0:
        raise DomainError("B is not invertible modulo P")
    return poly_mod(poly_mul(c, result.v, ledger), p)
