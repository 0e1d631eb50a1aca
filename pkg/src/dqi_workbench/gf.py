"""Arithmetic in GF(2^b) in polynomial basis.

Elements are plain ints: bit i is the coefficient of x^i. A ``FieldSpec``
carries the irreducible polynomial, the exp/log tables used for fast
products, and the gate-cost constants of one quantum-quantum multiplication
loaded from the versioned table shipped in ``data/gf_mult_costs.json``.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import galois
import numpy as np

from .errors import DomainError
from .ledger import CostLedger, GateCosts

Felt = int

MAX_B = 16
COST_TABLE = "gf_mult_costs.json"


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def clmod(a: int, p: int) -> int:
    """Remainder of bit-polynomial a modulo p."""
    dp = p.bit_length() - 1
    while a and a.bit_length() - 1 >= dp:
        a ^= p << (a.bit_length() - 1 - dp)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)/2."""
    deg = p.bit_length() - 1
    if deg < 1:
        return False
    for divisor in range(2, 1 << (deg // 2 + 1)):
        if clmod(p, divisor) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def default_irreducible(b: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree b."""
    if not 1 <= b <= MAX_B:
        raise DomainError(f"extension degree b={b} outside 1..{MAX_B}")
    for candidate in range(1 << b, 1 << (b + 1)):
        if is_irreducible(candidate):
            return candidate
    raise DomainError(f"no irreducible polynomial of degree {b}")  # unreachable for b >= 1


@lru_cache(maxsize=None)
def load_cost_table() -> Dict[int, GateCosts]:
    """Read the shipped multiplication-cost table keyed by b."""
    text = resources.files("dqi_workbench").joinpath("data", COST_TABLE).read_text(encoding="utf-8")
    raw = json.loads(text)
    if raw.get("version") != 1:
        raise DomainError(f"unsupported cost table version {raw.get('version')!r}")
    return {
        int(b): GateCosts(toffoli=row["toffoli"], cnot=row["cnot"], pctof=row["pctof"])
        for b, row in raw["rows"].items()
    }


def itoh_tsujii_chain(b: int) -> List[Tuple[int, int]]:
    """Addition chain computing a^(2^(b-1) - 1).

    Each entry ``(k, j)`` says: beta_{k+j} = beta_k^(2^j) * beta_j, where
    beta_k = a^(2^k - 1). One entry is one multiplication.
    """
    e = b - 1
    if e <= 1:
        return []
    chain: List[Tuple[int, int]] = []
    k = 1
    for bit in bin(e)[3:]:
        chain.append((k, k))
        k *= 2
        if bit == "1":
            chain.append((k, 1))
            k += 1
    return chain


def itoh_tsujii_mult_count(b: int) -> int:
    e = b - 1
    if e <= 1:
        return 0
    return e.bit_length() - 1 + bin(e).count("1") - 1


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^b) with a fixed irreducible polynomial and optional gate costs."""

    b: int
    irreducible: int
    costs: Optional[GateCosts] = None

    def __post_init__(self) -> None:
        if not 1 <= self.b <= MAX_B:
            raise DomainError(f"extension degree b={self.b} outside 1..{MAX_B}")
        if self.irreducible.bit_length() - 1 != self.b:
            raise DomainError(f"polynomial {self.irreducible:#x} does not have degree {self.b}")
        if not is_irreducible(self.irreducible):
            raise DomainError(f"polynomial {self.irreducible:#x} is reducible over F2")

    @property
    def order(self) -> int:
        return 1 << self.b

    @property
    def cost_inv_mults(self) -> int:
        return itoh_tsujii_mult_count(self.b)

    @property
    def cost_qq_toffoli(self) -> Optional[int]:
        return None if self.costs is None else self.costs.toffoli

    @property
    def cost_qq_cnot(self) -> Optional[int]:
        return None if self.costs is None else self.costs.cnot

    @property
    def cost_qq_pctof(self) -> Optional[int]:
        return None if self.costs is None else self.costs.pctof

    @cached_property
    def _tables(self) -> Tuple[List[int], List[int], int]:
        q1 = self.order - 1
        for generator in range(1, self.order):
            exp = [1]
            x = 1
            for _ in range(q1 - 1):
                x = clmod(clmul(x, generator), self.irreducible)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q1:
                break
        log = [0] * self.order
        for i, value in enumerate(exp):
            log[value] = i
        return exp + exp, log, generator

    @property
    def generator(self) -> Felt:
        return self._tables[2]

    @cached_property
    def exp_table(self) -> np.ndarray:
        return np.array(self._tables[0][: self.order - 1], dtype=np.int64)

    @cached_property
    def log_table(self) -> np.ndarray:
        return np.array(self._tables[1], dtype=np.int64)

    def check(self, a: Felt) -> Felt:
        if not 0 <= a < self.order:
            raise DomainError(f"{a} is not an element of GF(2^{self.b})")
        return a

    def power_of_generator(self, i: int) -> Felt:
        return self._tables[0][i % (self.order - 1)]

    def log(self, a: Felt) -> int:
        if a == 0:
            raise DomainError("logarithm of zero")
        return self._tables[1][a]

    def add(self, a: Felt, b: Felt) -> Felt:
        return a ^ b

    def _mul(self, a: Felt, b: Felt) -> Felt:
        if a == 0 or b == 0:
            return 0
        exp, log, _ = self._tables
        return exp[log[a] + log[b]]

    def mul(self, a: Felt, b: Felt, ledger: Optional[CostLedger] = None) -> Felt:
        if ledger is not None:
            ledger.charge_qq()
        return self._mul(a, b)

    def mul_const(self, a: Felt, c: Felt, ledger: Optional[CostLedger] = None) -> Felt:
        if ledger is not None:
            ledger.charge_qc()
        return self._mul(a, c)

    def square(self, a: Felt, ledger: Optional[CostLedger] = None) -> Felt:
        # Frobenius is F2-linear: a reversible CNOT circuit.
        if ledger is not None:
            ledger.charge_qc()
        return self._mul(a, a)

    def pow(self, a: Felt, e: int) -> Felt:
        if e == 0:
            return 1
        if a == 0:
            return 0
        exp, log, _ = self._tables
        return exp[(log[a] * e) % (self.order - 1)]

    def _frobenius(self, a: Felt, times: int) -> Felt:
        for _ in range(times):
            a = self._mul(a, a)
        return a

    def inv(self, a: Felt, ledger: Optional[CostLedger] = None) -> Felt:
        """Itoh-Tsujii inversion: a^-1 = (a^(2^(b-1) - 1))^2."""
        if a == 0:
            raise DomainError("inverse of zero")
        if ledger is not None:
            ledger.charge_inverse(self.cost_inv_mults)
        beta = {1: a}
        k = 1
        for left, right in itoh_tsujii_chain(self.b):
            k = left + right
            beta[k] = self._mul(self._frobenius(beta[left], right), beta[right])
        if self.b == 1:
            return 1
        return self._mul(beta[k], beta[k])

    def elements(self) -> range:
        return range(self.order)

    def galois_field(self) -> "galois.FieldArrayClass":
        """The same field as a ``galois`` class, used as an independent oracle."""
        return galois.GF(2**self.b, irreducible_poly=galois.Poly.Int(self.irreducible))


def load_field(
    b: int,
    irreducible: Optional[int] = None,
    overrides: Optional[Mapping[str, object]] = None,
) -> FieldSpec:
    """Build a FieldSpec with the shipped costs, optionally overridden from config.

    Args:
        b: Extension degree.
        irreducible: Bitmask of the modulus; defaults to the smallest irreducible.
        overrides: Config entry ``{"irreducible_hex": "0x409", "costs": {...}}``.
    """
    overrides = overrides or {}
    if irreducible is None and overrides.get("irreducible_hex"):
        irreducible = int(str(overrides["irreducible_hex"]), 16)
    if irreducible is None:
        irreducible = default_irreducible(b)
    costs = load_cost_table().get(b)
    user_costs = overrides.get("costs")
    if isinstance(user_costs, Mapping):
        costs = GateCosts(
            toffoli=int(user_costs["toffoli"]),
            cnot=int(user_costs["cnot"]),
            pctof=int(user_costs["pctof"]),
        )
    if costs is None:
        logging.warning("No gate-cost constants for b=%s; Toffoli totals will be reported as unknown", b)
    return FieldSpec(b=b, irreducible=irreducible, costs=costs)


def felt_add(a: Felt, b: Felt) -> Felt:
    return a ^ b


def felt_mul(field: FieldSpec, a: Felt, b: Felt, ledger: Optional[CostLedger] = None) -> Felt:
    return field.mul(a, b, ledger)


def felt_mul_const(field: FieldSpec, a: Felt, c: Felt, ledger: Optional[CostLedger] = None) -> Felt:
    return field.mul_const(a, c, ledger)


def felt_inv(field: FieldSpec, a: Felt, ledger: Optional[CostLedger] = None) -> Felt:
    return field.inv(a, ledger)


def square(field: FieldSpec, a: Felt, ledger: Optional[CostLedger] = None) -> Felt:
    return field.square(a, ledger)


def felt_pow(field: FieldSpec, a: Felt, e: int) -> Felt:
    return field.pow(a, e)


def reference_mul(field: FieldSpec, a: Felt, b: Felt) -> Felt:
    """Schoolbook carry-less multiply then reduce; independent of the tables."""
    return clmod(clmul(a, b), field.irreducible)


@dataclass(frozen=True)
class PctofGate:
    """Parity-controlled Toffoli: target ^= parity(x & control_x) * parity(y & control_y)."""

    control_x: int
    control_y: int
    target: int

    def monomials(self, b: int) -> np.ndarray:
        """Row of the b*b bilinear form x^T (cx cy^T) y, flattened."""
        cx = np.array([(self.control_x >> i) & 1 for i in range(b)], dtype=np.uint8)
        cy = np.array([(self.control_y >> j) & 1 for j in range(b)], dtype=np.uint8)
        return np.outer(cx, cy).reshape(-1)


def apply_pctof(gates: Sequence[PctofGate], x: int, y: int) -> int:
    """Simulate a PCTOF circuit on classical inputs; the output register starts at 0."""
    out = 0
    for gate in gates:
        if bin(x & gate.control_x).count("1") & bin(y & gate.control_y).count("1") & 1:
            out ^= gate.target
    return out


def control_width(gates: Sequence[PctofGate]) -> int:
    """Smallest register width holding every control mask."""
    return max([1] + [max(g.control_x.bit_length(), g.control_y.bit_length()) for g in gates])


def pctof_minimize(gates: Sequence[PctofGate], b: Optional[int] = None) -> List[PctofGate]:
    """Drop gates whose bilinear forms are linearly dependent on earlier ones.

    A dependent gate h with form M_h = sum_{g in S} M_g is absorbed by XOR-ing
    its target into every g in S. The survivors form a basis of the span of
    the forms, so the output length equals the F2 rank of the stacked forms.
    Survivors keep their controls; their targets may become empty.

    ``b`` defaults to the width of the widest control; wider registers only
    pad the forms with zeros.
    """
    if not gates:
        return []
    width = control_width(gates)
    if b is None:
        b = width
    elif b < width:
        raise DomainError(f"controls need {width} bits, register has b={b}")
    GF2 = galois.GF(2)
    forms = GF2(np.stack([gate.monomials(b) for gate in gates]))
    reduced = forms.T.row_reduce()
    pivots: List[int] = []
    for row in np.asarray(reduced):
        nz = np.flatnonzero(row)
        if nz.size:
            pivots.append(int(nz[0]))
    targets = {p: gates[p].target for p in pivots}
    for col in range(len(gates)):
        if col in targets:
            continue
        for row_index, pivot in enumerate(pivots):
            if int(reduced[row_index, col]):
                targets[pivot] ^= gates[col].target
    return [PctofGate(gates[p].control_x, gates[p].control_y, targets[p]) for p in pivots]
