"""Cost ledger for field-operation accounting.

The ledger only observes: every routine that accepts ``ledger=None`` returns
the same values with or without one. Counters are monotone and two ledgers
merge by componentwise summation, so per-thread ledgers can be combined.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

from .errors import DomainError

COUNTERS = ("qq_mult", "qc_mult", "gf_inverse", "cswap", "cadd", "inv_qq_mult", "qc_scale")


@dataclass(frozen=True)
class GateCosts:
    """Gate counts of one quantum-quantum multiplication at a fixed b."""

    toffoli: int
    cnot: int
    pctof: int


@dataclass
class CostLedger:
    """Running account of field operations.

    ``qq_mult`` and ``qc_mult`` are the explicit quantum-quantum and
    quantum-classical multiplications of an algorithm. Multiplications spent
    inside Itoh-Tsujii inversions land in ``inv_qq_mult`` and rescalings by
    powers of a classical evaluation point land in ``qc_scale``.
    """

    qq_mult: int = 0
    qc_mult: int = 0
    gf_inverse: int = 0
    cswap: int = 0
    cadd: int = 0
    inv_qq_mult: int = 0
    qc_scale: int = 0
    costs: Optional[GateCosts] = None
    stages: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def _bump(self, name: str, count: int) -> None:
        if count < 0:
            raise DomainError(f"ledger counters never decrease ({name} += {count})")
        setattr(self, name, getattr(self, name) + count)

    def charge_qq(self, count: int = 1) -> None:
        self._bump("qq_mult", count)

    def charge_qc(self, count: int = 1) -> None:
        self._bump("qc_mult", count)

    def charge_scale(self, count: int = 1) -> None:
        self._bump("qc_scale", count)

    def charge_inverse(self, mults_per_inverse: int, count: int = 1) -> None:
        self._bump("gf_inverse", count)
        self._bump("inv_qq_mult", mults_per_inverse * count)

    def charge_cswap(self, count: int = 1) -> None:
        self._bump("cswap", count)

    def charge_cadd(self, count: int = 1) -> None:
        self._bump("cadd", count)

    def counters(self) -> Dict[str, int]:
        return {name: getattr(self, name) for name in COUNTERS}

    @contextmanager
    def stage(self, name: str) -> Iterator["CostLedger"]:
        """Attribute everything charged inside the block to ``name``."""
        before = self.counters()
        try:
            yield self
        finally:
            after = self.counters()
            bucket = self.stages.setdefault(name, {key: 0 for key in COUNTERS})
            for key in COUNTERS:
                bucket[key] += after[key] - before[key]

    @property
    def total_qq(self) -> int:
        return self.qq_mult + self.inv_qq_mult

    @property
    def toffoli_total(self) -> Optional[int]:
        if self.costs is None:
            return None
        return self.total_qq * self.costs.toffoli

    @property
    def pctof_total(self) -> Optional[int]:
        if self.costs is None:
            return None
        return self.total_qq * self.costs.pctof

    @property
    def cnot_total(self) -> Optional[int]:
        if self.costs is None:
            return None
        return self.total_qq * self.costs.cnot

    def merge(self, other: "CostLedger") -> "CostLedger":
        merged = CostLedger(costs=self.costs or other.costs)
        for name in COUNTERS:
            setattr(merged, name, getattr(self, name) + getattr(other, name))
        for source in (self.stages, other.stages):
            for stage_name, bucket in source.items():
                target = merged.stages.setdefault(stage_name, {key: 0 for key in COUNTERS})
                for key, value in bucket.items():
                    target[key] += value
        return merged

    def __add__(self, other: "CostLedger") -> "CostLedger":
        return self.merge(other)

    def snapshot(self) -> Dict[str, object]:
        snap: Dict[str, object] = dict(self.counters())
        snap["toffoli_total"] = self.toffoli_total
        snap["pctof_total"] = self.pctof_total
        snap["cnot_total"] = self.cnot_total
        snap["stages"] = {name: dict(bucket) for name, bucket in self.stages.items()}
        return snap


def decoder_cost_formula(m: int, n: int, mode: str) -> Dict[str, float]:
    """Leading-order decoder cost for a syndrome of length n and block length m."""
    if mode == "explicit":
        return {"qq_mult": 3 * n * n, "qc_mult": m * n, "gf_inverse": m + 6 * n}
    if mode == "implicit":
        return {"qq_mult": 2 * m * n + n * n, "qc_mult": m * n / 2, "gf_inverse": m + n}
    raise DomainError(f"unknown decoder mode {mode!r}")


@dataclass(frozen=True)
class CostRow:
    technique: str
    approach: str
    qubits: str
    multiplications: str
    qubit_count: float
    mult_count: int


def eea_cost_table(n: int, b: int, task: str = "eea") -> List[CostRow]:
    """Leading-order qubit and multiplication counts of EEA circuit designs.

    ``task="eea"`` lists the full extended GCD; ``task="division"`` lists
    modular division A/B mod P built on top of it.
    """
    log_n = max(n, 2).bit_length()
    if task == "eea":
        rows = [
            ("Euclid GCD, separate quotient register", "eea", "3nb", 3 * n * b + log_n, 12),
            ("Binary GCD", "eea", "4nb + 2n", 4 * n * b + 2 * n + log_n, 4),
            ("Bernstein-Yang GCD", "eea", "4nb + n", 4 * n * b + n + log_n, 4),
            ("Bernstein-Yang GCD, compressed", "eea", "4nb + 0.5n", 4 * n * b + 0.5 * n + log_n, 4),
            ("Synchronized EEA, explicit Bezout", "eea", "2nb", 2 * n * b + log_n, 6),
            ("Dialog EEA, implicit Bezout", "eea", "2nb", 2 * n * b + log_n, 2),
        ]
    elif task == "division":
        rows = [
            ("Euclid GCD, separate quotient register", "invert-then-multiply", "4nb", 4 * n * b + log_n, 13),
            ("Binary GCD", "invert-then-multiply", "6nb + 2n", 6 * n * b + 2 * n + log_n, 5),
            ("Bernstein-Yang GCD", "invert-then-multiply", "6nb + n", 6 * n * b + n + log_n, 5),
            ("Bernstein-Yang GCD, compressed", "invert-then-multiply", "6nb + 0.5n", 6 * n * b + 0.5 * n + log_n, 5),
            ("Synchronized EEA, explicit Bezout", "invert-then-multiply", "4nb", 4 * n * b + log_n, 7),
            ("Dialog EEA, implicit Bezout", "direct-division", "4nb", 4 * n * b + log_n, 4),
        ]
    else:
        raise DomainError(f"unknown cost table {task!r}")
    return [
        CostRow(
            technique=technique,
            approach=approach,
            qubits=f"{qubits} + O(log n)",
            multiplications=f"{factor}n^2",
            qubit_count=qubit_count,
            mult_count=factor * n * n,
        )
        for technique, approach, qubits, qubit_count, factor in rows
    ]
