"""Maiorana-McFarland target sets and exhaustive affine-intersection oracles.

Vectors of F_2^(2k) are ints, bit i holding coordinate x_(i+1); a field
element of GF(2^(2k)) maps to the vector of its polynomial-basis bits. The
set S_k is the support of the bent function sum_i x_i x_(i+k).

Affine subspaces are enumerated once each: a linear part in reduced row
echelon form (every basis vector owns a pivot, its lowest set bit, and no
other basis vector touches that bit) times the coset representatives that
vanish on every pivot.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np
from tqdm import tqdm

from .attacks import OPIInstance, mm_bound_table
from .errors import CapabilityError, DomainError

EXHAUSTIVE_MAX_DIM = 8

BitVector = Union[int, Sequence[int]]


def _as_int(x: BitVector, dim: int) -> int:
    if isinstance(x, (int, np.integer)):
        value = int(x)
        if not 0 <= value < 1 << dim:
            raise DomainError(f"vector {value} does not fit in {dim} bits")
        return value
    bits = list(x)
    if len(bits) != dim:
        raise DomainError(f"expected a vector of length {dim}, got {len(bits)}")
    value = 0
    for i, bit in enumerate(bits):
        if bit not in (0, 1):
            raise DomainError(f"coordinate {i} is {bit}, not a bit")
        value |= bit << i
    return value


def s_k_member(x: BitVector, k: int) -> bool:
    """sum_{i=1..k} x_i x_(i+k) = 1 over F_2."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    value = _as_int(x, 2 * k)
    low = value & ((1 << k) - 1)
    return bin(low & (value >> k)).count("1") % 2 == 1


def s_k_mask(k: int) -> np.ndarray:
    """Membership of every vector of F_2^(2k) in S_k, indexed by the vector."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    idx = np.arange(1 << (2 * k), dtype=np.int64)
    parity = np.zeros(idx.size, dtype=np.int64)
    for i in range(k):
        parity ^= ((idx >> i) & 1) & ((idx >> (i + k)) & 1)
    return parity.astype(bool)


def s_k_size(k: int) -> int:
    return 2 ** (2 * k - 1) - 2 ** (k - 1)


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n."""
    if not 0 <= k <= n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def _bit_rows(vectors: Sequence[int], dim: int) -> np.ndarray:
    return np.array([[(v >> i) & 1 for i in range(dim)] for v in vectors], dtype=np.uint8).reshape(-1, dim)


def gf2_rank(vectors: Sequence[int], dim: int) -> int:
    if not vectors:
        return 0
    GF2 = galois.GF(2)
    return int(np.linalg.matrix_rank(GF2(_bit_rows(vectors, dim))))


@dataclass(frozen=True)
class AffineSubspace:
    """offset + span(basis) inside F_2^dim."""

    dim: int
    basis: Tuple[int, ...]
    offset: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.offset < 1 << self.dim:
            raise DomainError(f"offset {self.offset} does not fit in {self.dim} bits")
        if gf2_rank(self.basis, self.dim) != len(self.basis):
            raise DomainError("affine subspace basis is linearly dependent")

    @property
    def d(self) -> int:
        return len(self.basis)

    def points(self) -> np.ndarray:
        return _span(self.basis) ^ self.offset


def _span(basis: Sequence[int]) -> np.ndarray:
    span = np.zeros(1, dtype=np.int64)
    for v in basis:
        span = np.concatenate([span, span ^ v])
    return span


def _pivot_sets(dim: int, d: int) -> Iterator[Tuple[int, ...]]:
    return itertools.combinations(range(dim), d)


def _rref_bases(dim: int, pivots: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    pivot_set = set(pivots)
    free = [[pos for pos in range(p + 1, dim) if pos not in pivot_set] for p in pivots]
    total_bits = sum(len(f) for f in free)
    for word in range(1 << total_bits):
        basis = []
        shift = 0
        for p, positions in zip(pivots, free):
            v = 1 << p
            for idx, pos in enumerate(positions):
                if (word >> (shift + idx)) & 1:
                    v |= 1 << pos
            shift += len(positions)
            basis.append(v)
        yield tuple(basis)


def _coset_offsets(dim: int, pivots: Tuple[int, ...]) -> np.ndarray:
    offsets = np.zeros(1, dtype=np.int64)
    for pos in range(dim):
        if pos not in pivots:
            offsets = np.concatenate([offsets, offsets | (1 << pos)])
    return offsets


def enumerate_affine_subspaces(dim: int, d: int) -> Iterator[AffineSubspace]:
    """Every d-dimensional affine subspace of F_2^dim, exactly once."""
    if not 0 <= d <= dim:
        raise DomainError(f"dimension {d} outside 0..{dim}")
    for pivots in _pivot_sets(dim, d):
        offsets = _coset_offsets(dim, pivots)
        for basis in _rref_bases(dim, pivots):
            for offset in offsets:
                yield AffineSubspace(dim, basis, int(offset))


def affine_subspace_count(dim: int, d: int) -> int:
    return gaussian_binomial(dim, d) * (1 << (dim - d))


def _check_exhaustive(dim: int, max_dim: int) -> None:
    limit = min(max_dim, EXHAUSTIVE_MAX_DIM)
    if dim > limit:
        raise CapabilityError(f"exhaustive enumeration over F_2^{dim} is beyond the supported {limit} dimensions")


def _max_intersection(mask: np.ndarray, dim: int, d: int, progress: bool = False) -> int:
    best = 0
    pivot_sets = list(_pivot_sets(dim, d))
    iterator = tqdm(pivot_sets, desc=f"Affine subspaces d={d}") if progress else pivot_sets
    for pivots in iterator:
        offsets = _coset_offsets(dim, pivots)
        for basis in _rref_bases(dim, pivots):
            span = _span(basis)
            counts = mask[offsets[:, None] ^ span[None, :]].sum(axis=1)
            best = max(best, int(counts.max()))
            if best == span.size:
                return best
    return best


def max_affine_intersection(k: int, d: int, max_dim: int = EXHAUSTIVE_MAX_DIM, progress: bool = False) -> int:
    """Exact max |A intersect S_k| over d-dimensional affine subspaces A."""
    dim = 2 * k
    if not 0 <= d <= dim:
        raise DomainError(f"dimension {d} outside 0..{dim}")
    _check_exhaustive(dim, max_dim)
    return _max_intersection(s_k_mask(k), dim, d, progress)


def overlap_table_from_mask(mask: np.ndarray, dim: int, max_dim: int = EXHAUSTIVE_MAX_DIM, progress: bool = False) -> np.ndarray:
    """P[s] = max |A intersect F| / |A| over affine subspaces of codimension s."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size != 1 << dim:
        raise DomainError(f"mask has {mask.size} entries, expected 2^{dim}")
    _check_exhaustive(dim, max_dim)
    table = np.zeros(dim + 1, dtype=np.float64)
    for s in range(dim + 1):
        d = dim - s
        table[s] = _max_intersection(mask, dim, d, progress) / (1 << d)
    return table


@dataclass(frozen=True)
class TargetSet:
    """F = {x : transform . phi(x) + offset in S_k}."""

    k: int
    transform: np.ndarray
    offset: int = 0

    def __post_init__(self) -> None:
        dim = 2 * self.k
        matrix = np.asarray(self.transform, dtype=np.uint8)
        if matrix.shape != (dim, dim):
            raise DomainError(f"transform must be {dim}x{dim}, got {matrix.shape}")
        if not 0 <= self.offset < 1 << dim:
            raise DomainError(f"offset {self.offset} does not fit in {dim} bits")
        object.__setattr__(self, "transform", matrix)

    @property
    def dim(self) -> int:
        return 2 * self.k

    @property
    def invertible(self) -> bool:
        GF2 = galois.GF(2)
        return int(np.linalg.matrix_rank(GF2(self.transform))) == self.dim

    def apply(self, x: int) -> int:
        bits = _bit_rows([x], self.dim)[0]
        image = self.transform.astype(np.int64) @ bits % 2
        return int(sum(int(b) << i for i, b in enumerate(image))) ^ self.offset

    def contains(self, x: BitVector) -> bool:
        return s_k_member(self.apply(_as_int(x, self.dim)), self.k)

    def mask(self) -> np.ndarray:
        everything = np.arange(1 << self.dim, dtype=np.int64)
        bits = (everything[:, None] >> np.arange(self.dim)) & 1
        images = bits @ self.transform.T.astype(np.int64) % 2
        packed = images @ (np.int64(1) << np.arange(self.dim, dtype=np.int64))
        return s_k_mask(self.k)[packed ^ self.offset]

    def size(self) -> int:
        return int(self.mask().sum())

    def as_dict(self) -> Dict[str, object]:
        rows = [int(sum(int(b) << i for i, b in enumerate(row))) for row in self.transform]
        return {"transform_rows": rows, "offset": self.offset}

    @classmethod
    def identity(cls, k: int) -> "TargetSet":
        return cls(k, np.eye(2 * k, dtype=np.uint8))


def overlap_table_bruteforce(target: TargetSet, max_dim: int = EXHAUSTIVE_MAX_DIM, progress: bool = False) -> np.ndarray:
    return overlap_table_from_mask(target.mask(), target.dim, max_dim, progress)


def gl_random(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform invertible F_2 matrix: each row is redrawn until it leaves the span of the rows above."""
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    echelon: Dict[int, int] = {}
    rows: List[int] = []
    while len(rows) < dim:
        candidate = int(rng.integers(1, 1 << dim))
        reduced = candidate
        while reduced:
            top = reduced.bit_length() - 1
            if top not in echelon:
                break
            reduced ^= echelon[top]
        if not reduced:
            continue
        echelon[reduced.bit_length() - 1] = reduced
        rows.append(candidate)
    return _bit_rows(rows, dim)


@dataclass(frozen=True)
class TBTInstance:
    """OPI instance whose target sets are independent random affine images of S_k."""

    instance: OPIInstance
    k: int
    seed: int
    targets: Tuple[TargetSet, ...]

    def as_dict(self) -> Dict[str, object]:
        return {
            **self.instance.as_dict(),
            "k": self.k,
            "seed": self.seed,
            "targets": [t.as_dict() for t in self.targets],
        }


def _random_target(k: int, rng: np.random.Generator) -> TargetSet:
    dim = 2 * k
    transform = gl_random(dim, rng)
    return TargetSet(k, transform, offset=int(rng.integers(0, 1 << dim)))


def tbt_opi_generate(k: int, m: int, n: int, seed: int) -> TBTInstance:
    """One invertible transform and offset per evaluation point, drawn from ``numpy.random.default_rng(seed)``."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    dim = 2 * k
    if m != (1 << dim) - 1:
        raise DomainError(f"TBT-OPI with k={k} needs m = 2^{dim} - 1 = {(1 << dim) - 1}, got {m}")
    instance = OPIInstance(m=m, n=n, b=dim, r=s_k_size(k))
    rng = np.random.default_rng(seed)
    targets = tuple(_random_target(k, rng) for _ in range(m))
    logging.info("Generated TBT-OPI instance k=%s m=%s n=%s seed=%s", k, m, n, seed)
    return TBTInstance(instance=instance, k=k, seed=seed, targets=targets)


@dataclass(frozen=True)
class BoundRow:
    d: int
    achieved: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.achieved <= self.bound


def verify_bounds(k: int, max_dim: int = EXHAUSTIVE_MAX_DIM, dims: Optional[Sequence[int]] = None, progress: bool = False) -> List[BoundRow]:
    """Exhaustive max |A intersect S_k| next to the closed-form bound, per dimension."""
    bounds = mm_bound_table(k)
    dims = range(2 * k + 1) if dims is None else dims
    rows = []
    for d in dims:
        achieved = max_affine_intersection(k, d, max_dim, progress)
        rows.append(BoundRow(d, achieved, bounds[d]))
        if achieved > bounds[d]:
            logging.warning("k=%s d=%s: exhaustive maximum %s exceeds the bound %s", k, d, achieved, bounds[d])
    return rows
