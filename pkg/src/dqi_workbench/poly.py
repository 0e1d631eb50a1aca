"""Dense polynomials over GF(2^b) and the textbook extended Euclidean algorithm.

``classical_eea`` is the trusted oracle both circuit-style EEA machines are
checked against.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .errors import DomainError
from .gf import Felt, FieldSpec
from .ledger import CostLedger


def _trim(coeffs: Iterable[Felt]) -> Tuple[Felt, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    """Polynomial with ``coeffs[i]`` the coefficient of z^i; zero has degree -1."""

    field: FieldSpec
    coeffs: Tuple[Felt, ...] = ()

    def __post_init__(self) -> None:
        trimmed = _trim(self.coeffs)
        for c in trimmed:
            self.field.check(c)
        object.__setattr__(self, "coeffs", trimmed)

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FieldSpec, c: Felt) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, c: Felt = 1) -> "Poly":
        return cls(field, (0,) * degree + (c,))

    @classmethod
    def from_hex(cls, field: FieldSpec, text: str) -> "Poly":
        text = text.strip()
        if not text:
            return cls.zero(field)
        return cls(field, tuple(int(part, 16) for part in text.split(",")))

    def to_hex(self) -> str:
        return ",".join(format(c, "x") for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Felt:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> Felt:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c: Felt, ledger: Optional[CostLedger] = None) -> "Poly":
        if ledger is not None:
            ledger.charge_qq(len(self.coeffs))
        return Poly(self.field, tuple(self.field.mul(a, c) for a in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by z^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def truncate(self, length: int) -> "Poly":
        """Reduce modulo z^length."""
        return Poly(self.field, self.coeffs[:length])

    def __add__(self, other: "Poly") -> "Poly":
        return poly_add(self, other)

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_mul(self, other)

    def __repr__(self) -> str:
        return f"Poly(b={self.field.b}, [{self.to_hex()}])"


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p.coeffs), len(q.coeffs))
    return Poly(p.field, tuple(p.coeff(i) ^ q.coeff(i) for i in range(n)))


def poly_mul(p: Poly, q: Poly, ledger: Optional[CostLedger] = None) -> Poly:
    """Schoolbook convolution; charges len(p)*len(q) quantum-quantum products."""
    if p.is_zero() or q.is_zero():
        return Poly.zero(p.field)
    field = p.field
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, c in enumerate(q.coeffs):
            out[i + j] ^= field.mul(a, c)
    if ledger is not None:
        ledger.charge_qq(len(p.coeffs) * len(q.coeffs))
    return Poly(field, tuple(out))


def poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    if b.is_zero():
        raise DomainError("division by the zero polynomial")
    field = a.field
    if a.degree < b.degree:
        return Poly.zero(field), a
    inv_lead = field.inv(b.lead)
    rem = list(a.coeffs)
    quot = [0] * (a.degree - b.degree + 1)
    for shift in range(a.degree - b.degree, -1, -1):
        top = rem[shift + b.degree]
        if top == 0:
            continue
        factor = field.mul(top, inv_lead)
        quot[shift] = factor
        for j, c in enumerate(b.coeffs):
            rem[shift + j] ^= field.mul(factor, c)
    return Poly(field, tuple(quot)), Poly(field, tuple(rem[: b.degree]))


def poly_mod(a: Poly, b: Poly) -> Poly:
    return poly_divmod(a, b)[1]


def poly_eval(p: Poly, gamma: Felt, ledger: Optional[CostLedger] = None) -> Felt:
    """Horner's rule at a classical point: deg(p) quantum-classical products."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = p.field.mul(acc, gamma) ^ c
    if ledger is not None and p.degree > 0:
        ledger.charge_qc(p.degree)
    return acc


def poly_derivative(p: Poly) -> Poly:
    """Formal derivative in characteristic 2: only odd-degree terms survive."""
    out = [p.coeffs[i + 1] if i % 2 == 0 else 0 for i in range(max(len(p.coeffs) - 1, 0))]
    return Poly(p.field, tuple(out))


def random_poly(field: FieldSpec, degree: int, rng: random.Random, monic: bool = False) -> Poly:
    """Uniform polynomial of exactly ``degree`` (nonzero leading coefficient)."""
    if degree < 0:
        return Poly.zero(field)
    coeffs = [rng.randrange(field.order) for _ in range(degree)]
    lead = 1 if monic else rng.randrange(1, field.order)
    return Poly(field, tuple(coeffs) + (lead,))


@dataclass(frozen=True)
class EEATriple:
    """One row of the EEA table: A*u + B*v = r."""

    r: Poly
    u: Poly
    v: Poly


def classical_eea(a: Poly, b: Poly) -> List[EEATriple]:
    """Full remainder/cofactor table from (A, 1, 0), (B, 0, 1) down to the gcd row.

    Rows are not normalized; the last row's remainder is the gcd up to a unit.
    """
    field = a.field
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd of two zero polynomials is undefined")
    one, zero = Poly.one(field), Poly.zero(field)
    rows = [EEATriple(a, one, zero)]
    if b.is_zero():
        return rows
    rows.append(EEATriple(b, zero, one))
    while True:
        prev, cur = rows[-2], rows[-1]
        q, r = poly_divmod(prev.r, cur.r)
        if r.is_zero():
            return rows
        rows.append(
            EEATriple(
                r,
                poly_add(prev.u, poly_mul(q, cur.u)),
                poly_add(prev.v, poly_mul(q, cur.v)),
            )
        )


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd."""
    return classical_eea(a, b)[-1].r.monic()


def modular_inverse(b: Poly, modulus: Poly) -> Poly:
    """B^-1 mod P by the textbook EEA; raises when gcd(B, P) is not a unit."""
    rows = classical_eea(modulus, poly_mod(b, modulus))
    last = rows[-1]
    if last.r.degree != 0:
        raise DomainError("polynomial is not invertible modulo the given modulus")
    return poly_mod(last.v.scale(b.field.inv(last.r.lead)), modulus)
