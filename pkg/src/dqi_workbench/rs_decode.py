"""Reed-Solomon syndrome decoding on top of either EEA architecture.

Stage one solves the key equation sigma * S = Omega mod z^(2*ell) with the
half EEA: the synchronized machine hands back sigma as coefficients
(explicit), the Dialog machine hands back a recorded transformation that
can only be evaluated pointwise (implicit). Stage two is a single fused
pass over all m evaluation points: Chien search for the roots of sigma and
Forney's formula for the error values.
"""
from __future__ import annotations

import logging
import random
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Protocol, Set, Tuple

from tqdm import tqdm

from .eea_dialog import Dialog, cofactor_rows, dialog_build, dialog_eval_with_derivative
from .eea_sync import HALF, sync_eea_run
from .errors import DecodeFailure, DomainError
from .gf import Felt, FieldSpec
from .ledger import CostLedger
from .poly import Poly, poly_mul

ErrorPattern = Dict[int, Felt]

EXPLICIT = "explicit"
IMPLICIT = "implicit"
MODES = (EXPLICIT, IMPLICIT)


@dataclass(frozen=True)
class RSCode:
    """Code of block length m with a syndrome of length n over ``field``.

    Location j (1-indexed) has evaluation point gamma_j = g^(j-1) for the
    field's generator g.
    """

    field: FieldSpec
    m: int
    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.field.order - 1:
            raise DomainError(f"block length {self.m} outside 1..{self.field.order - 1}")
        if not 2 <= self.n <= self.m:
            raise DomainError(f"syndrome length {self.n} outside 2..{self.m}")

    @classmethod
    def for_field(cls, fld: FieldSpec, n: int) -> "RSCode":
        """Full-length code, m = 2^b - 1."""
        return cls(fld, fld.order - 1, n)

    @property
    def ell(self) -> int:
        return self.n // 2

    def eval_point(self, j: int) -> Felt:
        if not 1 <= j <= self.m:
            raise DomainError(f"location {j} outside 1..{self.m}")
        return self.field.power_of_generator(j - 1)

    @property
    def eval_points(self) -> Tuple[Felt, ...]:
        return tuple(self.eval_point(j) for j in range(1, self.m + 1))


def syndrome_compute(pattern: ErrorPattern, code: RSCode) -> Poly:
    """s_k = sum_j e_j gamma_j^k for k = 0..n-1."""
    fld = code.field
    s = [0] * code.n
    for j, value in pattern.items():
        gamma = code.eval_point(j)
        power = 1
        for k in range(code.n):
            s[k] ^= fld.mul(value, power)
            power = fld.mul(power, gamma)
    return Poly(fld, tuple(s))


def random_error_pattern(code: RSCode, weight: int, rng: random.Random) -> ErrorPattern:
    if not 0 <= weight <= code.m:
        raise DomainError(f"error weight {weight} outside 0..{code.m}")
    locations = rng.sample(range(1, code.m + 1), weight)
    return {j: rng.randrange(1, code.field.order) for j in sorted(locations)}


class Locator(Protocol):
    def evaluate_for_forney(self, x: Felt, ledger: Optional[CostLedger] = None) -> Tuple[Felt, Felt]:
        """(sigma(x), x * sigma'(x))."""

    def to_poly(self) -> Poly:
        ...


@dataclass(frozen=True)
class ExplicitLocator:
    """sigma as coefficients, evaluated by even/odd Horner in w = x^2."""

    sigma: Poly
    ell: int

    def evaluate_for_forney(self, x: Felt, ledger: Optional[CostLedger] = None) -> Tuple[Felt, Felt]:
        fld = self.sigma.field
        w = fld.mul(x, x)
        even = self.sigma.coeffs[0::2]
        odd = self.sigma.coeffs[1::2]
        e_val = 0
        for c in reversed(even):
            e_val = fld.mul(e_val, w) ^ c
        o_val = 0
        for c in reversed(odd):
            o_val = fld.mul(o_val, w) ^ c
        x_odd = fld.mul(x, o_val)
        if ledger is not None:
            # Register holds ell + 1 cells: ell - 1 Horner steps plus the x * odd product.
            ledger.charge_qc(max(self.ell, 1))
        # In characteristic 2, sigma'(x) = odd(x^2).
        return e_val ^ x_odd, x_odd

    def to_poly(self) -> Poly:
        return self.sigma


@dataclass(frozen=True)
class DialogLocator:
    """sigma only through playback of the half-EEA Dialog."""

    dialog: Dialog

    def evaluate_for_forney(self, x: Felt, ledger: Optional[CostLedger] = None) -> Tuple[Felt, Felt]:
        fld = self.dialog.field
        value, derivative = dialog_eval_with_derivative(self.dialog, x, ledger)
        if ledger is not None:
            ledger.charge_qc()
        return value, fld.mul(x, derivative)

    def to_poly(self) -> Poly:
        return cofactor_rows(self.dialog)[self.dialog.row][1]


@dataclass(frozen=True)
class UnitLocator:
    """sigma = 1: nothing to locate."""

    fld: FieldSpec

    def evaluate_for_forney(self, x: Felt, ledger: Optional[CostLedger] = None) -> Tuple[Felt, Felt]:
        return 1, 0

    def to_poly(self) -> Poly:
        return Poly.one(self.fld)


def solve_key_equation(
    syndrome: Poly,
    ell: int,
    mode: str = EXPLICIT,
    ledger: Optional[CostLedger] = None,
) -> Tuple[Locator, Poly]:
    """Half EEA on (z^(2 ell), S); returns a locator handle and Omega."""
    if mode not in MODES:
        raise DomainError(f"unknown decoder mode {mode!r}")
    fld = syndrome.field
    if ell < 1:
        raise DomainError(f"correction radius must be >= 1, got {ell}")
    s = syndrome.truncate(2 * ell)
    if s.is_zero():
        return UnitLocator(fld), Poly.zero(fld)
    a = Poly.monomial(fld, 2 * ell)
    if mode == EXPLICIT:
        result = sync_eea_run(a, s, HALF, ell=ell, ledger=ledger)
        sigma, omega = result.v, result.remainder
        c0 = sigma.coeff(0)
        if c0:
            scale = fld.inv(c0)
            sigma, omega = sigma.scale(scale), omega.scale(scale)
        else:
            logging.warning("Locator has a zero constant term; leaving it unnormalized")
        return ExplicitLocator(sigma, ell), omega
    dialog = dialog_build(a, s, ledger=ledger, ell=ell)
    return DialogLocator(dialog), dialog.remainder


def _eval_omega(omega: Poly, x: Felt, ell: int, ledger: Optional[CostLedger]) -> Felt:
    fld = omega.field
    acc = 0
    for c in reversed(omega.coeffs):
        acc = fld.mul(acc, x) ^ c
    if ledger is not None and ell > 1:
        ledger.charge_qc(ell - 1)
    return acc


def chien_search(locator: Locator, code: RSCode, ledger: Optional[CostLedger] = None) -> Set[int]:
    """Locations j with sigma(gamma_j^-1) = 0."""
    fld = code.field
    found: Set[int] = set()
    for j in range(1, code.m + 1):
        x = fld.inv(code.eval_point(j))
        value, _ = locator.evaluate_for_forney(x, ledger)
        if value == 0:
            found.add(j)
    return found


def forney(
    omega: Poly,
    locator: Locator,
    j: int,
    code: RSCode,
    ledger: Optional[CostLedger] = None,
) -> Felt:
    """e_j = Omega(x) / (x sigma'(x)) at x = gamma_j^-1 (the sign is immaterial in characteristic 2)."""
    fld = code.field
    x = fld.inv(code.eval_point(j))
    _, x_derivative = locator.evaluate_for_forney(x, ledger)
    if x_derivative == 0:
        raise DecodeFailure(f"locator derivative vanishes at location {j}: repeated root")
    numerator = _eval_omega(omega, x, code.ell, ledger)
    return fld.mul(numerator, fld.inv(x_derivative, ledger), ledger)


@dataclass
class DecodeResult:
    pattern: ErrorPattern
    verified: bool
    sigma: Poly
    omega: Poly
    mode: str
    ledger: Optional[CostLedger] = field(default=None, repr=False)


def _chien_forney(
    locator: Locator,
    omega: Poly,
    code: RSCode,
    ledger: Optional[CostLedger],
    progress: bool,
) -> ErrorPattern:
    """One constant-time pass over every evaluation point."""
    fld = code.field
    pattern: ErrorPattern = {}
    points: Iterable[int] = range(1, code.m + 1)
    if progress:
        points = tqdm(points, desc="Chien/Forney", total=code.m)
    for j in points:
        x = fld.inv(code.eval_point(j))
        value, x_derivative = locator.evaluate_for_forney(x, ledger)
        numerator = _eval_omega(omega, x, code.ell, ledger)
        if value != 0:
            if ledger is not None:
                ledger.charge_inverse(fld.cost_inv_mults)
                ledger.charge_qq()
            continue
        if x_derivative == 0:
            raise DecodeFailure(f"locator derivative vanishes at location {j}: repeated root")
        e = fld.mul(numerator, fld.inv(x_derivative, ledger), ledger)
        if e:
            pattern[j] = e
    return pattern


def rs_decode(
    syndrome: Poly,
    code: RSCode,
    mode: str = EXPLICIT,
    ledger: Optional[CostLedger] = None,
    progress: bool = False,
) -> DecodeResult:
    """Recover the error pattern behind ``syndrome``; ``verified`` re-checks the syndrome."""
    with _stage(ledger, "key_equation"):
        locator, omega = solve_key_equation(syndrome, code.ell, mode, ledger)
    with _stage(ledger, "chien_forney"):
        pattern = _chien_forney(locator, omega, code, ledger, progress)
    verified = syndrome_compute(pattern, code) == syndrome.truncate(code.n)
    if not verified:
        logging.warning("Decoded pattern of weight %s does not reproduce the syndrome", len(pattern))
    return DecodeResult(pattern, verified, locator.to_poly(), omega, mode, ledger)


def _stage(ledger: Optional[CostLedger], name: str):
    return ledger.stage(name) if ledger is not None else nullcontext()


def key_equation_holds(sigma: Poly, omega: Poly, syndrome: Poly, ell: int) -> bool:
    """sigma * S = Omega mod z^(2 ell)."""
    return poly_mul(sigma, syndrome).truncate(2 * ell) == omega.truncate(2 * ell)
