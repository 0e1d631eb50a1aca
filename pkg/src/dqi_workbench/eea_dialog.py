"""Division-free constant-time EEA that records its own transformations.

The build runs divsteps on a single shared buffer of 2n + 1 cells. The
reversed inputs sit at opposite ends of the poly region,

    [f_0, f_1, ..., f_{len_f-1}, g_{len_g-1}, ..., g_1, g_0]

and every step frees the rightmost cell (g_0 cancels) and reuses it to store
the step's coefficient. The recorded steps, the Dialog, replay the whole
transformation on any pair of polynomials: forward for division, backwards
for multiplication, and pointwise (with derivatives) for the decoder.

In forward (unreversed) terms a step acting on the pair (x, y) reads

    no swap:  y <- y + c z^k x
    swap:     (x, y) <- (y, x + c z^k y)

with k = -delta before a plain step and k = delta before a swap.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError, InvariantViolation
from .gf import Felt, FieldSpec
from .ledger import CostLedger
from .poly import Poly, poly_add, poly_mod

ROW_A = 0
ROW_B = 1


@dataclass(frozen=True)
class DialogStep:
    swapped: bool
    coeff: Felt
    delta: int
    shift: int
    idle: bool = False

    def as_dict(self) -> dict:
        return {"swap": self.swapped, "coeff": format(self.coeff, "x"), "delta": self.delta, "shift": self.shift}


@dataclass(frozen=True)
class BufferState:
    """Snapshot of the poly region after a step, in forward orientation."""

    a: Poly
    b: Poly
    delta: int
    dialog_cells: int


@dataclass(frozen=True)
class Dialog:
    """Recorded transformation of one build plus the surviving remainders."""

    n: int
    steps: Tuple[DialogStep, ...]
    mode: str
    final_delta: int
    kappa: Felt
    remainder_a: Poly
    remainder_b: Poly
    idle_steps: int
    history: Tuple[BufferState, ...] = ()

    @property
    def field(self) -> FieldSpec:
        return self.remainder_a.field

    @property
    def unit_gcd(self) -> bool:
        return self.mode == "full" and self.idle_steps == 0

    @property
    def row(self) -> int:
        """Row of the playback that carries the remainder of degree below the stop threshold."""
        if self.mode == "half" and self.final_delta > 0:
            return ROW_B
        return ROW_A

    @property
    def remainder(self) -> Poly:
        return self.remainder_b if self.row == ROW_B else self.remainder_a

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "final_delta": self.final_delta,
            "kappa": format(self.kappa, "x"),
            "idle_steps": self.idle_steps,
            "steps": [s.as_dict() for s in self.steps],
        }


def dialog_build(
    a: Poly,
    b: Poly,
    ledger: Optional[CostLedger] = None,
    ell: Optional[int] = None,
    keep_history: bool = False,
) -> Dialog:
    """Record the divstep transformation of (A, B), deg A = n > deg B.

    The full build takes 2n steps. With ``ell`` set the build halts after
    2(n - ell) steps, at which point one of the two rows holds a remainder of
    degree below ell (the half-EEA the decoder needs).
    """
    fld = a.field
    n = a.degree
    if n < 1:
        raise DomainError("Dialog build needs deg A >= 1")
    if b.degree >= n:
        raise DomainError(f"Dialog build needs deg B < deg A (got {b.degree} and {n})")
    if ell is not None and not 0 <= ell <= n:
        raise DomainError(f"stop threshold {ell} outside 0..{n}")
    total_steps = 2 * n if ell is None else 2 * (n - ell)

    size = 2 * n + 1
    cells: List[Felt] = [a.coeff(n - i) for i in range(n + 1)]
    cells += [b.coeff(j) for j in range(n)]  # g_{n-1} ... g_0 == B_0 ... B_{n-1}
    len_f, len_g = n + 1, n
    delta = 1
    idle = 0
    steps: List[DialogStep] = []
    history: List[BufferState] = []

    for _ in range(total_steps):
        len_poly = len_f + len_g
        if len_g == 0:
            idle += 1
            steps.append(DialogStep(False, 0, delta + 1, -delta, idle=True))
            delta += 1
        else:
            g0 = cells[len_poly - 1]
            swapped = delta > 0 and g0 != 0
            if swapped:
                cells[:len_poly] = cells[:len_poly][::-1]
                len_f, len_g = len_g, len_f
                shift = delta
                delta = -delta
                if ledger is not None:
                    ledger.charge_cswap(len_poly)
            else:
                shift = -delta
            g0 = cells[len_poly - 1]
            coeff = fld.mul(g0, fld.inv(cells[0], ledger), ledger)
            if coeff:
                for j in range(1, len_f):
                    cells[len_poly - 1 - j] ^= fld.mul(coeff, cells[j])
            if ledger is not None:
                ledger.charge_qq(len_f - 1)
            # g_0 has cancelled: its cell now belongs to the dialog.
            cells[len_poly - 1] = coeff
            len_g -= 1
            delta += 1
            steps.append(DialogStep(swapped, coeff, delta, shift))
        if len_f + len_g + len(steps) != size + idle:
            raise InvariantViolation(
                f"register sharing broken: {len_f + len_g} poly + {len(steps)} dialog cells != {size} + {idle}"
            )
        if len_f - len_g != delta and len_g > 0:
            raise InvariantViolation(f"region lengths {len_f}/{len_g} disagree with delta {delta}")
        if keep_history:
            history.append(_snapshot(fld, cells, len_f, len_g, delta, len(steps)))

    if idle:
        logging.warning("Dialog build ran %s idle steps: the inputs share a factor of degree %s", idle, idle)
    state = _snapshot(fld, cells, len_f, len_g, delta, len(steps))
    return Dialog(
        n=n,
        steps=tuple(steps),
        mode="full" if ell is None else "half",
        final_delta=delta,
        kappa=cells[0],
        remainder_a=state.a,
        remainder_b=state.b,
        idle_steps=idle,
        history=tuple(history),
    )


def _snapshot(fld: FieldSpec, cells: List[Felt], len_f: int, len_g: int, delta: int, dialog_cells: int) -> BufferState:
    f_region = cells[:len_f]
    g_region = cells[len_f : len_f + len_g]
    return BufferState(
        a=Poly(fld, tuple(reversed(f_region))),
        b=Poly(fld, tuple(g_region)),
        delta=delta,
        dialog_cells=dialog_cells,
    )


def _reduce(p: Poly, modulus: Optional[Poly]) -> Poly:
    return p if modulus is None else poly_mod(p, modulus)


def _shifted(p: Poly, coeff: Felt, k: int) -> Poly:
    return p.scale(coeff).shift(k)


def dialog_apply(
    dialog: Dialog,
    x: Poly,
    y: Poly,
    modulus: Optional[Poly] = None,
    steps: Optional[int] = None,
    ledger: Optional[CostLedger] = None,
) -> Tuple[Poly, Poly]:
    """Forward playback of the first ``steps`` recorded steps on (x, y)."""
    count = len(dialog.steps) if steps is None else steps
    width = dialog.n + 1
    for step in dialog.steps[:count]:
        if ledger is not None:
            ledger.charge_qq(width)
        if step.idle:
            continue
        if step.swapped:
            x, y = y, _reduce(poly_add(x, _shifted(y, step.coeff, step.shift)), modulus)
        elif step.coeff:
            y = _reduce(poly_add(y, _shifted(x, step.coeff, step.shift)), modulus)
    return x, y


def _require_unit(dialog: Dialog) -> None:
    if not dialog.unit_gcd:
        raise DomainError("modular division needs a full Dialog of coprime inputs")


def dialog_div(dialog: Dialog, c: Poly, modulus: Poly, ledger: Optional[CostLedger] = None) -> Poly:
    """C * B^-1 mod P for a Dialog built from (P, B)."""
    _require_unit(dialog)
    x, _ = dialog_apply(dialog, Poly.zero(c.field), poly_mod(c, modulus), modulus, ledger=ledger)
    return x.scale(c.field.inv(dialog.kappa, ledger), ledger)


def dialog_mul(dialog: Dialog, c: Poly, modulus: Poly, ledger: Optional[CostLedger] = None) -> Poly:
    """B * C mod P by running the recorded steps backwards from (C, 0)."""
    _require_unit(dialog)
    x, y = poly_mod(c, modulus), Poly.zero(c.field)
    width = dialog.n + 1
    for step in reversed(dialog.steps):
        if ledger is not None:
            ledger.charge_qq(width)
        if step.idle:
            continue
        if step.swapped:
            x, y = poly_mod(poly_add(y, _shifted(x, step.coeff, step.shift)), modulus), x
        elif step.coeff:
            y = poly_mod(poly_add(y, _shifted(x, step.coeff, step.shift)), modulus)
    return y.scale(dialog.kappa, ledger)


def _power(fld: FieldSpec, gamma: Felt, k: int) -> Felt:
    if k == 0:
        return 1
    return fld.pow(gamma, k)


def dialog_eval_rows(dialog: Dialog, gamma: Felt, ledger: Optional[CostLedger] = None) -> Tuple[Felt, Felt]:
    """Both rows of the B-cofactor at gamma: playback of (0, 1) pointwise."""
    field = dialog.field
    x, y = 0, 1
    for step in dialog.steps:
        if ledger is not None:
            ledger.charge_qq()
        if step.idle or step.coeff == 0:
            if step.swapped:
                x, y = y, x
            continue
        t = field.mul(step.coeff, _power(field, gamma, step.shift))
        if ledger is not None:
            ledger.charge_scale()
        if step.swapped:
            x, y = y, x ^ field.mul(t, y)
        else:
            y ^= field.mul(t, x)
    return x, y


def dialog_eval(dialog: Dialog, gamma: Felt, ledger: Optional[CostLedger] = None) -> Felt:
    """v(gamma) for the cofactor of B on the Dialog's selected row."""
    return dialog_eval_rows(dialog, gamma, ledger)[dialog.row]


def dialog_eval_with_derivative(
    dialog: Dialog, gamma: Felt, ledger: Optional[CostLedger] = None
) -> Tuple[Felt, Felt]:
    """(v(gamma), v'(gamma)) by carrying the product rule through every step."""
    field = dialog.field
    x, y, dx, dy = 0, 1, 0, 0
    for step in dialog.steps:
        if ledger is not None:
            ledger.charge_qq(2)
        if step.idle or step.coeff == 0:
            if step.swapped:
                x, y, dx, dy = y, x, dy, dx
            continue
        k = step.shift
        t = field.mul(step.coeff, _power(field, gamma, k))
        if ledger is not None:
            ledger.charge_scale()
        odd = k % 2 == 1
        if odd:
            # (c z^k)' = c z^(k-1) when k is odd.
            u = field.mul(step.coeff, _power(field, gamma, k - 1))
            if ledger is not None:
                ledger.charge_scale()
        if step.swapped:
            new_y = x ^ field.mul(t, y)
            new_dy = dx ^ (field.mul(u, field.mul(gamma, dy) ^ y) if odd else field.mul(t, dy))
            x, y, dx, dy = y, new_y, dy, new_dy
        else:
            dy ^= field.mul(u, field.mul(gamma, dx) ^ x) if odd else field.mul(t, dx)
            y ^= field.mul(t, x)
    if dialog.row == ROW_B:
        return y, dy
    return x, dx


def cofactor_rows(dialog: Dialog) -> Sequence[Tuple[Poly, Poly]]:
    """Explicit (u, v) of both rows, from playback of (1, 0) and (0, 1)."""
    field = dialog.field
    zero, one = Poly.zero(field), Poly.one(field)
    ua, ub = dialog_apply(dialog, one, zero)
    va, vb = dialog_apply(dialog, zero, one)
    return [(ua, va), (ub, vb)]
