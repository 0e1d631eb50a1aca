import random

import pytest

from dqi_workbench.errors import DomainError
from dqi_workbench.gf import load_field
from dqi_workbench.ledger import CostLedger
from dqi_workbench.poly import (
    Poly,
    classical_eea,
    modular_inverse,
    poly_add,
    poly_derivative,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mod,
    poly_mul,
    random_poly,
)

FIELD = load_field(8)


def test_zero_polynomial_has_degree_minus_one():
    assert Poly.zero(FIELD).degree == -1
    assert Poly(FIELD, (3, 0, 0)).degree == 0


def test_hex_serialization():
    p = Poly(FIELD, (1, 0, 0xAB))
    assert p.to_hex() == "1,0,ab"
    assert Poly.from_hex(FIELD, "1,0,ab") == p
    assert Poly.from_hex(FIELD, "") == Poly.zero(FIELD)


def test_divmod_identity():
    rng = random.Random(11)
    for _ in range(30):
        a = random_poly(FIELD, rng.randrange(0, 15), rng)
        b = random_poly(FIELD, rng.randrange(0, 8), rng)
        q, r = poly_divmod(a, b)
        assert poly_add(poly_mul(q, b), r) == a
        assert r.degree < b.degree


def test_division_by_zero_polynomial():
    with pytest.raises(DomainError):
        poly_divmod(Poly.one(FIELD), Poly.zero(FIELD))


def test_eval_is_a_ring_homomorphism():
    rng = random.Random(5)
    p, q = random_poly(FIELD, 6, rng), random_poly(FIELD, 4, rng)
    for gamma in (0, 1, 2, 77, 255):
        assert poly_eval(poly_mul(p, q), gamma) == FIELD.mul(poly_eval(p, gamma), poly_eval(q, gamma))
        assert poly_eval(poly_add(p, q), gamma) == poly_eval(p, gamma) ^ poly_eval(q, gamma)


def test_eval_and_mul_charges():
    ledger = CostLedger()
    p = Poly(FIELD, (1, 2, 3, 4))
    poly_eval(p, 9, ledger)
    assert ledger.qc_mult == 3
    poly_mul(p, Poly(FIELD, (5, 6)), ledger)
    assert ledger.qq_mult == 8


def test_derivative_keeps_odd_terms():
    p = Poly(FIELD, (7, 3, 5, 9, 11))
    assert poly_derivative(p) == Poly(FIELD, (3, 0, 9))


def test_classical_eea_bezout_rows():
    rng = random.Random(2)
    a, b = random_poly(FIELD, 9, rng, monic=True), random_poly(FIELD, 7, rng)
    for row in classical_eea(a, b):
        assert poly_add(poly_mul(a, row.u), poly_mul(b, row.v)) == row.r


def test_gcd_of_multiples():
    rng = random.Random(9)
    common = random_poly(FIELD, 3, rng, monic=True)
    a = poly_mul(common, random_poly(FIELD, 4, rng))
    b = poly_mul(common, random_poly(FIELD, 2, rng))
    g = poly_gcd(a, b)
    assert poly_mod(g, common).is_zero() or g.degree >= common.degree
    assert poly_mod(a, g).is_zero() and poly_mod(b, g).is_zero()


def test_modular_inverse():
    rng = random.Random(4)
    p = random_poly(FIELD, 6, rng, monic=True)
    while True:
        b = random_poly(FIELD, 4, rng)
        if poly_gcd(p, b).degree == 0:
            break
    inv = modular_inverse(b, p)
    assert poly_mod(poly_mul(inv, b), p) == Poly.one(FIELD)
