import random

import pytest

from dqi_workbench.errors import DomainError
from dqi_workbench.gf import load_field
from dqi_workbench.ledger import CostLedger
from dqi_workbench.poly import Poly, poly_eval
from dqi_workbench.rs_decode import (
    EXPLICIT,
    IMPLICIT,
    RSCode,
    chien_search,
    forney,
    key_equation_holds,
    random_error_pattern,
    rs_decode,
    solve_key_equation,
    syndrome_compute,
)


def test_empty_pattern_has_zero_syndrome():
    code = RSCode.for_field(load_field(4), 4)
    syndrome = syndrome_compute({}, code)
    assert syndrome.is_zero()
    for mode in (EXPLICIT, IMPLICIT):
        assert rs_decode(syndrome, code, mode).pattern == {}


def test_single_error_syndrome_closed_form():
    fld = load_field(5)
    code = RSCode.for_field(fld, 6)
    syndrome = syndrome_compute({4: 9}, code)
    gamma = code.eval_point(4)
    for k in range(6):
        assert syndrome.coeff(k) == fld.mul(9, fld.pow(gamma, k))


def test_single_error_locator_root():
    fld = load_field(5)
    code = RSCode.for_field(fld, 4)
    syndrome = syndrome_compute({7: 3}, code)
    locator, omega = solve_key_equation(syndrome, code.ell, EXPLICIT)
    sigma = locator.to_poly()
    assert sigma.degree == 1
    assert poly_eval(sigma, fld.inv(code.eval_point(7))) == 0
    assert chien_search(locator, code) == {7}
    assert forney(omega, locator, 7, code) == 3


def test_exhaustive_weight_one_on_gf8():
    code = RSCode.for_field(load_field(3), 2)
    assert code.m == 7 and code.ell == 1
    patterns = [{}] + [{j: v} for j in range(1, 8) for v in range(1, 8)]
    for pattern in patterns:
        syndrome = syndrome_compute(pattern, code)
        for mode in (EXPLICIT, IMPLICIT):
            result = rs_decode(syndrome, code, mode)
            assert result.pattern == pattern
            assert result.verified


def test_weight_two_on_gf16():
    rng = random.Random(15)
    code = RSCode.for_field(load_field(4), 4)
    for _ in range(50):
        pattern = random_error_pattern(code, 2, rng)
        syndrome = syndrome_compute(pattern, code)
        assert rs_decode(syndrome, code, EXPLICIT).pattern == pattern
        assert rs_decode(syndrome, code, IMPLICIT).pattern == pattern


@pytest.mark.parametrize("b,n,trials", [(6, 8, 40), (6, 16, 40), (8, 32, 5), (10, 60, 3)])
def test_plant_and_recover_both_modes_agree(b, n, trials):
    rng = random.Random(b * 100 + n)
    code = RSCode.for_field(load_field(b), n)
    for _ in range(trials):
        weight = rng.randrange(code.ell + 1)
        pattern = random_error_pattern(code, weight, rng)
        syndrome = syndrome_compute(pattern, code)
        explicit = rs_decode(syndrome, code, EXPLICIT)
        implicit = rs_decode(syndrome, code, IMPLICIT)
        assert explicit.pattern == pattern
        assert implicit.pattern == explicit.pattern
        assert key_equation_holds(explicit.sigma, explicit.omega, syndrome, code.ell)


def test_ledger_leading_orders():
    fld = load_field(8)
    code = RSCode.for_field(fld, 32)
    m, n = code.m, code.n
    rng = random.Random(255)
    pattern = random_error_pattern(code, code.ell, rng)
    syndrome = syndrome_compute(pattern, code)
    explicit, implicit = CostLedger(), CostLedger()
    assert rs_decode(syndrome, code, EXPLICIT, explicit).pattern == pattern
    assert rs_decode(syndrome, code, IMPLICIT, implicit).pattern == pattern
    assert 3 * n * n <= explicit.qq_mult <= 3 * n * n + 20 * n
    assert abs(implicit.qq_mult - (2 * m * n + n * n)) <= 20 * (m + n)
    assert abs(explicit.qc_mult - m * n) <= 0.1 * m * n
    assert abs(implicit.qc_mult - m * n / 2) <= 0.05 * m * n
    assert explicit.qc_mult > implicit.qc_mult
    assert set(explicit.stages) == {"key_equation", "chien_forney"}


def test_ledger_leading_orders_at_first_table_row():
    code = RSCode.for_field(load_field(10), 60)
    m, n = code.m, code.n
    assert (m, code.ell) == (1023, 30)
    rng = random.Random(1023)
    pattern = random_error_pattern(code, code.ell, rng)
    syndrome = syndrome_compute(pattern, code)
    explicit, implicit = CostLedger(), CostLedger()
    assert rs_decode(syndrome, code, EXPLICIT, explicit).pattern == pattern
    assert rs_decode(syndrome, code, IMPLICIT, implicit).pattern == pattern
    assert 3 * n * n <= explicit.qq_mult <= 3 * n * n + 30 * n
    assert abs(implicit.qq_mult - (2 * m * n + n * n)) <= 20 * (m + n)
    assert abs(explicit.qc_mult - m * n) <= 0.05 * m * n
    assert abs(implicit.qc_mult - m * n / 2) <= 0.02 * m * n


def test_code_parameter_checks():
    fld = load_field(4)
    with pytest.raises(DomainError):
        RSCode(fld, 16, 4)
    with pytest.raises(DomainError):
        RSCode(fld, 15, 1)
    with pytest.raises(DomainError):
        RSCode.for_field(fld, 4).eval_point(0)


def test_unknown_mode_rejected():
    fld = load_field(4)
    syndrome = Poly(fld, (1, 2, 3, 4))
    with pytest.raises(DomainError):
        solve_key_equation(syndrome, 2, "sideways")
