import random

import galois
import numpy as np
import pytest

from dqi_workbench.errors import DomainError
from dqi_workbench.gf import (
    FieldSpec,
    PctofGate,
    apply_pctof,
    default_irreducible,
    felt_inv,
    felt_mul,
    felt_mul_const,
    felt_pow,
    is_irreducible,
    itoh_tsujii_chain,
    itoh_tsujii_mult_count,
    load_field,
    pctof_minimize,
    reference_mul,
    square,
)
from dqi_workbench.ledger import CostLedger


def test_default_irreducible_is_smallest():
    assert default_irreducible(3) == 0b1011
    assert default_irreducible(8) == 0x11B
    assert is_irreducible(0x11B)
    assert not is_irreducible(0b1001)


def test_products_match_galois_oracle():
    rng = random.Random(7)
    for b in (3, 6, 8, 10):
        fld = load_field(b)
        GF = fld.galois_field()
        for _ in range(100):
            x, y = rng.randrange(fld.order), rng.randrange(fld.order)
            assert felt_mul(fld, x, y) == int(GF(x) * GF(y))
            assert felt_mul(fld, x, y) == reference_mul(fld, x, y)


def test_inverse_matches_oracle_and_round_trips():
    for b in (2, 3, 5, 8):
        fld = load_field(b)
        GF = fld.galois_field()
        for a in range(1, fld.order):
            inv = felt_inv(fld, a)
            assert fld.mul(a, inv) == 1
            assert inv == int(GF(a) ** -1)


def test_inverse_of_zero_raises():
    with pytest.raises(DomainError):
        felt_inv(load_field(4), 0)


def test_itoh_tsujii_counts():
    assert itoh_tsujii_mult_count(10) == 4
    assert len(itoh_tsujii_chain(10)) == 4
    assert itoh_tsujii_mult_count(12) == 5
    assert itoh_tsujii_mult_count(2) == 0
    for b in range(2, 17):
        assert len(itoh_tsujii_chain(b)) == itoh_tsujii_mult_count(b)


def test_inverse_charges_chain_multiplications():
    fld = load_field(10)
    ledger = CostLedger()
    fld.inv(5, ledger)
    assert ledger.gf_inverse == 1
    assert ledger.inv_qq_mult == 4
    assert ledger.qq_mult == 0


def test_square_is_linear_and_charged_as_classical():
    fld = load_field(6)
    ledger = CostLedger()
    for a in range(fld.order):
        for b in (1, 7, 33):
            assert square(fld, a ^ b) == square(fld, a) ^ square(fld, b)
    square(fld, 9, ledger)
    assert ledger.qc_mult == 1 and ledger.qq_mult == 0


def test_pow_agrees_with_repeated_multiplication():
    fld = load_field(5)
    a = 19
    acc = 1
    for e in range(40):
        assert felt_pow(fld, a, e) == acc
        acc = fld.mul(acc, a)
    assert felt_pow(fld, a, -1) == fld.inv(a)


def test_generator_has_full_order():
    fld = load_field(8)
    powers = {fld.power_of_generator(i) for i in range(fld.order - 1)}
    assert len(powers) == fld.order - 1
    assert 0 not in powers


def test_cost_table_and_overrides():
    fld = load_field(10)
    assert fld.cost_qq_toffoli == 39
    assert fld.cost_qq_cnot == 738
    assert load_field(12).cost_qq_toffoli == 51
    custom = load_field(10, overrides={"costs": {"toffoli": 1, "cnot": 2, "pctof": 3}})
    assert custom.cost_qq_pctof == 3
    assert load_field(5).costs is None


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        FieldSpec(b=3, irreducible=0b1001)


def test_pctof_minimize_preserves_function():
    rng = random.Random(3)
    b = 3
    gates = [PctofGate(rng.randrange(1, 8), rng.randrange(1, 8), rng.randrange(8)) for _ in range(14)]
    gates.append(gates[0])
    reduced = pctof_minimize(gates, b)
    assert len(reduced) <= b * b
    assert len(reduced) < len(gates)
    for x in range(8):
        for y in range(8):
            assert apply_pctof(reduced, x, y) == apply_pctof(gates, x, y)


def test_pctof_duplicate_gates_merge_targets():
    gate = PctofGate(0b011, 0b101, 0b001)
    twin = PctofGate(0b011, 0b101, 0b100)
    reduced = pctof_minimize([gate, twin], 3)
    assert len(reduced) == 1
    assert reduced[0].target == 0b101


def test_small_field_examples():
    fld = load_field(3)
    assert fld.irreducible == 0b1011
    assert felt_mul(fld, 0b110, 0b101) == 0b011
    assert felt_inv(fld, 0b010) == 0b101


def _mul_table(fld):
    return np.array([[fld.mul(a, c) for c in range(fld.order)] for a in range(fld.order)], dtype=np.int64)


@pytest.mark.parametrize("b", range(2, 9))
def test_field_axioms_exhaustive(b):
    fld = load_field(b)
    q = fld.order
    table = _mul_table(fld)
    elements = np.arange(q)
    GF = fld.galois_field()
    assert np.array_equal(table, np.asarray(GF(elements)[:, None] * GF(elements)[None, :]).astype(np.int64))
    assert np.array_equal(table, table.T)
    assert np.array_equal(table[1], elements)
    assert not table[0].any()
    rows, cols = elements[:, None], elements[None, :]
    for a in range(q):
        assert np.array_equal(table[table[a]], table[a][table])
        assert np.array_equal(table[a][rows ^ cols], table[a][rows] ^ table[a][cols])
    for a in range(1, q):
        assert table[a, felt_inv(fld, a)] == 1


@pytest.mark.parametrize("b", [10, 11, 12])
def test_field_axioms_sampled(b):
    fld = load_field(b)
    mul = fld.mul
    rng = random.Random(1000 + b)
    q = fld.order
    for _ in range(100_000):
        x, y, z = rng.randrange(q), rng.randrange(q), rng.randrange(q)
        assert mul(mul(x, y), z) == mul(x, mul(y, z))
        assert mul(x, y ^ z) == mul(x, y) ^ mul(x, z)
        assert mul(x, y) == mul(y, x)
    for _ in range(2_000):
        a = rng.randrange(1, q)
        assert mul(a, fld.inv(a)) == 1


def test_cost_rows_for_benchmark_fields():
    expected = {10: (39, 738, 39), 11: (47, 1278, 46), 12: (51, 1506, 51)}
    for b, (toffoli, cnot, pctof) in expected.items():
        fld = load_field(b)
        assert (fld.cost_qq_toffoli, fld.cost_qq_cnot, fld.cost_qq_pctof) == (toffoli, cnot, pctof)
        assert fld.order == 1 << b


def test_ledger_does_not_change_products():
    fld = load_field(8)
    rng = random.Random(5)
    ledger = CostLedger()
    for _ in range(200):
        x, y = rng.randrange(256), rng.randrange(256)
        assert felt_mul(fld, x, y, ledger) == felt_mul(fld, x, y)
    assert ledger.qq_mult == 200
    assert ledger.qc_mult == 0


def test_constant_multiplication_charges_only_classical_counter():
    fld = load_field(8)
    ledger = CostLedger()
    assert felt_mul_const(fld, 0x53, 0xCA, ledger) == felt_mul(fld, 0x53, 0xCA)
    assert ledger.qc_mult == 1
    assert ledger.qq_mult == 0
    assert ledger.gf_inverse == 0
    assert ledger.inv_qq_mult == 0


def _form_rank(gates, b):
    GF2 = galois.GF(2)
    forms = GF2(np.stack([gate.monomials(b) for gate in gates]))
    return int(np.linalg.matrix_rank(forms))


@pytest.mark.parametrize("b", [2, 3, 4, 5])
def test_pctof_output_size_is_form_rank(b):
    rng = random.Random(b)
    q = 1 << b
    for _ in range(5):
        gates = [PctofGate(rng.randrange(1, q), rng.randrange(1, q), rng.randrange(q)) for _ in range(b * b + 4)]
        gates += [gates[1], PctofGate(gates[0].control_x, gates[0].control_y, rng.randrange(q))]
        reduced = pctof_minimize(gates, b)
        assert len(reduced) == _form_rank(gates, b)
        assert len(reduced) <= b * b
        for x in range(q):
            for y in range(q):
                assert apply_pctof(reduced, x, y) == apply_pctof(gates, x, y)


def test_pctof_register_width_is_derived():
    gates = [PctofGate(0b0110, 0b0011, 0b1), PctofGate(0b0010, 0b0001, 0b10), PctofGate(0b0100, 0b0001, 0b10)]
    assert pctof_minimize(gates) == pctof_minimize(gates, 4)
    assert pctof_minimize(gates, 6) == pctof_minimize(gates, 4)
    with pytest.raises(DomainError):
        pctof_minimize(gates, 2)


def test_pctof_empty_circuit():
    assert pctof_minimize([]) == []
    assert pctof_minimize([], 4) == []
