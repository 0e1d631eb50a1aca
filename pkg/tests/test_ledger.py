import pytest

from dqi_workbench.errors import DomainError
from dqi_workbench.ledger import CostLedger, GateCosts, decoder_cost_formula, eea_cost_table


def test_counters_accumulate_and_merge():
    a = CostLedger()
    a.charge_qq(3)
    a.charge_qc()
    a.charge_inverse(4, count=2)
    b = CostLedger()
    b.charge_qq(5)
    b.charge_cswap(7)
    merged = a + b
    assert merged.qq_mult == 8
    assert merged.qc_mult == 1
    assert merged.gf_inverse == 2
    assert merged.inv_qq_mult == 8
    assert merged.cswap == 7
    assert merged.total_qq == 16


def test_counters_never_decrease():
    with pytest.raises(DomainError):
        CostLedger().charge_qq(-1)


def test_stage_attribution():
    ledger = CostLedger()
    with ledger.stage("first"):
        ledger.charge_qq(2)
    ledger.charge_qq(1)
    with ledger.stage("first"):
        ledger.charge_qc(4)
    assert ledger.stages["first"]["qq_mult"] == 2
    assert ledger.stages["first"]["qc_mult"] == 4
    assert ledger.qq_mult == 3


def test_gate_totals_need_costs():
    ledger = CostLedger()
    ledger.charge_qq(10)
    assert ledger.toffoli_total is None
    priced = CostLedger(costs=GateCosts(toffoli=39, cnot=738, pctof=39))
    priced.charge_qq(10)
    priced.charge_inverse(4)
    assert priced.toffoli_total == 14 * 39
    assert priced.snapshot()["cnot_total"] == 14 * 738


def test_decoder_formula_leading_orders():
    m, n = 255, 32
    explicit = decoder_cost_formula(m, n, "explicit")
    implicit = decoder_cost_formula(m, n, "implicit")
    assert explicit["qq_mult"] == 3 * n * n
    assert implicit["qq_mult"] == 2 * m * n + n * n
    assert implicit["qc_mult"] == m * n / 2
    with pytest.raises(DomainError):
        decoder_cost_formula(m, n, "neither")


def test_eea_cost_tables():
    eea = eea_cost_table(32, 8, "eea")
    division = eea_cost_table(32, 8, "division")
    assert len(eea) == len(division) == 6
    dialog = [row for row in division if row.technique.startswith("Dialog")][0]
    sync = [row for row in division if row.technique.startswith("Synchronized")][0]
    assert dialog.mult_count == 4 * 32 * 32
    assert sync.mult_count > dialog.mult_count
    assert min(row.qubit_count for row in eea) == eea[-1].qubit_count
