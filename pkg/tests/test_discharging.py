from fractions import Fraction

import pytest

from internal.custom_types.charge import ChargeState, Rule, RuleVariant
from internal.custom_types.errors import NonTermination, ShapeMismatch
from internal.custom_types.graph import complete_graph, cycle_graph, path_graph, star_graph
from internal.handlers.discharging import TRANSFER_COLUMNS, DischargingHandler
from oracles import constrained_graphs, random_graphs


def run(g, k, L, variant=None, max_rounds=None):
    return DischargingHandler.run_discharging(g, k, L, DischargingHandler.init_charges(g), variant, max_rounds)


def test_initial_charge_is_degree():
    state = DischargingHandler.init_charges(path_graph(3))
    assert state.charges == (Fraction(1), Fraction(2), Fraction(1))
    assert state.total == 4
    assert state.rounds == 0


def test_star_center_feeds_its_leaves():
    state = run(star_graph(4), 2, 15)
    assert state.charges == (Fraction(2),) + (Fraction(3, 2),) * 4
    assert state.rounds == 1
    assert [t.receiver for t in state.log] == [1, 2, 3, 4]
    assert all(t.rule == Rule.R1 and t.sender == 0 for t in state.log)


def test_degree2_variant_skips_leaves():
    state = run(star_graph(4), 2, 15, variant=RuleVariant.named("degree2"))
    assert state.log == ()
    assert state.charges == DischargingHandler.init_charges(star_graph(4)).charges


def test_unknown_variant():
    with pytest.raises(ValueError):
        RuleVariant.named("greedy")


def test_chordless_cycle_moves_nothing():
    state = run(cycle_graph(5), 2, 10)
    assert state.log == ()
    assert state.rounds == 0


def test_chorded_cycle_passes_charge_around():
    g = cycle_graph(9).with_edge(0, 4)
    state = run(g, 3, 20)
    assert len(state.log) == 9
    assert all(t.rule == Rule.R2 and t.amount == Fraction(1, 4) for t in state.log)
    assert state.log[0].sender == 0 and state.log[0].receiver == 1
    assert state.charges == DischargingHandler.init_charges(g).charges
    assert state.total == 20


def test_long_thread_endpoints_send_inwards():
    state = run(path_graph(8), 2, 5)
    assert state.charges == (
        Fraction(1, 2), Fraction(5, 2), Fraction(2), Fraction(2),
        Fraction(2), Fraction(2), Fraction(5, 2), Fraction(1, 2),
    )
    assert {(t.rule, t.sender, t.receiver) for t in state.log} == {(Rule.R3, 0, 1), (Rule.R3, 7, 6)}


def test_round_cap():
    with pytest.raises(NonTermination):
        run(star_graph(4), 2, 15, max_rounds=0)


def test_state_must_fit_graph():
    with pytest.raises(ShapeMismatch):
        DischargingHandler.run_discharging(path_graph(3), 2, 3, ChargeState(charges=(Fraction(1),)))


def test_audit_flags_deficits():
    state = ChargeState(charges=(Fraction(5, 2), Fraction(-1, 2)))
    audit = DischargingHandler.audit_charges(complete_graph(2), state)
    assert audit.balanced
    assert audit.deficits == (1,)
    assert audit.to_dict()["deficits"] == [{"vertex": 1, "charge": "-1/2"}]

    audit = DischargingHandler.audit_charges(complete_graph(2), ChargeState(charges=(Fraction(1), Fraction(0))))
    assert not audit.balanced


def test_export_transfer_log():
    frame = DischargingHandler.export_transfer_log(run(star_graph(4), 2, 15))
    assert list(frame.columns) == TRANSFER_COLUMNS
    assert len(frame) == 4
    assert list(frame["amount"]) == ["1/2"] * 4
    assert list(frame["to"]) == [1, 2, 3, 4]


def test_empty_log_exports_header_only():
    frame = DischargingHandler.export_transfer_log(run(cycle_graph(5), 2, 10))
    assert list(frame.columns) == TRANSFER_COLUMNS
    assert frame.empty


def test_charge_is_conserved(corpus_upto_5):
    for g in corpus_upto_5:
        audit = DischargingHandler.audit_charges(g, run(g, 2, 3))
        assert audit.balanced


def test_charge_is_conserved_on_constrained_graphs():
    for g in constrained_graphs(20, 2, [10, 15, 20], seed=9):
        audit = DischargingHandler.audit_charges(g, run(g, 2, 15))
        assert audit.total == 2 * g.edge_count()


def test_discharging_is_deterministic():
    for g in random_graphs(30, [6, 7, 8], seed=23):
        assert run(g, 1, 3) == run(g, 1, 3)


def test_transfers_are_local_and_fire_once():
    for g in random_graphs(60, [5, 7, 9], seed=24) + constrained_graphs(10, 2, [12], seed=24):
        state = run(g, 1, 3)
        keys = [(t.rule, t.sender, t.receiver) for t in state.log]
        assert len(keys) == len(set(keys))
        for t in state.log:
            assert g.has_edge(t.sender, t.receiver)
            assert t.amount > 0


@pytest.mark.slow
def test_charge_is_conserved_on_a_thousand_constrained_graphs():
    for g in constrained_graphs(1000, 2, [8, 10, 12, 14], seed=25):
        assert DischargingHandler.audit_charges(g, run(g, 2, 15)).balanced
