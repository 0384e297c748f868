"""Notification ticket lifecycle tests."""

from sentrynet.tickets import (REPORT_HOLD_SLOTS, ReporterState, Ticket,
                               maybe_spawn)


def test_trust_induced_switch_spawns():
    state = ReporterState()
    t = maybe_spawn(state, old_parent_id=4, old_parent_tau=1e6,
                    old_parent_refractory_until=0, slot=10, reporter_id=7)
    assert t is not None
    assert t.suspect_id == 4
    assert t.reporter_id == 7
    assert t.created_slot == 10
    assert 4 in state.blacklist


def test_etx_drift_switch_does_not_spawn():
    state = ReporterState()
    t = maybe_spawn(state, 4, 1.0, 0, 10, 7)
    assert t is None
    assert 4 not in state.blacklist


def test_marginal_tau_below_threshold_does_not_spawn():
    state = ReporterState()
    assert maybe_spawn(state, 4, 1.1, 0, 10, 7) is None
    assert maybe_spawn(state, 4, 1.11, 0, 10, 7) is not None


def test_refractory_suppresses_spawn():
    state = ReporterState()
    assert maybe_spawn(state, 4, 1e6, 12, slot=10, reporter_id=7) is None


def test_duplicate_report_held_within_window():
    state = ReporterState()
    assert maybe_spawn(state, 4, 1e6, 0, 10, 7) is not None
    assert maybe_spawn(state, 4, 1e6, 0, 10 + REPORT_HOLD_SLOTS - 1, 7) is None
    assert 4 in state.blacklist  # still avoided while deduplicated
    assert maybe_spawn(state, 4, 1e6, 0, 10 + REPORT_HOLD_SLOTS, 7) is not None


def test_clearance_reopens_route_and_reporting():
    state = ReporterState()
    maybe_spawn(state, 4, 1e6, 0, 10, 7)
    state.clear(4)
    assert 4 not in state.blacklist
    assert maybe_spawn(state, 4, 1e6, 0, 11, 7) is not None


def test_serialized_ticket_fits_one_data_packet():
    t = Ticket(suspect_id=2 ** 31, reporter_id=7, created_slot=400)
    wire = t.serialize()
    assert len(wire) <= 160
    assert len(wire) == 12
