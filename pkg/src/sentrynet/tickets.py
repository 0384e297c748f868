"""Notification tickets: mobile agents that carry a suspect's id to the root.

When a trust-induced parent switch happens, the switching node spawns a
ticket naming its abandoned parent.  The ticket rides the routing tree hop
by hop; at every hop the relaying node also broadcasts a one-hop notice
naming itself, which puts the relay's neighbours into a refractory window:
the relay's traffic pattern is about to change for a legitimate reason and
must not be flagged for it.  Over a z-hop route a delivered ticket costs
exactly z unicasts + z broadcasts + the spawn event, i.e. 2z+1 messages.
"""

import struct
from dataclasses import dataclass, field

REFRACTORY_SLOTS = 2
REPORT_HOLD_SLOTS = 10
TICKET_TTL_SLOTS = 5

_WIRE = struct.Struct("<III")  # suspect id, reporter id, creation slot


@dataclass
class Ticket:
    suspect_id: int
    reporter_id: int
    created_slot: int
    hops_unicast: int = 0
    hops_broadcast: int = 0

    def serialize(self):
        """Fixed-width wire form; must fit one data frame (160 bytes)."""
        return _WIRE.pack(self.suspect_id, self.reporter_id, self.created_slot)


@dataclass
class ReporterState:
    """Per-node spawn bookkeeping: dedup window and local blacklist."""
    reported_at: dict = field(default_factory=dict)   # suspect -> slot of last report
    blacklist: set = field(default_factory=set)       # avoided until root clearance

    def clear(self, suspect_id):
        self.blacklist.discard(suspect_id)
        self.reported_at.pop(suspect_id, None)


def maybe_spawn(state, old_parent_id, old_parent_tau, old_parent_refractory_until,
                slot, reporter_id, hold_slots=REPORT_HOLD_SLOTS):
    """Spawn a ticket for a parent switch, or return None.

    Spawns only when the switch was trust-induced (old tau above the spawn
    threshold, not ordinary ETX drift), the old parent is not inside a
    refractory window, and this node did not already report the same suspect
    within the hold window.  A spawned suspect goes on the local blacklist
    and stays avoided until cleared.
    """
    from .trust import TRUST_SPAWN_THRESHOLD

    if old_parent_id is None or old_parent_id == reporter_id:
        return None
    if old_parent_tau <= TRUST_SPAWN_THRESHOLD:
        return None
    if slot < old_parent_refractory_until:
        return None
    last = state.reported_at.get(old_parent_id)
    if last is not None and slot - last < hold_slots:
        state.blacklist.add(old_parent_id)
        return None
    state.reported_at[old_parent_id] = slot
    state.blacklist.add(old_parent_id)
    return Ticket(suspect_id=old_parent_id, reporter_id=reporter_id, created_slot=slot)
