"""Distance-vector routing with a trust-weighted minimum-rank objective.

Every node advertises its rank (cost to root) in periodic beacons.  A
non-root node picks the neighbour minimizing smoothed-penalty + advertised
rank, with hysteresis so ordinary ETX jitter does not thrash the tree.  The
smoothed penalty carries the subjective-trust multiplier, which is how the
anomaly detector steers traffic away from misbehaving parents.
"""

from dataclasses import dataclass, field

from .trust import LinkPenaltyState, TRUST_SPAWN_THRESHOLD

NEIGHBOR_TABLE_CAP = 50
ETX_FAIL_CAP = 8.0
ETX_UNKNOWN = 2.0
UNREACHABLE_RANK = 2 ** 16 - 1
DEFAULT_HYSTERESIS = 0.5


def estimate_etx(attempts, successes, prev_etx):
    """Blend this slot's transmissions-per-delivery sample into the estimate.

    An all-failure slot samples the cap; the blend is 0.7 prev + 0.3 sample,
    clamped to [1, ETX_FAIL_CAP].
    """
    if successes > attempts:
        raise ValueError("successes cannot exceed attempts")
    if attempts == 0:
        return prev_etx
    sample = attempts / successes if successes > 0 else ETX_FAIL_CAP
    blended = 0.7 * prev_etx + 0.3 * sample
    return min(max(blended, 1.0), ETX_FAIL_CAP)


@dataclass
class NeighborRecord:
    neighbor_id: int
    advertised_rank: float = UNREACHABLE_RANK
    etx: float = ETX_UNKNOWN
    penalty: LinkPenaltyState = field(default_factory=LinkPenaltyState)
    eta: float = 0.0
    tau: float = 1.0
    last_heard: int = 0
    refractory_until: int = 0

    def cost(self):
        p = self.penalty.p_hat if self.penalty.initialized else self.etx
        return p + self.advertised_rank


@dataclass
class RankState:
    node_id: int
    is_root: bool = False
    root_rank: float = 0.0
    own_rank: float = UNREACHABLE_RANK
    parent_id: int | None = None

    def __post_init__(self):
        if self.is_root:
            self.own_rank = self.root_rank

    @property
    def detached(self):
        return not self.is_root and self.parent_id is None


def compute_rank(neighbors, state, hysteresis=DEFAULT_HYSTERESIS, blacklist=(),
                 suspects=()):
    """Re-select the parent and own rank from the current neighbour table.

    Candidates must advertise a usable rank strictly below our own (loop
    guard) and not be blacklisted.  Neighbours in ``suspects`` (currently
    flagged by the anomaly detector) are only eligible when no clean
    candidate exists: a rank lie can otherwise cancel out the trust penalty
    and hold victims captive.  The incumbent parent is kept unless a
    challenger beats it by ``hysteresis``; a distrusted incumbent
    (tau > TRUST_SPAWN_THRESHOLD) forfeits that protection.  Ties break on
    the lowest neighbour id.  With no usable candidate the node detaches.
    """
    if state.is_root:
        return state

    own = state.own_rank if state.parent_id is not None else UNREACHABLE_RANK

    best = None
    best_cost = None
    best_sus = None
    best_sus_cost = None
    current_eligible = False
    for nid in sorted(neighbors):
        rec = neighbors[nid]
        if nid in blacklist:
            continue
        if rec.advertised_rank >= UNREACHABLE_RANK:
            continue
        # strict loop guard, current parent included: when a parent's own
        # advertisement climbs past the rank we derived from it, we are
        # inside (or feeding) a cycle and must reselect from scratch
        if rec.advertised_rank >= own:
            continue
        if nid == state.parent_id:
            current_eligible = True
        c = rec.cost()
        if nid in suspects:
            if best_sus_cost is None or c < best_sus_cost:
                best_sus, best_sus_cost = rec, c
        elif best_cost is None or c < best_cost:
            best, best_cost = rec, c

    if best is None and best_sus is not None:
        best, best_cost = best_sus, best_sus_cost
    if best is None:
        state.parent_id = None
        state.own_rank = UNREACHABLE_RANK
        return state

    if current_eligible and (state.parent_id not in suspects
                             or best.neighbor_id == state.parent_id):
        current = neighbors[state.parent_id]
        cur_cost = current.cost()
        keep = best.neighbor_id == state.parent_id
        if not keep and current.tau <= TRUST_SPAWN_THRESHOLD \
                and best_cost >= cur_cost - hysteresis:
            keep = True
        if keep:
            state.own_rank = cur_cost
            return state

    state.parent_id = best.neighbor_id
    state.own_rank = best_cost
    return state


def evict_if_needed(neighbors, parent_id):
    """Drop the stalest record once the table exceeds capacity.

    The current parent is never evicted.  Returns the evicted id or None.
    """
    if len(neighbors) <= NEIGHBOR_TABLE_CAP:
        return None
    stalest = None
    for nid, rec in neighbors.items():
        if nid == parent_id:
            continue
        if stalest is None or (rec.last_heard, nid) < (neighbors[stalest].last_heard, stalest):
            stalest = nid
    if stalest is not None:
        del neighbors[stalest]
    return stalest
