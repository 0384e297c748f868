"""Malicious node behaviours and attacker scheduling.

Three attacks are modelled.  A sinkhole advertises the root rank to pull
traffic toward itself but still forwards.  A blackhole advertises the same
lie and silently drops everything it should forward (its own packets still
go out, so detection rests on the forwarding collapse, not on silence).  A
hello flooder broadcasts short hello frames at a very high rate on top of
its normal duties.  Inactive attackers are byte-for-byte honest.
"""

from dataclasses import dataclass, field

SINKHOLE = "sinkhole"
BLACKHOLE = "blackhole"
HELLO_FLOOD = "hello_flood"
ATTACK_KINDS = (SINKHOLE, BLACKHOLE, HELLO_FLOOD)

DEFAULT_HELLO_INTERVAL = 0.008  # seconds between hello frames while flooding
MAX_MALICIOUS_FRACTION = 0.10


@dataclass
class AttackPlan:
    kind: str
    attacker_ids: list = field(default_factory=list)  # empty -> auto-select at onset
    attacker_count: int = 1
    start_time: float | None = None  # None -> size default (1200 s / 2400 s)
    hello_interval: float = DEFAULT_HELLO_INTERVAL

    def validate(self, node_count, root_id):
        if self.kind not in ATTACK_KINDS:
            raise ValueError("unknown attack kind %r" % self.kind)
        if root_id in self.attacker_ids:
            raise ValueError("the root cannot be an attacker")
        n_attackers = len(self.attacker_ids) or self.attacker_count
        if n_attackers > max(1, int(MAX_MALICIOUS_FRACTION * node_count)):
            raise ValueError(
                "at most %d%% of %d nodes may be malicious"
                % (int(MAX_MALICIOUS_FRACTION * 100), node_count))
        if self.hello_interval <= 0:
            raise ValueError("hello_interval must be > 0")
        return self

    def resolved_start(self, node_count):
        if self.start_time is not None:
            return self.start_time
        return 1200.0 if node_count <= 25 else 2400.0


def falsifies_rank(kind):
    return kind in (SINKHOLE, BLACKHOLE)


def drops_forwarded(kind):
    return kind == BLACKHOLE


def floods_hello(kind):
    return kind == HELLO_FLOOD


def select_attackers(plan, rng, pools):
    """Pick attacker ids at onset time from tiered candidate pools.

    ``pools`` is ordered best-first; later tiers only top up when earlier
    ones run short.  The preferred tier holds forwarders whose children keep
    a non-malicious alternative route (the majority-honest-neighbourhood
    assumption of the threat model): the routing attacks only bite through a
    forwarding role, and a parent switch (hence a notification ticket) needs
    a child that can actually escape.  The last tier is any non-root node,
    for degenerate topologies where every node neighbours the root.
    """
    if plan.attacker_ids:
        return list(plan.attacker_ids)
    pool = []
    for tier in pools:
        if len(pool) >= plan.attacker_count:
            break
        pool = pool + sorted(set(tier) - set(pool))
    if len(pool) < plan.attacker_count:
        raise ValueError("not enough eligible nodes to host %d attackers" % plan.attacker_count)
    idx = rng.choice(len(pool), size=plan.attacker_count, replace=False)
    return sorted(pool[i] for i in idx)
