"""Deterministic discrete-event simulation core.

World model: nodes on a plane, unit-disk connectivity, a single root at the
area centre collecting upward traffic.  The MAC is an abstracted CSMA: one
transmit queue per node, fixed per-attempt service time, carrier-sense
deferral against overheard neighbour transmissions, probabilistic per-link
delivery with up to five attempts for unicasts.  Every attempt is overheard
by every node in the sender's range, which is what feeds the defense.

Everything is driven by one event heap with (time, sequence) ordering, and
every random draw comes from named generator streams derived from the
scenario seed, so a run log is a pure function of its config.
"""

import heapq
import math

import numpy as np

from . import attacks
from .basestation import ReportMatrix, filter_reports, revocation_target
from .config import ConfigError
from .features import (KeaVector, RandomFeatureMap, anomaly_score,
                       expected_similarity, map_features, normalize_metrics,
                       update_kea)
from .overhearing import SlotAccumulator
from .routing import (NeighborRecord, RankState, UNREACHABLE_RANK,
                      compute_rank, estimate_etx, evict_if_needed)
from .runlog import (MSG_BEACON, MSG_DATA, MSG_HELLO, MSG_TICKET_BROADCAST,
                     MSG_TICKET_SPAWN, MSG_TICKET_UNICAST, RunLog)
from .tickets import ReporterState, maybe_spawn
from .trust import TrustParams, is_flagged, subjective_trust, trust_weighted_penalty

SERVICE_TIME = 0.008          # seconds per transmission attempt
BACKOFF_MIN, BACKOFF_MAX = 0.001, 0.016
MAX_ATTEMPTS = 5
MAX_HOPS = 64                 # hop limit: bounds transient routing loops
TOPOLOGY_RETRIES = 1000

# event kinds (heap entries are (time, seq, kind, payload...))
EV_SLOT = 0
EV_APP = 1
EV_BEACON = 2
EV_HELLO = 3
EV_DELIVER = 4
EV_ATTACK_ON = 5
EV_ADMIN = 6
EV_REVOKE = 7


def generate_topology(config, rng):
    """Sample node positions until the unit-disk graph is usable.

    The root (id 0) sits at the area centre; the rest are uniform.  The
    graph must be connected, and for 25+ nodes the root needs degree >= 2 so
    a single compromised root neighbour cannot sever the network.
    """
    n = config.node_count
    side = config.resolved_area()
    r2 = config.tx_range ** 2
    for _ in range(TOPOLOGY_RETRIES):
        pos = np.empty((n, 2))
        pos[0] = (side / 2.0, side / 2.0)
        pos[1:] = rng.uniform(0.0, side, size=(n - 1, 2))
        adj = [[] for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d2 = (pos[i, 0] - pos[j, 0]) ** 2 + (pos[i, 1] - pos[j, 1]) ** 2
                if d2 <= r2:
                    adj[i].append(j)
                    adj[j].append(i)
        if n >= 25 and len(adj[0]) < 2:
            continue
        if not adj[0]:
            continue
        seen = {0}
        stack = [0]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) == n:
            return pos, adj
    raise ConfigError(
        "could not sample a connected topology with root degree >= 2 in %d attempts "
        "(node_count=%d, area=%.0f m, tx_range=%.0f m)"
        % (TOPOLOGY_RETRIES, n, side, config.tx_range))


class _Monitor:
    """Per (observer, neighbour) detector state."""
    __slots__ = ("slots_seen", "warm_tx", "warm_ratio", "warm_rank", "warm_rank_n",
                 "scales", "kea")

    def __init__(self):
        self.slots_seen = 0
        self.warm_tx = 0.0
        self.warm_ratio = 0.0
        self.warm_rank = 0.0
        self.warm_rank_n = 0
        self.scales = None
        self.kea = None


class _Node:
    def __init__(self, nid, pos, is_root, config):
        self.id = nid
        self.pos = pos
        self.is_root = is_root
        self.rank = RankState(nid, is_root=is_root, root_rank=config.root_rank)
        self.records = {}
        self.monitors = {}
        self.acc = SlotAccumulator(nid)
        self.reporter = ReporterState()
        self.fmap = None
        self.neighbors = []          # ids in radio range
        self.neighbor_nodes = []     # resolved references, same order
        self.p_link = {}
        self.queue_free_at = 0.0
        self.channel_busy_until = 0.0
        self.tx_attempts = 0
        self.link_stats = {}
        self.pending_tickets = []
        self.pinned_parent = False
        self.revoked = False
        self.app_seq = 0
        self.attack_kind = None
        self.attack_active = False

    def record_for(self, nid, slot):
        rec = self.records.get(nid)
        if rec is None:
            rec = NeighborRecord(neighbor_id=nid, last_heard=slot)
            self.records[nid] = rec
            evicted = evict_if_needed(self.records, self.rank.parent_id)
            if evicted is not None:
                self.monitors.pop(evicted, None)
                self.acc.forget(evicted)
        return rec


class Simulation:
    def __init__(self, config, positions=None):
        self.config = config.validate()
        self.log = RunLog(config)
        self.params = TrustParams(k=config.k, alpha=config.alpha,
                                  tau_max=config.tau_max,
                                  alpha_ewma=config.alpha_ewma).validate()
        self.plan = config.attack_plan()
        if self.plan is not None:
            self.plan.validate(config.node_count, root_id=0)

        rng_topo = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))
        self.rng_traffic = np.random.default_rng(np.random.SeedSequence([config.seed, 1]))
        self.rng_mac = np.random.default_rng(np.random.SeedSequence([config.seed, 2]))
        self.rng_attack = np.random.default_rng(np.random.SeedSequence([config.seed, 3]))

        if positions is None:
            pos, adj = generate_topology(config, rng_topo)
        else:
            pos = np.asarray(positions, dtype=float)
            if len(pos) != config.node_count:
                raise ConfigError("positions length %d != node_count %d"
                                  % (len(pos), config.node_count))
            r2 = config.tx_range ** 2
            adj = [[] for _ in range(len(pos))]
            for i in range(len(pos)):
                for j in range(i + 1, len(pos)):
                    if (pos[i, 0] - pos[j, 0]) ** 2 + (pos[i, 1] - pos[j, 1]) ** 2 <= r2:
                        adj[i].append(j)
                        adj[j].append(i)

        self.nodes = [_Node(i, tuple(pos[i]), i == 0, config)
                      for i in range(config.node_count)]
        for node in self.nodes:
            node.neighbors = sorted(adj[node.id])
            node.neighbor_nodes = [self.nodes[j] for j in node.neighbors]
            node.acc.range_ids = frozenset(node.neighbors)
            for j in node.neighbors:
                d = math.dist(pos[node.id], pos[j])
                if config.link_p_override >= 0:
                    p = config.link_p_override
                else:
                    p = 1.0 - 0.3 * (d / config.tx_range) ** 2
                node.p_link[j] = p

        self.log.add("topology", 0, config.node_count, float(config.resolved_area()))
        for node in self.nodes:
            for j in node.neighbors:
                if j > node.id:
                    self.log.add("edge", node.id, j)

        self.heap = []
        self.seq = 0
        self.now = 0.0
        self.slot = 0
        self.matrix = ReportMatrix()
        self.attack_onset = None
        self.attackers = set()

        # packet accounting (kept exact for the conservation invariant)
        self.sent = 0
        self.delivered = 0
        self.drops = {"link": 0, "detached": 0, "malicious": 0,
                      "revoked": 0, "ttl": 0, "ticket": 0}

    # ------------------------------------------------------------------ util

    def push(self, time, kind, *payload):
        heapq.heappush(self.heap, (time, self.seq, kind, payload))
        self.seq += 1

    def _fmap_for(self, node):
        if node.fmap is None:
            node.fmap = RandomFeatureMap(
                self.config.m, self.config.sigma_sq,
                np.random.SeedSequence([self.config.seed, 4, node.id]))
        return node.fmap

    # ------------------------------------------------------------------- MAC

    def _transmit(self, node, kind, dest_id, rank=None):
        """Run one frame through the node's MAC; returns (delivered, end_time).

        Unicast: up to MAX_ATTEMPTS Bernoulli(p_link) tries.  Broadcast
        (dest_id None): a single attempt, independently received by each
        in-range neighbour.  Every attempt is overheard by every in-range
        node and occupies the medium for them.  Returns the set of receiver
        ids for broadcasts.
        """
        begin = max(self.now, node.queue_free_at, node.channel_busy_until)
        observers = node.neighbor_nodes
        slot = self.slot
        self.log.count_message(slot, kind)
        adv_rank = rank if kind == MSG_BEACON else None

        if dest_id is None:
            end = begin + SERVICE_TIME
            node.tx_attempts += 1
            for obs in observers:
                obs.acc.observe(node.id, None, kind, adv_rank)
                if obs.channel_busy_until < end:
                    obs.channel_busy_until = end
            received = []
            if kind in (MSG_BEACON, MSG_TICKET_BROADCAST):
                for obs in observers:
                    if self.rng_mac.random() < node.p_link[obs.id]:
                        received.append(obs.id)
            node.queue_free_at = end
            return received, end

        p = node.p_link[dest_id]
        stats = node.link_stats.get(dest_id)
        if stats is None:
            stats = node.link_stats[dest_id] = [0, 0]
        delivered = False
        end = begin
        for _ in range(MAX_ATTEMPTS):
            end = begin + SERVICE_TIME
            node.tx_attempts += 1
            stats[0] += 1
            for obs in observers:
                obs.acc.observe(node.id, dest_id, kind)
                if obs.channel_busy_until < end:
                    obs.channel_busy_until = end
            if self.rng_mac.random() < p:
                delivered = True
                stats[1] += 1
                break
            begin = end + BACKOFF_MIN + self.rng_mac.random() * (BACKOFF_MAX - BACKOFF_MIN)
        node.queue_free_at = end
        return delivered, end

    def _send_data(self, node, packet):
        """Forward a data packet one hop toward the root."""
        if node.rank.parent_id is None:
            self.drops["detached"] += 1
            self.log.add("drop", self.now, node.id, packet[0], packet[1], "detached")
            return
        if packet[3] >= MAX_HOPS:
            self.drops["ttl"] += 1
            self.log.add("drop", self.now, node.id, packet[0], packet[1], "ttl")
            return
        dest = node.rank.parent_id
        ok, end = self._transmit(node, MSG_DATA, dest)
        if ok:
            self.push(end, EV_DELIVER, dest, MSG_DATA, node.id,
                      (packet[0], packet[1], packet[2], packet[3] + 1))
        else:
            self.drops["link"] += 1
            self.log.add("drop", end, node.id, packet[0], packet[1], "link")

    # --------------------------------------------------------------- tickets

    def _forward_ticket(self, node, ticket):
        if node.is_root:
            self._deliver_ticket(ticket)
            return
        if ticket.hops_unicast >= MAX_HOPS:
            self.drops["ticket"] += 1
            self.log.add("ticket_lost", self.now, ticket.suspect_id,
                         ticket.reporter_id, "ttl",
                         ticket.hops_unicast, ticket.hops_broadcast)
            return
        if node.rank.parent_id is None:
            node.pending_tickets.append((ticket, self.slot))
            return
        # one-hop notice first: neighbours must not mistrust this relay for
        # the traffic shift the ticket itself announces.  A relay that is
        # itself the named suspect gets no such grace: the notice payload
        # carries the suspect id exactly so receivers can refuse to
        # whitewash it.
        received, _ = self._transmit(node, MSG_TICKET_BROADCAST, None)
        ticket.hops_broadcast += 1
        if node.id != ticket.suspect_id and self.config.refractory_slots > 0:
            until = self.slot + self.config.refractory_slots + 1
            for rid in received:
                rec = self.nodes[rid].record_for(node.id, self.slot)
                if rec.eta > self.params.alpha:
                    continue  # no grace for a relay this receiver already flags
                if rec.refractory_until < until:
                    rec.refractory_until = until
        self.log.add("ticket_note", self.now, node.id, ticket.suspect_id)

        dest = node.rank.parent_id
        ok, end = self._transmit(node, MSG_TICKET_UNICAST, dest)
        ticket.hops_unicast += 1
        if ok:
            self.push(end, EV_DELIVER, dest, MSG_TICKET_UNICAST, node.id, ticket)
        else:
            self.drops["ticket"] += 1
            self.log.add("ticket_lost", end, ticket.suspect_id, ticket.reporter_id,
                         "link", ticket.hops_unicast, ticket.hops_broadcast)

    def _deliver_ticket(self, ticket):
        self.matrix.ingest(ticket.suspect_id, ticket.reporter_id)
        self.log.add("ticket_deliver", self.now, ticket.suspect_id, ticket.reporter_id,
                     ticket.created_slot, self.slot, ticket.hops_unicast,
                     ticket.hops_broadcast)

    def _handle_parent_switch(self, node, old_parent):
        old_rec = node.records.get(old_parent) if old_parent is not None else None
        if old_rec is None:
            return
        ticket = maybe_spawn(node.reporter, old_parent, old_rec.tau,
                             old_rec.refractory_until, self.slot, node.id,
                             self.config.report_hold_slots)
        if ticket is None:
            return
        self.log.count_message(self.slot, MSG_TICKET_SPAWN)
        self.log.add("ticket_spawn", self.now, node.id, ticket.suspect_id, self.slot)
        self._forward_ticket(node, ticket)

    # -------------------------------------------------------------- detector

    def _freeze_scales(self, mon):
        cfg = self.config
        w = max(1, min(mon.slots_seen, cfg.warmup_slots))
        tx_scale = max(cfg.tx_scale_factor * mon.warm_tx / w, 1.0)
        ratio_scale = max(cfg.ratio_scale_factor * mon.warm_ratio / w,
                          cfg.ratio_scale_floor)
        if mon.warm_rank_n > 0 and mon.warm_rank > 0:
            rank_scale = cfg.rank_scale_factor * mon.warm_rank / mon.warm_rank_n
        else:
            rank_scale = cfg.rank_scale_fallback
        mon.scales = np.array([tx_scale, ratio_scale, max(rank_scale, 1e-9)])

    def _score_neighbor(self, node, rec, mon, raw):
        """One detector step: returns (eta, tau) for the slot just closed."""
        cfg = self.config
        mon.slots_seen += 1
        if mon.slots_seen <= cfg.warmup_slots:
            mon.warm_tx += raw[0]
            mon.warm_ratio += raw[1]
            if raw[2] > 0:
                mon.warm_rank += raw[2]
                mon.warm_rank_n += 1
            if mon.slots_seen == cfg.warmup_slots:
                self._freeze_scales(mon)
            return 0.0, 1.0

        if mon.scales is None:
            self._freeze_scales(mon)
        v = normalize_metrics(raw, mon.scales)
        if v is None:
            return rec.eta, rec.tau
        f = map_features(v, self._fmap_for(node))
        if mon.kea is None:
            mon.kea = KeaVector(cfg.m)
        if not mon.kea.initialized:
            update_kea(mon.kea, f, cfg.gamma, gate_open=True)
            return 0.0, 1.0

        sim = expected_similarity(f, mon.kea)
        eta = anomaly_score(sim)
        if self.slot < rec.refractory_until:
            # refractory: the neighbour announced a legitimate traffic shift;
            # treat it as trusted and let the model absorb the new pattern
            eta = 0.0
        flagged = is_flagged(eta, self.params)
        if flagged:
            self.log.add("flag", self.slot, node.id, rec.neighbor_id, round(eta, 6))
        else:
            update_kea(mon.kea, f, cfg.gamma, gate_open=True)
        return eta, subjective_trust(eta, self.params)

    def _node_slot_step(self, node):
        cfg = self.config
        raw_metrics = node.acc.close_slot()
        defense = cfg.defense_enabled

        for nid, raw in raw_metrics.items():
            rec = node.record_for(nid, self.slot)
            if defense:
                mon = node.monitors.get(nid)
                if mon is None:
                    mon = node.monitors[nid] = _Monitor()
                rec.eta, rec.tau = self._score_neighbor(node, rec, mon, raw)
                if cfg.log_trust == "full":
                    self.log.add("trust", self.slot, node.id, nid,
                                 round(rec.eta, 6), round(min(rec.tau, 1e6), 6))

        for nid, stats in node.link_stats.items():
            rec = node.records.get(nid)
            if rec is not None and stats[0] > 0:
                rec.etx = estimate_etx(stats[0], stats[1], rec.etx)
            stats[0] = stats[1] = 0

        for rec in node.records.values():
            trust_weighted_penalty(rec.penalty, rec.tau, rec.etx, self.params)

        if node.is_root or node.revoked:
            return
        if node.pending_tickets:
            still = []
            for ticket, since in node.pending_tickets:
                if node.rank.parent_id is not None:
                    self._forward_ticket(node, ticket)
                elif self.slot - since >= cfg.ticket_ttl_slots:
                    self.drops["ticket"] += 1
                    self.log.add("ticket_lost", self.now, ticket.suspect_id,
                                 ticket.reporter_id, "ttl",
                                 ticket.hops_unicast, ticket.hops_broadcast)
                else:
                    still.append((ticket, since))
            node.pending_tickets = still
        self._recompute_rank(node)

    def _recompute_rank(self, node):
        if node.is_root or node.pinned_parent or node.revoked:
            return
        old_parent = node.rank.parent_id
        suspects = ()
        if self.config.defense_enabled:
            alpha = self.params.alpha
            suspects = {nid for nid, rec in node.records.items() if rec.eta > alpha}
        compute_rank(node.records, node.rank, self.config.hysteresis,
                     node.reporter.blacklist, suspects)
        if node.rank.parent_id != old_parent and old_parent is not None \
                and self.config.defense_enabled:
            self._handle_parent_switch(node, old_parent)

    # ------------------------------------------------------------- handlers

    def _on_slot(self, closing_slot):
        for node in self.nodes:
            self._node_slot_step(node)

        verdicts = filter_reports(self.matrix, self.config.theta_b, self.config.theta_n)
        for v in verdicts:
            self.log.add("verdict", closing_slot, v.suspect_id, v.verdict,
                         -1 if v.culprit_id is None else v.culprit_id)
            target = revocation_target(v)
            if target is not None and not self.nodes[target].revoked:
                when = (closing_slot + 1 + self.config.admin_delay_slots) \
                    * self.config.slot_seconds
                self.push(when, EV_REVOKE, target)
        self.matrix.roll(closing_slot + 1)
        self.slot = closing_slot + 1

    def _on_app(self, node_id):
        node = self.nodes[node_id]
        if node.revoked:
            return
        packet = (node.id, node.app_seq, self.now, 0)
        node.app_seq += 1
        self.sent += 1
        self.log.add("send", self.now, packet[0], packet[1])
        self._send_data(node, packet)
        self.push(self.now + self.config.traffic_period, EV_APP, node_id)

    def _on_beacon(self, node_id):
        node = self.nodes[node_id]
        if node.revoked:
            return
        cfg = self.config
        interval = (cfg.beacon_min_ms
                    + self.rng_traffic.random() * (cfg.beacon_max_ms - cfg.beacon_min_ms)) / 1000.0
        self.push(self.now + interval, EV_BEACON, node_id)

        if node.attack_active and attacks.falsifies_rank(node.attack_kind):
            rank = cfg.root_rank
        elif node.is_root:
            rank = node.rank.own_rank
        elif node.rank.parent_id is None:
            return  # detached nodes advertise nothing
        else:
            rank = node.rank.own_rank

        # receivers only record the advertisement; parents are re-selected at
        # slot boundaries, after scoring, so a freshly flagged liar is never
        # adopted and routing shifts cannot outrun the detector within a slot
        received, _ = self._transmit(node, MSG_BEACON, None, rank=rank)
        for rid in received:
            peer = self.nodes[rid]
            rec = peer.record_for(node.id, self.slot)
            rec.last_heard = self.slot
            rec.advertised_rank = rank

    def _on_hello(self, node_id):
        node = self.nodes[node_id]
        if node.revoked or not node.attack_active:
            return
        self._transmit(node, MSG_HELLO, None)
        self.push(self.now + self.plan.hello_interval, EV_HELLO, node_id)

    def _on_deliver(self, receiver_id, kind, sender_id, payload):
        node = self.nodes[receiver_id]
        if node.revoked:
            if kind == MSG_DATA:
                self.drops["revoked"] += 1
                self.log.add("drop", self.now, receiver_id, payload[0], payload[1],
                             "revoked")
            else:
                self.drops["ticket"] += 1
                self.log.add("ticket_lost", self.now, payload.suspect_id,
                             payload.reporter_id, "revoked",
                             payload.hops_unicast, payload.hops_broadcast)
            return
        if kind == MSG_DATA:
            if node.is_root:
                self.delivered += 1
                origin, seq, created, _hops = payload
                self.log.add("deliver", self.now, origin, seq,
                             self.now - created)
            elif node.attack_active and attacks.drops_forwarded(node.attack_kind):
                self.drops["malicious"] += 1
                self.log.add("drop", self.now, node.id, payload[0], payload[1],
                             "malicious")
            else:
                self._send_data(node, payload)
        elif kind == MSG_TICKET_UNICAST:
            self._forward_ticket(node, payload)

    def _on_attack_on(self):
        plan = self.plan
        root_zone = {0, *self.nodes[0].neighbors}
        children_of = {}
        for node in self.nodes:
            if node.rank.parent_id is not None:
                children_of.setdefault(node.rank.parent_id, []).append(node)

        def child_can_escape(child, suspect_id):
            own = child.rank.own_rank
            return any(nid != suspect_id and rec.advertised_rank < own
                       for nid, rec in child.records.items())

        strong, with_children, fallback = [], [], []
        for node in self.nodes:
            if node.id in root_zone:
                continue
            fallback.append(node.id)
            kids = children_of.get(node.id, ())
            if kids:
                with_children.append(node.id)
                if any(child_can_escape(c, node.id) for c in kids):
                    strong.append(node.id)
        last_resort = [n.id for n in self.nodes if not n.is_root]
        ids = attacks.select_attackers(
            plan, self.rng_attack, [strong, with_children, fallback, last_resort])
        for nid in ids:
            node = self.nodes[nid]
            node.attack_kind = plan.kind
            node.attack_active = True
            self.attackers.add(nid)
            self.log.add("attack_on", self.now, plan.kind, nid)
            if attacks.floods_hello(plan.kind):
                self.push(self.now, EV_HELLO, nid)

    def _on_admin(self, directive):
        cmd, args = directive[0], directive[1:]
        self.log.add("admin", self.now, cmd, *args)
        if cmd == "set_parent":
            node, parent = self.nodes[args[0]], args[1]
            rec = node.record_for(parent, self.slot)
            node.rank.parent_id = parent
            node.rank.own_rank = rec.cost()
            node.pinned_parent = True
        elif cmd == "unpin":
            self.nodes[args[0]].pinned_parent = False
        elif cmd == "distrust":
            node, suspect = self.nodes[args[0]], args[1]
            rec = node.record_for(suspect, self.slot)
            rec.eta, rec.tau = 1.0, self.params.tau_max
            rec.penalty.p_hat = self.params.tau_max * rec.etx
            rec.penalty.initialized = True
            node.pinned_parent = False
            self._recompute_rank(node)
        elif cmd == "clear":
            for node in self.nodes:
                node.reporter.clear(args[0])
        elif cmd == "revoke":
            self.push(self.now, EV_REVOKE, args[0])
        else:
            raise ConfigError("unknown admin directive %r" % (cmd,))

    def _on_revoke(self, node_id):
        node = self.nodes[node_id]
        if not node.revoked:
            node.revoked = True
            self.log.add("revoke", self.now, node_id)

    # ------------------------------------------------------------------ run

    def run(self):
        cfg = self.config
        n_slots = int(cfg.sim_duration // cfg.slot_seconds)
        for s in range(1, n_slots + 1):
            self.push(s * cfg.slot_seconds, EV_SLOT, s - 1)
        for node in self.nodes:
            first = (cfg.beacon_min_ms + self.rng_traffic.random()
                     * (cfg.beacon_max_ms - cfg.beacon_min_ms)) / 1000.0
            self.push(first, EV_BEACON, node.id)
            if not node.is_root:
                self.push(self.rng_traffic.random() * cfg.traffic_period,
                          EV_APP, node.id)
        if self.plan is not None:
            onset = self.plan.resolved_start(cfg.node_count)
            self.attack_onset = onset
            self.push(onset, EV_ATTACK_ON)
        for directive in cfg.admin_script:
            self.push(directive[0], EV_ADMIN, tuple(directive[1:]))

        heap = self.heap
        while heap:
            time, _, kind, payload = heapq.heappop(heap)
            if time > cfg.sim_duration:
                break
            self.now = time
            if kind == EV_DELIVER:
                self._on_deliver(*payload)
            elif kind == EV_BEACON:
                self._on_beacon(*payload)
            elif kind == EV_APP:
                self._on_app(*payload)
            elif kind == EV_SLOT:
                self._on_slot(*payload)
            elif kind == EV_HELLO:
                self._on_hello(*payload)
            elif kind == EV_ATTACK_ON:
                self._on_attack_on()
            elif kind == EV_ADMIN:
                self._on_admin(*payload)
            elif kind == EV_REVOKE:
                self._on_revoke(*payload)

        in_flight = self.sent - self.delivered - sum(
            self.drops[k] for k in ("link", "detached", "malicious", "revoked", "ttl"))
        self.log.add("totals", self.sent, self.delivered, self.drops["link"],
                     self.drops["detached"], self.drops["malicious"],
                     self.drops["revoked"], self.drops["ttl"],
                     self.drops["ticket"], in_flight)
        return self.log


def run_scenario(config, positions=None):
    """Execute one scenario and return its RunLog."""
    return Simulation(config, positions=positions).run()
