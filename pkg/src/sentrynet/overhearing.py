"""Passive per-neighbour metric collection from overheard radio traffic.

An observer counts transmission envelopes it can hear: who sent, and (for
unicasts) who the frame was addressed to.  Payloads never enter the
accumulator; the interface does not even accept them.  At each slot boundary
the counters become one (tx, rx/tx, rank) metric triple per neighbour.
"""

BEACON = "beacon"


class SlotAccumulator:
    """Per-observer counters, reset at every slot boundary.

    rx is attributed per addressed unicast attempt: traffic overheard going
    *to* a neighbour, plus the observer's own sends to it.  Broadcast
    receptions are not attributed (the observer cannot know who else heard a
    broadcast). A missing beacon leaves the neighbour's last known rank in
    place; reading an absent rank as 0 would mimic a root-rank lie.
    """

    def __init__(self, observer_id, capacity=50, range_ids=None):
        self.observer_id = observer_id
        self.capacity = capacity
        self.range_ids = range_ids  # None: attribute any receiver (standalone use)
        self.tx_heard = {}
        self.rx_heard = {}
        self.rank_sum = {}
        self.rank_samples = {}
        self.last_rank = {}

    def _known(self, node_id):
        if node_id in self.tx_heard:
            return True
        if len(self.tx_heard) >= self.capacity:
            return False
        self.tx_heard[node_id] = 0
        self.rx_heard[node_id] = 0
        return True

    def observe(self, sender, receiver, kind, rank=None):
        """Register one overheard transmission attempt.

        ``receiver`` is None for broadcasts.  The caller guarantees sender
        and receiver (when attributed) are inside the observer's range.
        """
        if sender != self.observer_id and self._known(sender):
            self.tx_heard[sender] += 1
            if kind == BEACON and rank is not None:
                self.rank_sum[sender] = self.rank_sum.get(sender, 0.0) + rank
                self.rank_samples[sender] = self.rank_samples.get(sender, 0) + 1
        if receiver is not None and receiver != self.observer_id \
                and (self.range_ids is None or receiver in self.range_ids) \
                and self._known(receiver):
            self.rx_heard[receiver] += 1

    def close_slot(self):
        """Emit {neighbour: (tx, rx/tx, rank)} raw metrics and reset counters."""
        out = {}
        for nid, tx in self.tx_heard.items():
            rx = self.rx_heard.get(nid, 0)
            n_rank = self.rank_samples.get(nid, 0)
            if n_rank > 0:
                rank = self.rank_sum[nid] / n_rank
                self.last_rank[nid] = rank
            else:
                rank = self.last_rank.get(nid, 0.0)
            out[nid] = (float(tx), rx / max(tx, 1), rank)
            self.tx_heard[nid] = 0
            self.rx_heard[nid] = 0
        self.rank_sum.clear()
        self.rank_samples.clear()
        return out

    def forget(self, node_id):
        for table in (self.tx_heard, self.rx_heard, self.rank_sum,
                      self.rank_samples, self.last_rank):
            table.pop(node_id, None)
