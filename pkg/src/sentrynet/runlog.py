"""Run log: the flat record stream a simulation emits.

Records are plain tuples with a kind tag first, appended in event order, so
the whole log is a pure function of the scenario config.  A digest over the
records doubles as the determinism check.  Logs serialize to line-delimited
JSON with a header record carrying the config and aggregate counters.
"""

import hashlib
import json

from .config import ScenarioConfig, known_keys

# message kinds used in per-slot traffic counters
MSG_DATA = "data"
MSG_BEACON = "beacon"
MSG_HELLO = "hello"
MSG_TICKET_UNICAST = "ticket_unicast"
MSG_TICKET_BROADCAST = "ticket_broadcast"
MSG_TICKET_SPAWN = "ticket_spawn"

DEFENSE_KINDS = (MSG_TICKET_SPAWN, MSG_TICKET_UNICAST, MSG_TICKET_BROADCAST)

PACKET_BYTES = {MSG_DATA: 160, MSG_BEACON: 32, MSG_HELLO: 16,
                MSG_TICKET_UNICAST: 12, MSG_TICKET_BROADCAST: 12}


class RunLog:
    def __init__(self, config):
        self.config = config
        self.records = []
        # per-slot counts of transmitted messages by kind (attempts collapse
        # to one message; retries are link behaviour, not offered traffic)
        self.slot_msg_counts = {}

    def add(self, *record):
        self.records.append(record)

    def count_message(self, slot, kind):
        key = (slot, kind)
        self.slot_msg_counts[key] = self.slot_msg_counts.get(key, 0) + 1

    def messages_in(self, slot_lo, slot_hi, kinds=None):
        total = 0
        for (slot, kind), n in self.slot_msg_counts.items():
            if slot_lo <= slot < slot_hi and (kinds is None or kind in kinds):
                total += n
        return total

    def digest(self):
        h = hashlib.sha256()
        for rec in self.records:
            h.update(repr(rec).encode())
        for key in sorted(self.slot_msg_counts):
            h.update(repr((key, self.slot_msg_counts[key])).encode())
        return h.hexdigest()

    def iter_kind(self, kind):
        for rec in self.records:
            if rec[0] == kind:
                yield rec

    def save(self, path):
        with open(path, "w") as fh:
            header = {
                "format": "sentrynet-runlog-1",
                "config": _config_dict(self.config),
                "counters": [[slot, kind, n] for (slot, kind), n
                             in sorted(self.slot_msg_counts.items())],
                "digest": self.digest(),
            }
            fh.write(json.dumps(header) + "\n")
            for rec in self.records:
                fh.write(json.dumps(rec) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = json.loads(fh.readline())
            if header.get("format") != "sentrynet-runlog-1":
                raise ValueError("%s is not a sentrynet run log" % path)
            cfg = ScenarioConfig()
            for key, value in header["config"].items():
                if key not in known_keys():
                    raise ValueError("run log header has unknown config key %r" % key)
                if key == "admin_script":
                    value = [tuple(d) for d in value]
                setattr(cfg, key, value)
            log = cls(cfg)
            for slot, kind, n in header["counters"]:
                log.slot_msg_counts[(slot, kind)] = n
            for line in fh:
                rec = json.loads(line)
                log.records.append(tuple(rec))
        return log


def _config_dict(config):
    out = {}
    for key in sorted(known_keys()):
        value = getattr(config, key)
        if key == "admin_script":
            value = [list(d) for d in value]
        out[key] = value
    return out
