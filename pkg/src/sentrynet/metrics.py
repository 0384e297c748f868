"""Evaluation metrics and the scenario sweeps built on top of them.

Four headline numbers per run: end-to-end data loss, mean end-to-end delay,
defense message overhead, and detection reliability (true/false positive
rates plus slots-to-first-report latency).  Detection rates are averaged per
node: a node with an attacking neighbour scores a hit if it flags that
attacker at least once while the attack is active; any node flagging an
honest neighbour outside a refractory window scores a false positive.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .runlog import DEFENSE_KINDS
from .simulator import run_scenario

CSV_COLUMNS = ["scenario_id", "seed", "node_count", "attack_kind", "attackers",
               "alpha", "data_loss", "avg_delay_s", "overhead_pct", "tp_rate",
               "fp_rate", "detect_latency_slots"]


@dataclass
class RunSummary:
    data_loss: float
    avg_e2e_delay: float
    overhead_pct: float
    detection_tp_rate: float
    detection_fp_rate: float
    detection_latency_slots: float
    sent: int
    delivered: int
    ticket_count: int


def summarize(log, window=None):
    """Compute a RunSummary from a run log over a time window.

    The window defaults to [measure_skip, sim_duration] (the first part of a
    run is network formation).  Loss counts packets sent inside the window
    that were never delivered; delay averages over delivered packets only;
    overhead counts defense-created messages against all messages.
    """
    cfg = log.config
    if window is None:
        window = (cfg.measure_skip, cfg.sim_duration)
    lo, hi = window
    if not (0 <= lo < hi <= cfg.sim_duration):
        raise ValueError("window %r outside the run duration" % (window,))

    sent_keys = set()
    delivered = 0
    delay_total = 0.0
    attackers = set()
    onset = None
    flags = []
    first_delivery = {}
    adjacency = {}
    ticket_count = 0

    for rec in log.records:
        kind = rec[0]
        if kind == "send":
            if lo <= rec[1] < hi:
                sent_keys.add((rec[2], rec[3]))
        elif kind == "deliver":
            if (rec[2], rec[3]) in sent_keys:
                delivered += 1
                delay_total += rec[4]
        elif kind == "flag":
            flags.append(rec)
        elif kind == "attack_on":
            onset = rec[1] if onset is None else min(onset, rec[1])
            attackers.add(rec[3])
        elif kind == "ticket_deliver":
            ticket_count += 1
            t, suspect = rec[1], rec[2]
            if suspect not in first_delivery or t < first_delivery[suspect]:
                first_delivery[suspect] = t
        elif kind == "edge":
            adjacency.setdefault(rec[1], set()).add(rec[2])
            adjacency.setdefault(rec[2], set()).add(rec[1])

    sent = len(sent_keys)
    data_loss = 1.0 - delivered / sent if sent else 0.0
    avg_delay = delay_total / delivered if delivered else float("nan")

    slot = cfg.slot_seconds
    slot_lo, slot_hi = int(lo // slot), int(math.ceil(hi / slot))
    total_msgs = log.messages_in(slot_lo, slot_hi)
    defense_msgs = log.messages_in(slot_lo, slot_hi, DEFENSE_KINDS)
    overhead_pct = 100.0 * defense_msgs / total_msgs if total_msgs else 0.0

    tp_rate, fp_rate, latency = _detection_rates(
        cfg, flags, attackers, onset, first_delivery, adjacency)

    return RunSummary(data_loss=data_loss, avg_e2e_delay=avg_delay,
                      overhead_pct=overhead_pct, detection_tp_rate=tp_rate,
                      detection_fp_rate=fp_rate, detection_latency_slots=latency,
                      sent=sent, delivered=delivered, ticket_count=ticket_count)


def _detection_rates(cfg, flags, attackers, onset, first_delivery, adjacency):
    if not attackers or onset is None:
        tp_rate = float("nan")
        latency = float("nan")
    else:
        onset_slot = onset / cfg.slot_seconds
        watchers = set()
        for a in attackers:
            watchers.update(adjacency.get(a, ()))
        watchers -= attackers
        hits = set()
        for rec in flags:
            slot, observer, suspect = rec[1], rec[2], rec[3]
            if suspect in attackers and observer in watchers and slot >= int(onset_slot):
                hits.add(observer)
        tp_rate = len(hits) / len(watchers) if watchers else float("nan")
        latencies = []
        for a in attackers:
            t = first_delivery.get(a)
            if t is not None:
                latencies.append((t - onset) / cfg.slot_seconds)
        latency = sum(latencies) / len(latencies) if latencies else float("nan")

    offenders = set()
    for rec in flags:
        if rec[3] not in attackers:
            offenders.add(rec[2])
    fp_rate = len(offenders) / cfg.node_count
    return tp_rate, fp_rate, latency


def check_conservation(log):
    """sends == deliveries + drops + in-flight, from the log's own totals."""
    totals = next(log.iter_kind("totals"))
    _, sent, delivered, d_link, d_det, d_mal, d_rev, d_ttl, _, in_flight = totals
    return sent == delivered + d_link + d_det + d_mal + d_rev + d_ttl + in_flight


# ----------------------------------------------------------------- batches

def _run_one(args):
    config, window = args
    log = run_scenario(config)
    return summarize(log, window)


def run_batch(configs, window=None, jobs=1):
    """Run many scenarios, optionally in parallel worker processes."""
    tasks = [(cfg, window) for cfg in configs]
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))


def csv_row(scenario_id, config, summary):
    values = [scenario_id, config.seed, config.node_count,
              config.attack_kind,
              len(config.attacker_ids) or (config.attacker_count
                                           if config.attack_kind != "none" else 0),
              _fmt(config.alpha), _fmt(summary.data_loss),
              _fmt(summary.avg_e2e_delay), _fmt(summary.overhead_pct),
              _fmt(summary.detection_tp_rate), _fmt(summary.detection_fp_rate),
              _fmt(summary.detection_latency_slots)]
    return ",".join(str(v) for v in values)


def _fmt(x):
    return "%.6g" % x


def write_csv(path, rows):
    with open(path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(row + "\n")


def sweep_alpha(base_config, alphas, seeds=None, jobs=1, window=None):
    """Detection-reliability sweep: per alpha, the three attacks with a
    single attacker each, averaged into one (alpha, tp, fp) row.

    Returns (rows, table) where rows are per-run CSV strings and table is
    [(alpha, tp_rate, fp_rate)] with NaN-free means over attacks and seeds.
    """
    from .attacks import ATTACK_KINDS

    if seeds is None:
        seeds = [base_config.seed + i for i in range(10)]
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise ValueError("alpha %r outside (0,1)" % a)

    configs, keys = [], []
    for alpha in alphas:
        for kind in ATTACK_KINDS:
            for seed in seeds:
                cfg = replace(base_config, alpha=alpha, attack_kind=kind,
                              attacker_count=1, seed=seed)
                configs.append(cfg)
                keys.append((alpha, kind, seed))
    summaries = run_batch(configs, window=window, jobs=jobs)

    rows = []
    table = []
    for alpha in alphas:
        tps, fps = [], []
        for (a, kind, seed), cfg, s in zip(keys, configs, summaries):
            if a != alpha:
                continue
            rows.append(csv_row("sweep_a%g_%s" % (alpha, kind), cfg, s))
            if not math.isnan(s.detection_tp_rate):
                tps.append(s.detection_tp_rate)
            fps.append(s.detection_fp_rate)
        table.append((alpha,
                      sum(tps) / len(tps) if tps else float("nan"),
                      sum(fps) / len(fps) if fps else float("nan")))
    return rows, table


def suite_scenarios(base_config, seeds=None, multi_counts=(1, 3, 5),
                    sizes=(25, 50, 100), multi_size=50):
    """The full evaluation grid: no-attack baselines with the defense on and
    off, every attack at each network size with one attacker (defense on and
    off), and multi-attacker cases at ``multi_size`` nodes."""
    from .attacks import ATTACK_KINDS

    if seeds is None:
        seeds = [base_config.seed + i for i in range(10)]
    grid = []
    for n in sizes:
        for defense in (True, False):
            for seed in seeds:
                grid.append(("baseline_n%d_%s" % (n, "on" if defense else "off"),
                             replace(base_config, node_count=n, area_side=0.0,
                                     attack_kind="none", defense_enabled=defense,
                                     seed=seed)))
    for kind in ATTACK_KINDS:
        for n in sizes:
            for defense in (True, False):
                for seed in seeds:
                    grid.append(("%s_n%d_%s" % (kind, n, "on" if defense else "off"),
                                 replace(base_config, node_count=n, area_side=0.0,
                                         attack_kind=kind, attacker_count=1,
                                         defense_enabled=defense, seed=seed)))
    for kind in ATTACK_KINDS:
        for count in multi_counts:
            for seed in seeds:
                grid.append(("%s_multi%d_n%d" % (kind, count, multi_size),
                             replace(base_config, node_count=multi_size,
                                     area_side=0.0, attack_kind=kind,
                                     attacker_count=count, defense_enabled=True,
                                     seed=seed)))
    return grid


def run_suite(base_config, seeds=None, jobs=1, window=None, multi_counts=(1, 3, 5),
              sizes=(25, 50, 100), multi_size=50):
    """Execute the evaluation grid; returns (csv_rows, list of results).

    A failing run aborts the suite with the offending scenario id and config
    echoed in the exception.
    """
    grid = suite_scenarios(base_config, seeds, multi_counts, sizes, multi_size)
    rows, results = [], []
    configs = [cfg for _, cfg in grid]
    try:
        summaries = run_batch(configs, window=window, jobs=jobs)
    except Exception as exc:
        raise RuntimeError("suite run failed: %s" % exc) from exc
    for (sid, cfg), summary in zip(grid, summaries):
        rows.append(csv_row(sid, cfg, summary))
        results.append((sid, cfg, summary))
    return rows, results
