"""Figure rendering for the report path.

Every CLI command that emits a delimited report can also render the matching
matplotlib figures next to it: a per-run timeline (delivery ratio and delay
over time), the detection-reliability curve for alpha sweeps, and grouped
bars for suite results.  Files are written, never shown.
"""

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def plot_run_timeline(log, path, bucket_s=60.0):
    """Delivery ratio and mean delay per time bucket, with attack onset marked."""
    cfg = log.config
    n_buckets = max(1, int(math.ceil(cfg.sim_duration / bucket_s)))
    sent = [0] * n_buckets
    delivered = [0] * n_buckets
    delay_sum = [0.0] * n_buckets
    onset = None
    for rec in log.records:
        if rec[0] == "send":
            b = min(int(rec[1] // bucket_s), n_buckets - 1)
            sent[b] += 1
        elif rec[0] == "deliver":
            b = min(int(rec[1] // bucket_s), n_buckets - 1)
            delivered[b] += 1
            delay_sum[b] += rec[4]
        elif rec[0] == "attack_on" and onset is None:
            onset = rec[1]

    t = [(i + 0.5) * bucket_s / 60.0 for i in range(n_buckets)]
    loss = [100.0 * (1.0 - d / s) if s else float("nan")
            for s, d in zip(sent, delivered)]
    delay = [1000.0 * ds / d if d else float("nan")
             for ds, d in zip(delay_sum, delivered)]

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.plot(t, loss, color="firebrick", lw=1.2)
    ax1.set_ylabel("data loss (%)")
    ax1.set_ylim(bottom=0)
    ax2.plot(t, delay, color="steelblue", lw=1.2)
    ax2.set_ylabel("mean E2E delay (ms)")
    ax2.set_xlabel("time (min)")
    for ax in (ax1, ax2):
        ax.grid(alpha=0.3)
        if onset is not None:
            ax.axvline(onset / 60.0, color="gray", ls="--", lw=1, label="attack onset")
    if onset is not None:
        ax1.legend(loc="upper left", fontsize=8)
    ax1.set_title("%d nodes, attack=%s, seed=%d"
                  % (cfg.node_count, cfg.attack_kind, cfg.seed))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_alpha_sweep(table, path):
    """Reliability curve: TP and FP rate against the detection threshold."""
    alphas = [row[0] for row in table]
    tp = [100.0 * row[1] for row in table]
    fp = [100.0 * row[2] for row in table]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(alphas, tp, "o-", color="seagreen", label="detection rate")
    ax.plot(alphas, fp, "s-", color="firebrick", label="false positives")
    ax.set_xlabel(r"detection threshold $\alpha$")
    ax.set_ylabel("rate (%)")
    ax.set_ylim(-2, 105)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_suite(results, path):
    """Grouped bars of loss / delay / overhead per scenario id (seed means)."""
    groups = {}
    for sid, _cfg, summary in results:
        groups.setdefault(sid, []).append(summary)

    labels = list(groups)
    loss = [100.0 * _mean([s.data_loss for s in groups[k]]) for k in labels]
    delay = [1000.0 * _mean([s.avg_e2e_delay for s in groups[k]]) for k in labels]
    ovh = [_mean([s.overhead_pct for s in groups[k]]) for k in labels]

    fig, axes = plt.subplots(3, 1, figsize=(max(8, 0.45 * len(labels)), 9),
                             sharex=True)
    for ax, series, name, color in zip(
            axes, (loss, delay, ovh),
            ("data loss (%)", "mean delay (ms)", "overhead (%)"),
            ("firebrick", "steelblue", "darkorange")):
        ax.bar(range(len(labels)), series, color=color)
        ax.set_ylabel(name)
        ax.grid(alpha=0.3, axis="y")
    axes[-1].set_xticks(range(len(labels)))
    axes[-1].set_xticklabels(labels, rotation=90, fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _mean(values):
    values = [v for v in values if not math.isnan(v)]
    return sum(values) / len(values) if values else float("nan")
