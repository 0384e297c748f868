"""Command-line entry point.

Verbs: run one scenario, run the evaluation suite, sweep the detection
threshold, validate a config without simulating, or replay a stored run log
into a summary.  Reports land under --out as CSV plus rendered figures; exit
status is 0 on success, 1 for configuration errors, 2 for runtime failures.
"""

import argparse
import os
import sys

from .config import ConfigError, ScenarioConfig, apply_overrides, load_config
from .metrics import (csv_row, run_suite, summarize, sweep_alpha, write_csv)
from .runlog import RunLog
from .simulator import run_scenario


def _add_common(parser):
    parser.add_argument("--config", help="flat key=value scenario file")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--out", default=os.environ.get("SENTRYNET_OUT", "results"),
                        help="output directory (default: $SENTRYNET_OUT or ./results)")
    parser.add_argument("--no-plots", action="store_true",
                        help="skip figure rendering")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sentrynet",
        description="WSN trust-based routing defense simulator")
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="execute one scenario")
    _add_common(p_run)

    p_suite = sub.add_parser("suite", help="run the full evaluation grid")
    _add_common(p_suite)
    p_suite.add_argument("--seeds", type=int, default=10,
                         help="seeds per scenario cell (default 10)")
    p_suite.add_argument("--jobs", type=int, default=1,
                         help="parallel worker processes")

    p_sweep = sub.add_parser("sweep-alpha", help="detection-reliability sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--alphas", default="0.5,0.6,0.7,0.75,0.8,0.9",
                         help="comma-separated thresholds")
    p_sweep.add_argument("--seeds", type=int, default=10)
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_val = sub.add_parser("validate-config", help="check a config and exit")
    p_val.add_argument("--config", required=True)
    p_val.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE")

    p_replay = sub.add_parser("replay-log", help="recompute a summary from a run log")
    p_replay.add_argument("log", help="path to a stored .jsonl run log")
    p_replay.add_argument("--out", default=None,
                          help="write the summary CSV here as well")
    return parser


def _load(args):
    if args.config:
        config = load_config(args.config, args.overrides)
    else:
        config = apply_overrides(ScenarioConfig(), args.overrides).validate()
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
        config.validate()
    return config


def _print_summary(summary):
    print("data_loss          %.4f" % summary.data_loss)
    print("avg_e2e_delay_s    %.6f" % summary.avg_e2e_delay)
    print("overhead_pct       %.4f" % summary.overhead_pct)
    print("tp_rate            %.4f" % summary.detection_tp_rate)
    print("fp_rate            %.4f" % summary.detection_fp_rate)
    print("detect_latency     %.3f slots" % summary.detection_latency_slots)
    print("sent/delivered     %d/%d" % (summary.sent, summary.delivered))
    print("tickets_delivered  %d" % summary.ticket_count)


def cmd_run(args):
    config = _load(args)
    os.makedirs(args.out, exist_ok=True)
    log = run_scenario(config)
    summary = summarize(log)
    tag = "run_seed%d" % config.seed
    log_path = os.path.join(args.out, tag + ".jsonl")
    log.save(log_path)
    write_csv(os.path.join(args.out, tag + ".csv"),
              [csv_row(tag, config, summary)])
    if not args.no_plots:
        from .plots import plot_run_timeline
        plot_run_timeline(log, os.path.join(args.out, tag + ".png"))
    _print_summary(summary)
    print("log digest         %s" % log.digest())
    return 0


def cmd_suite(args):
    config = _load(args)
    os.makedirs(args.out, exist_ok=True)
    seeds = [config.seed + i for i in range(args.seeds)]
    rows, results = run_suite(config, seeds=seeds, jobs=args.jobs)
    write_csv(os.path.join(args.out, "suite.csv"), rows)
    if not args.no_plots:
        from .plots import plot_suite
        plot_suite(results, os.path.join(args.out, "suite.png"))
    print("suite: %d runs -> %s" % (len(rows), os.path.join(args.out, "suite.csv")))
    return 0


def cmd_sweep(args):
    config = _load(args)
    os.makedirs(args.out, exist_ok=True)
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError:
        raise ConfigError("--alphas expects comma-separated numbers") from None
    seeds = [config.seed + i for i in range(args.seeds)]
    rows, table = sweep_alpha(config, alphas, seeds=seeds, jobs=args.jobs)
    write_csv(os.path.join(args.out, "sweep_alpha.csv"), rows)
    curve_path = os.path.join(args.out, "sweep_alpha_curve.csv")
    with open(curve_path, "w") as fh:
        fh.write("alpha,tp_rate,fp_rate\n")
        for alpha, tp, fp in table:
            fh.write("%.6g,%.6g,%.6g\n" % (alpha, tp, fp))
    if not args.no_plots:
        from .plots import plot_alpha_sweep
        plot_alpha_sweep(table, os.path.join(args.out, "sweep_alpha.png"))
    for alpha, tp, fp in table:
        print("alpha=%.2f  tp=%.4f  fp=%.4f" % (alpha, tp, fp))
    return 0


def cmd_validate(args):
    load_config(args.config, args.overrides)
    print("config ok")
    return 0


def cmd_replay(args):
    log = RunLog.load(args.log)
    summary = summarize(log)
    _print_summary(summary)
    print("log digest         %s" % log.digest())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_csv(os.path.join(args.out, "replay.csv"),
                  [csv_row("replay", log.config, summary)])
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "suite": cmd_suite, "sweep-alpha": cmd_sweep,
                "validate-config": cmd_validate, "replay-log": cmd_replay}
    try:
        return handlers[args.verb](args)
    except (ConfigError, FileNotFoundError) as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print("runtime failure: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
