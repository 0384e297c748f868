"""Command-line interface tests."""

import os

import pytest

from sentrynet.cli import main

FAST = ("node_count=9\narea_side=100\nsim_duration=300\nseed=5\n"
        "measure_skip=60\n")


@pytest.fixture
def fast_cfg(tmp_path):
    path = tmp_path / "fast.cfg"
    path.write_text(FAST)
    return str(path)


def test_run_happy_path_writes_outputs(tmp_path, fast_cfg, capsys):
    out = str(tmp_path / "results")
    status = main(["run", "--config", fast_cfg, "--seed", "7", "--out", out])
    assert status == 0
    assert os.path.exists(os.path.join(out, "run_seed7.jsonl"))
    assert os.path.exists(os.path.join(out, "run_seed7.csv"))
    assert os.path.exists(os.path.join(out, "run_seed7.png"))
    assert os.path.getsize(os.path.join(out, "run_seed7.png")) > 0
    captured = capsys.readouterr()
    assert "data_loss" in captured.out
    assert "log digest" in captured.out


def test_run_without_plots(tmp_path, fast_cfg):
    out = str(tmp_path / "results")
    assert main(["run", "--config", fast_cfg, "--out", out, "--no-plots"]) == 0
    assert not os.path.exists(os.path.join(out, "run_seed5.png"))


def test_validation_failure_exits_one(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("tx_range = -1\n")
    assert main(["run", "--config", str(path)]) == 1
    assert "tx_range" in capsys.readouterr().err


def test_unknown_override_exits_one(fast_cfg, capsys):
    assert main(["run", "--config", fast_cfg, "--set", "nope=1"]) == 1
    assert "nope" in capsys.readouterr().err


def test_missing_config_exits_one(capsys):
    assert main(["run", "--config", "/does/not/exist.cfg"]) == 1


def test_validate_config_never_simulates(fast_cfg, capsys, monkeypatch):
    import sentrynet.cli as cli

    def boom(*a, **k):
        raise AssertionError("validate-config must not run a simulation")

    monkeypatch.setattr(cli, "run_scenario", boom)
    assert main(["validate-config", "--config", fast_cfg]) == 0
    assert "config ok" in capsys.readouterr().out


def test_override_precedence_end_to_end(tmp_path, fast_cfg, capsys):
    out = str(tmp_path / "results")
    status = main(["run", "--config", fast_cfg, "--set", "seed=9",
                   "--out", out, "--no-plots"])
    assert status == 0
    assert os.path.exists(os.path.join(out, "run_seed9.csv"))


def test_replay_matches_original_bitwise(tmp_path, fast_cfg, capsys):
    out = str(tmp_path / "results")
    assert main(["run", "--config", fast_cfg, "--out", out, "--no-plots"]) == 0
    first = capsys.readouterr().out
    log_path = os.path.join(out, "run_seed5.jsonl")
    replay_out = str(tmp_path / "replay")
    assert main(["replay-log", log_path, "--out", replay_out]) == 0
    second = capsys.readouterr().out
    assert first.splitlines()[:9] == second.splitlines()[:9]
    orig_csv = open(os.path.join(out, "run_seed5.csv")).read()
    replay_csv = open(os.path.join(replay_out, "replay.csv")).read()
    assert orig_csv.split("\n")[1].split(",")[1:] == \
        replay_csv.split("\n")[1].split(",")[1:]


def test_sweep_alpha_writes_curve(tmp_path, fast_cfg, capsys):
    out = str(tmp_path / "sweep")
    status = main(["sweep-alpha", "--config", fast_cfg,
                   "--set", "attack_start=120",
                   "--alphas", "0.7,0.8", "--seeds", "1", "--out", out])
    assert status == 0
    curve = open(os.path.join(out, "sweep_alpha_curve.csv")).read().splitlines()
    assert curve[0] == "alpha,tp_rate,fp_rate"
    assert len(curve) == 3
    assert os.path.exists(os.path.join(out, "sweep_alpha.csv"))
    assert os.path.exists(os.path.join(out, "sweep_alpha.png"))


def test_suite_micro(tmp_path, fast_cfg, monkeypatch):
    import sentrynet.cli as cli
    # shrink the grid so the CLI path stays testable at unit scale
    orig = cli.run_suite

    def tiny_suite(config, seeds=None, jobs=1):
        return orig(config, seeds=seeds, jobs=jobs, multi_counts=(1,),
                    sizes=(9,), multi_size=9)

    monkeypatch.setattr(cli, "run_suite", tiny_suite)
    out = str(tmp_path / "suite")
    status = main(["suite", "--config", fast_cfg, "--set", "attack_start=120",
                   "--seeds", "1", "--out", out])
    assert status == 0
    assert os.path.exists(os.path.join(out, "suite.csv"))
    assert os.path.exists(os.path.join(out, "suite.png"))


def test_bad_alphas_exit_one(fast_cfg, capsys):
    assert main(["sweep-alpha", "--config", fast_cfg, "--alphas", "abc"]) == 1
