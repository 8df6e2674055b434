#!/usr/bin/env python3
"""
Unit-tests for the command-line entry point.
"""
import json
from pathlib import Path
from typing import Any

import pandas as pd
import pytest

import locpriv.__main__ as cli
from locpriv.errors import NumericError
from locpriv.experimentconfig import ExperimentConfig
from locpriv.logger import Logger
from locpriv.releasekernel import Belief, ReleaseKernel
from locpriv.transitions import TransitionMatrix


def _write_config(tmp_path: Path, **overrides: Any) -> Path:
    data = {"world": "q0", "side": 2, "lambdas": [0.0], "seeds": [0], "horizon": 3, "episodes": 2,
            "rollouts": 2, "methods": ["myopic"], "out": str(tmp_path / "out")}
    data.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_run_and_curve(tmp_path: Path) -> None:
    """run writes results.csv, curve turns it into plot.csv"""
    config = _write_config(tmp_path)
    assert cli.main(["run", "--config", str(config)]) == cli.EXIT_OK
    assert (tmp_path / "out" / "results.csv").is_file()
    assert cli.main(["curve", "--config", str(config), "--method", "myopic"]) == cli.EXIT_OK
    assert set(pd.read_csv(tmp_path / "out" / "plot.csv")["method"]) == {"myopic"}


def test_command_line_overrides(tmp_path: Path) -> None:
    """--seed, --lambda, --world and --out replace the configured values"""
    args = cli.build_parser().parse_args(["run", "--config", str(_write_config(tmp_path)), "--seed", "4",
                                          "--lambda", "2.5", "--world", "q1", "--out", "elsewhere"])
    cfg = cli.resolve_config(args)
    assert (cfg.seeds, cfg.lambdas, cfg.world, cfg.out) == ([4], [2.5], "q1", "elsewhere")
    default = cli.resolve_config(cli.build_parser().parse_args(["run", "--profile", "paper"]))
    assert default == ExperimentConfig.from_profile("paper")


def test_train_then_evaluate(tmp_path: Path) -> None:
    """train writes a checkpoint that evaluate can replay"""
    config = _write_config(tmp_path, episodes=1)
    assert cli.main(["train", "--config", str(config), "--lambda", "1"]) == cli.EXIT_OK
    checkpoint = tmp_path / "out" / "checkpoints" / "a2c-lam1-seed0.ckpt.json"
    assert checkpoint.is_file()
    assert cli.main(["evaluate", "--config", str(config), "--checkpoint", str(checkpoint)]) == cli.EXIT_OK
    missing = tmp_path / "none.ckpt.json"
    assert cli.main(["evaluate", "--config", str(config), "--checkpoint", str(missing)]) == cli.EXIT_CONFIG


def test_myopic_command(tmp_path: Path) -> None:
    """myopic writes one row per lambda"""
    config = _write_config(tmp_path, lambdas=[0.0, 1.0])
    assert cli.main(["myopic", "--config", str(config)]) == cli.EXIT_OK
    rows = pd.read_csv(tmp_path / "out" / "myopic.csv")
    assert rows["lambda"].tolist() == [0.0, 1.0]


def test_configuration_errors_exit_with_two(tmp_path: Path) -> None:
    """Invalid lambdas, missing files and empty curves are configuration errors"""
    config = _write_config(tmp_path)
    assert cli.main(["run", "--config", str(config), "--lambda", "25"]) == cli.EXIT_CONFIG
    assert cli.main(["run", "--config", str(tmp_path / "missing.json")]) == cli.EXIT_CONFIG
    assert cli.main(["curve", "--config", str(config)]) == cli.EXIT_CONFIG
    assert cli.main(["run", "--config", str(config), "--world", str(tmp_path / "nope.json")]) == cli.EXIT_CONFIG


def test_numeric_failure_exits_with_three(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """A NumericError escaping the experiment maps to exit code 3"""
    def diverge(cfg: ExperimentConfig, force: bool = False, logger: Any = None) -> Path:
        raise NumericError("diverged")

    monkeypatch.setattr(cli, "run_experiment", diverge)
    assert cli.main(["run", "--config", str(_write_config(tmp_path))]) == cli.EXIT_NUMERIC


def test_broken_filter_fails_the_oracle_check(logger: Logger) -> None:
    """A filter that ignores the release is reported as a property failure"""
    def ignore_release(belief: Belief, kernel: ReleaseKernel, q: TransitionMatrix, released: int) -> Belief:
        return Belief.normalized(belief.probs @ q.q)

    assert cli.run_oracle_check(logger, filter_fn=ignore_release) == cli.EXIT_PROPERTY
    assert any("filter consistency" in line and "[ERROR]" in line for line in logger.logs)


@pytest.mark.slow
def test_oracle_check_passes() -> None:
    """The shipped belief filter passes every property"""
    assert cli.main(["oracle-check"]) == cli.EXIT_OK
