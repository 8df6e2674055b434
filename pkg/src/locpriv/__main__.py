#!/usr/bin/env python3
"""
Command-line entry point:

    python -m locpriv <command> [options]

Commands:
    train         train one A2C mechanism and write its checkpoint and learning curve
    evaluate      evaluate a checkpoint by roll-outs
    myopic        solve the myopic mechanism over the lambda sweep
    curve         aggregate results.csv into plot.csv
    oracle-check  run the exact-enumeration property suite
    run           run the full experiment

Exit codes: 0 success, 1 property failure, 2 configuration error, 3 numeric failure.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .a2cmechanism import A2CMechanism
from .a2csolver import A2CSolver
from .beliefmdp import belief_update
from .errors import ConfigError, DomainError, NumericError
from .evaluator import evaluate_policy
from .exactoracle import FilterFn
from .experimentconfig import PROFILES, ExperimentConfig, load_config
from .experimentrunner import RESULTS_FILE, emit_curve, run_experiment
from .logger import Logger
from .myopicsolver import MyopicSolver
from .oraclesuite import OracleSuite
from .seeding import cell_keys
from .worldloader import WorldLoader

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="experiment configuration JSON file")
    common.add_argument("--profile", choices=sorted(PROFILES), help="scale profile (default: desk)")
    common.add_argument("--seed", type=int, help="run a single seed")
    common.add_argument("--lambda", dest="lam", type=float, help="run a single Lagrange multiplier")
    common.add_argument("--world", help="q0, q1, q2 or a transition-matrix JSON file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--force", action="store_true", help="recompute cells already in results.csv")
    common.add_argument("--workers", type=int, help="worker processes for independent cells")

    parser = argparse.ArgumentParser(prog="locpriv", description="History-aware location-privacy mechanisms")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("train", parents=[common], help="train one A2C mechanism")
    evaluate = commands.add_parser("evaluate", parents=[common], help="evaluate a trained checkpoint")
    evaluate.add_argument("--checkpoint", type=Path, required=True, help="checkpoint written by train")
    commands.add_parser("myopic", parents=[common], help="solve the myopic mechanism")
    curve = commands.add_parser("curve", parents=[common], help="aggregate results.csv into plot.csv")
    curve.add_argument("--method", action="append", help="restrict to a method (repeatable)")
    commands.add_parser("oracle-check", parents=[common], help="run the exact-enumeration properties")
    commands.add_parser("run", parents=[common], help="run the full experiment")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        cfg = load_config(args.config, args.profile)
    else:
        cfg = ExperimentConfig.from_profile(args.profile or "desk")
    return cfg.with_overrides(world=args.world, out=args.out, workers=args.workers,
                              seeds=[args.seed] if args.seed is not None else None,
                              lambdas=[args.lam] if args.lam is not None else None)


def run_oracle_check(logger: Logger, seed: int = 0, filter_fn: FilterFn = belief_update) -> int:
    report = OracleSuite(logger, seed=seed, filter_fn=filter_fn).run_all()
    for line in report.to_text().splitlines():
        logger.info("oracle-check", line)
    if not report.passed:
        logger.error(f"failing properties: {', '.join(report.failing())}")
        return EXIT_PROPERTY
    return EXIT_OK


def _train(cfg: ExperimentConfig, logger: Logger) -> int:
    world = WorldLoader(cfg.side).get_world(cfg.world)
    out = Path(cfg.out)
    for lam in cfg.lambdas:
        for seed in cfg.seeds:
            solver = A2CSolver("A2C", logger, world, cfg.train_config(lam, seed),
                               keys=cell_keys("a2c", lam) + (0,), checkpoint_dir=out / "checkpoints")
            path = solver.solve().save(out / "checkpoints", stem=f"a2c-lam{lam:g}-seed{seed}")
            logger.info("train", f"checkpoint written to {path}")
    return EXIT_OK


def _evaluate(cfg: ExperimentConfig, checkpoint: Path, logger: Logger) -> int:
    world = WorldLoader(cfg.side).get_world(cfg.world)
    mechanism = A2CMechanism.load(checkpoint, world)
    lam = cfg.lambdas[0] if len(cfg.lambdas) == 1 else mechanism.lam
    for seed in cfg.seeds:
        result = evaluate_policy(mechanism.provider(cfg.eval_mode), world, cfg.horizon, cfg.rollouts,
                                 lam, cfg.dbar, seed, cell_keys("a2c", lam) + (1,))
        logger.info("evaluate", f"seed {seed}: leakage={result.avg_leakage_bits:.4f} "
                                f"+- {result.stderr_leakage:.4f} bits, distortion={result.avg_distortion:.4f} "
                                f"+- {result.stderr_distortion:.4f}")
    return EXIT_OK


def _myopic(cfg: ExperimentConfig, logger: Logger) -> int:
    world = WorldLoader(cfg.side).get_world(cfg.world)
    rows = []
    for lam in cfg.lambdas:
        mechanism = MyopicSolver("Myopic", logger, world, cfg.horizon, lam=lam, tol=cfg.ba_tol,
                                 max_iter=cfg.ba_max_iter).solve()
        leakage, distortion = mechanism.get_quality()
        rows.append({"lambda": lam, "lambda_ba": mechanism.lambda_ba, "avg_distortion": distortion,
                     "avg_leakage_bits": leakage, "converged": mechanism.all_converged})
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(out / "myopic.csv", index=False, lineterminator="\n")
    logger.info("myopic", f"{len(rows)} sweep points written to {out / 'myopic.csv'}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = Logger("locpriv")
    try:
        if args.command == "oracle-check":
            return run_oracle_check(logger, seed=args.seed or 0)
        cfg = resolve_config(args)
        if args.command == "train":
            return _train(cfg, logger)
        if args.command == "evaluate":
            return _evaluate(cfg, args.checkpoint, logger)
        if args.command == "myopic":
            return _myopic(cfg, logger)
        if args.command == "curve":
            path = emit_curve(Path(cfg.out) / RESULTS_FILE, args.method, logger=logger)
            logger.info("curve", f"plot data written to {path}")
            return EXIT_OK
        out = run_experiment(cfg, force=args.force, logger=logger)
        logger.info("run", f"results in {out}")
        return EXIT_OK
    except ConfigError as e:
        logger.error(f"configuration error: {e}")
        return EXIT_CONFIG
    except NumericError as e:
        logger.error(f"numeric failure: {e}")
        return EXIT_NUMERIC
    except DomainError as e:
        logger.error(f"invalid input: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
