#!/usr/bin/env python3
"""
This module runs trade-off experiments: every (method, lambda, seed) cell is
trained or solved, evaluated and appended to results.csv.

Output directory layout:
    results.csv        one row per (method, lambda, seed), sorted by that key
    manifest.json      configuration echo, library version, timestamps
    checkpoints/       trained A2C networks, training manifests, learning curves
    logs/              one log file per cell
    plot.csv           written by emit_curve

Classes:
    CurveRow: One results.csv row.
    CellTask: Picklable description of one experiment cell.
"""

import json
from dataclasses import dataclass
from datetime import datetime
from multiprocessing import Pool
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Set, Tuple

import pandas as pd

from . import __version__
from .a2csolver import A2CSolver
from .errors import EmptySelectionError, NumericError
from .evaluator import evaluate_policy
from .experimentconfig import ExperimentConfig
from .logger import Logger
from .myopicsolver import MyopicSolver
from .seeding import cell_keys
from .tradeoff import frontier_from_curve, frontier_gap
from .worldloader import WorldLoader

RESULT_COLUMNS = ["method", "lambda", "seed", "avg_distortion", "avg_leakage_bits",
                  "stderr_leakage", "stderr_distortion"]
PLOT_COLUMNS = ["method", "lambda", "seeds", "avg_distortion", "avg_leakage_bits",
                "stderr_leakage", "stderr_distortion"]
RESULTS_FILE = "results.csv"
MANIFEST_FILE = "manifest.json"
PLOT_FILE = "plot.csv"

# methods whose rows a configured method produces
OUTPUT_METHODS = {"a2c": ("a2c",), "myopic": ("myopic", "myopic-history")}

Key = Tuple[str, float, int]


@dataclass(frozen=True)
class CurveRow:
    method: str
    lam: float
    seed: int
    avg_distortion: float
    avg_leakage_bits: float
    stderr_leakage: float = 0.0
    stderr_distortion: float = 0.0

    def to_record(self) -> List[object]:
        return [self.method, self.lam, self.seed, self.avg_distortion, self.avg_leakage_bits,
                self.stderr_leakage, self.stderr_distortion]


@dataclass(frozen=True)
class CellTask:
    config: ExperimentConfig
    method: str
    lam: float
    seed: int

    @property
    def log_name(self) -> str:
        return f"{self.method}-lam{self.lam:g}-seed{self.seed}"


def run_cell(task: CellTask) -> List[CurveRow]:
    """Trains or solves one cell and evaluates it; top-level so worker processes can run it"""
    cfg = task.config
    out = Path(cfg.out)
    logger = Logger(task.log_name)
    world = WorldLoader(cfg.side).get_world(cfg.world)
    rows: List[CurveRow] = []
    try:
        if task.method == "a2c":
            keys = cell_keys("a2c", task.lam)
            solver = A2CSolver("A2C", logger, world, cfg.train_config(task.lam, task.seed),
                               keys=keys + (0,), checkpoint_dir=out / "checkpoints")
            mechanism = solver.solve()
            mechanism.save(out / "checkpoints", stem=task.log_name)
            result = evaluate_policy(mechanism.provider(cfg.eval_mode), world, cfg.horizon, cfg.rollouts,
                                     task.lam, cfg.dbar, task.seed, keys + (1,))
            mechanism.set_quality(result.avg_leakage_bits, result.avg_distortion)
            rows.append(CurveRow("a2c", task.lam, task.seed, result.avg_distortion, result.avg_leakage_bits,
                                 result.stderr_leakage, result.stderr_distortion))
        else:
            myopic_solver = MyopicSolver("Myopic", logger, world, cfg.horizon, lam=task.lam,
                                           tol=cfg.ba_tol, max_iter=cfg.ba_max_iter)
            myopic = myopic_solver.solve()
            leakage, distortion = myopic.get_quality()
            rows.append(CurveRow("myopic", task.lam, task.seed, distortion, leakage))
            result = evaluate_policy(myopic.provider(), world, cfg.horizon, cfg.rollouts, task.lam, cfg.dbar,
                                     task.seed, cell_keys("myopic-history", task.lam))
            rows.append(CurveRow("myopic-history", task.lam, task.seed, result.avg_distortion,
                                 result.avg_leakage_bits, result.stderr_leakage, result.stderr_distortion))
        for row in rows:
            logger.info(row.method, f"lambda={row.lam:g} seed={row.seed}: leakage={row.avg_leakage_bits:.4f} "
                                    f"bits, distortion={row.avg_distortion:.4f}")
    finally:
        logger.print_logs_to_file(out / "logs")
    return rows


def read_results(file_path: Path) -> pd.DataFrame:
    if not file_path.is_file():
        return pd.DataFrame(columns=RESULT_COLUMNS)
    return pd.read_csv(file_path)


def write_results(results: pd.DataFrame, file_path: Path) -> None:
    """Sorted by (method, lambda, seed) so reruns are byte-identical"""
    ordered = results[RESULT_COLUMNS].sort_values(["method", "lambda", "seed"], kind="stable")
    file_path.parent.mkdir(parents=True, exist_ok=True)
    ordered.to_csv(file_path, index=False, lineterminator="\n", encoding="utf-8")


def _existing_keys(results: pd.DataFrame) -> Set[Key]:
    return {(str(m), float(lam), int(s)) for m, lam, s in
            zip(results["method"], results["lambda"], results["seed"])}


def _cell_done(task: CellTask, keys: Set[Key]) -> bool:
    return all((m, float(task.lam), task.seed) in keys for m in OUTPUT_METHODS[task.method])


def _drop_cell(results: pd.DataFrame, task: CellTask) -> pd.DataFrame:
    hit = (results["method"].isin(OUTPUT_METHODS[task.method]) & (results["lambda"] == task.lam)
           & (results["seed"] == task.seed))
    return results[~hit]


def _run_tasks(tasks: Sequence[CellTask], workers: int) -> Iterator[Tuple[CellTask, List[CurveRow]]]:
    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            yield task, run_cell(task)
        return
    with Pool(min(workers, len(tasks))) as pool:
        yield from zip(tasks, pool.imap(run_cell, tasks))


def run_experiment(cfg: ExperimentConfig, force: bool = False, logger: Optional[Logger] = None) -> Path:
    """Runs every missing (method, lambda, seed) cell and returns the output directory.

    Results are written after each cell, so a NumericError leaves the finished
    cells in results.csv before it propagates.
    """
    logger = logger or Logger("Experiment")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    results_path = out / RESULTS_FILE
    results = read_results(results_path)
    done = _existing_keys(results)

    tasks: List[CellTask] = []
    skipped = 0
    for method in cfg.methods:
        for lam in cfg.lambdas:
            for seed in cfg.seeds:
                task = CellTask(cfg, method, float(lam), int(seed))
                if not force and _cell_done(task, done):
                    skipped += 1
                    continue
                results = _drop_cell(results, task)
                tasks.append(task)
    logger.info("Experiment", f"world '{cfg.world}': {len(tasks)} cells to run, {skipped} already present")

    started = datetime.now().isoformat(timespec="seconds")
    completed = 0
    try:
        for task, rows in _run_tasks(tasks, cfg.workers):
            new_rows = pd.DataFrame([r.to_record() for r in rows], columns=RESULT_COLUMNS)
            results = new_rows if results.empty else pd.concat([results, new_rows], ignore_index=True)
            write_results(results, results_path)
            completed += 1
            logger.info("Experiment", f"cell {task.log_name} done ({completed}/{len(tasks)})")
    except NumericError as e:
        logger.error(f"numeric failure after {completed} cells: {e}")
        raise
    finally:
        if results.empty:
            write_results(results, results_path)
        manifest = {"version": __version__, "config": cfg.to_dict(), "started": started,
                    "finished": datetime.now().isoformat(timespec="seconds"),
                    "cells_run": completed, "cells_skipped": skipped}
        (out / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return out


def aggregate_curve(results: pd.DataFrame, methods: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Mean and standard error across seeds per (method, lambda), sorted by distortion"""
    selected = results if not methods else results[results["method"].isin(list(methods))]
    if selected.empty:
        raise EmptySelectionError(f"no result rows for methods {list(methods or [])}")
    grouped = selected.groupby(["method", "lambda"], sort=True)
    curve = grouped.agg(seeds=("seed", "count"), avg_distortion=("avg_distortion", "mean"),
                        avg_leakage_bits=("avg_leakage_bits", "mean"),
                        sd_leakage=("avg_leakage_bits", "std"),
                        sd_distortion=("avg_distortion", "std")).reset_index()
    root = curve["seeds"] ** 0.5
    curve["stderr_leakage"] = (curve["sd_leakage"] / root).fillna(0.0)
    curve["stderr_distortion"] = (curve["sd_distortion"] / root).fillna(0.0)
    curve = curve.sort_values(["method", "avg_distortion"], kind="stable")
    return curve[PLOT_COLUMNS].reset_index(drop=True)


def emit_curve(results_path: Path, methods: Optional[Sequence[str]] = None, out_path: Optional[Path] = None,
               logger: Optional[Logger] = None) -> Path:
    """Writes plot.csv next to results.csv (or to out_path)

    Raises:
        EmptySelectionError: if results.csv is missing or the filter selects no rows.
    """
    if not results_path.is_file():
        raise EmptySelectionError(f"results file '{results_path}' does not exist")
    curve = aggregate_curve(pd.read_csv(results_path), methods)
    target = out_path or results_path.parent / PLOT_FILE
    curve.to_csv(target, index=False, lineterminator="\n", encoding="utf-8")
    if logger is not None:
        present = set(curve["method"])
        for other in ("myopic", "myopic-history"):
            if "a2c" in present and other in present:
                try:
                    gap = frontier_gap(frontier_from_curve(curve, "a2c"), frontier_from_curve(curve, other))
                except ValueError as e:
                    logger.warning(f"no frontier gap a2c vs {other}: {e}")
                    continue
                logger.info("Curve", f"a2c - {other} on distortion [{gap.low:.3f}, {gap.high:.3f}]: "
                                      f"max gap {gap.max_gap:+.4f}, mean gap {gap.mean_gap:+.4f} bits")
    return target


def cell_rows(results: pd.DataFrame, key: Key) -> List[CurveRow]:
    method, lam, seed = key
    hit = results[(results["method"] == method) & (results["lambda"] == lam) & (results["seed"] == seed)]
    return [CurveRow(str(r["method"]), float(r["lambda"]), int(r["seed"]), float(r["avg_distortion"]),
                     float(r["avg_leakage_bits"]), float(r["stderr_leakage"]), float(r["stderr_distortion"]))
            for _, r in hit.iterrows()]
