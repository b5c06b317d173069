import copy
import csv
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional

from sklearn.model_selection import ParameterGrid

from config import Config
from core.dynamics import run
from core.errors import ConfigError, InputMissingError, MalformedInputError, safe_action
from core.run_config import RULES_KEYS, RunConfig
from core.seeding import numpy_rng, point_seed
from metrics.metrics_report import MetricsReport, compute_report
from reporting.comparison import COMPARED_METRICS, check_weights, compare, default_weights, load_report
from reporting.edge_list import load_edge_list
from reporting.report_writer import format_value

logger = logging.getLogger(__name__)

SWEEP_KEYS = ("nu", "psi", "p_random", "p_triadic", "p_cumulative", "p_distance", "top_k", "budget_split")
SPEC_KEYS = ("grid", "target", "target_format", "target_report", "weights", "max_evaluations",
             "parallelism", "subsample", "common_seed", "base")


@dataclass
class SweepSpec:
    grid: Dict[str, List[Any]] = field(default_factory=dict)
    target: Optional[str] = None          # edge list of the network to calibrate against
    target_format: str = "whitespace"
    target_report: Optional[str] = None   # or a report file of its summary values
    weights: Dict[str, float] = field(default_factory=default_weights)
    max_evaluations: int = Config.SWEEP_MAX_EVALUATIONS
    parallelism: int = 1
    subsample: bool = False    # draw max_evaluations points at random instead of taking the first ones
    common_seed: bool = False  # every point reuses the base seed instead of a per-point seed
    base: RunConfig = field(default_factory=RunConfig)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepSpec":
        if not isinstance(data, dict):
            raise ConfigError("sweep: expected a JSON object")
        unknown = [f"sweep.{key}: unknown key" for key in data if key not in SPEC_KEYS]
        if unknown:
            raise ConfigError(unknown)
        values = dict(data)
        values["base"] = RunConfig.from_dict(values.get("base", {}))
        if "weights" in values:
            values["weights"] = dict(values["weights"])
        return cls(**values)

    @classmethod
    def load(cls, path) -> "SweepSpec":
        if not os.path.exists(path):
            raise InputMissingError(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise MalformedInputError(path, e.lineno, f"invalid JSON: {e.msg}") from e
        spec = cls.from_dict(data)
        # Relative target paths are taken from the spec file's directory.
        root = os.path.dirname(os.path.abspath(path))
        for name in ("target", "target_report"):
            value = getattr(spec, name)
            if value and not os.path.isabs(value):
                setattr(spec, name, os.path.join(root, value))
        return spec

    def problems(self) -> List[str]:
        found = []
        if not self.grid:
            found.append("sweep.grid: must name at least one parameter")
        for key, values in self.grid.items():
            if key not in SWEEP_KEYS:
                found.append(f"sweep.grid.{key}: not a sweepable parameter (known: {', '.join(SWEEP_KEYS)})")
            elif not isinstance(values, list) or not values:
                found.append(f"sweep.grid.{key}: must be a non-empty list of values")
        if (self.target is None) == (self.target_report is None):
            found.append("sweep.target: give exactly one of target (edge list) or target_report")
        if not isinstance(self.max_evaluations, int) or self.max_evaluations < 1:
            found.append(f"sweep.max_evaluations: must be >= 1, got {self.max_evaluations!r}")
        if not isinstance(self.parallelism, int) or self.parallelism < 1:
            found.append(f"sweep.parallelism: must be >= 1, got {self.parallelism!r}")
        found.extend(f"sweep.{problem}" for problem in check_weights(self.weights))
        found.extend(self.base.problems())
        return found

    def validate(self) -> "SweepSpec":
        found = self.problems()
        if found:
            raise ConfigError(found)
        return self


@dataclass
class SweepPoint:
    index: int
    values: Dict[str, Any]
    seed: int


@dataclass
class SweepResult:
    point: SweepPoint
    objective: Optional[float] = None
    metrics: Dict[str, Optional[float]] = field(default_factory=dict)
    error: Optional[str] = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None


# ─── Grid ──────────────────────────────────────────────────────────────────────
def expand_grid(spec: SweepSpec) -> List[SweepPoint]:
    """
    Grid points to evaluate. Each point keeps its index in the full grid and
    its seed derives from its parameter values, so enlarging any axis of the
    grid never changes an existing point's run.
    """
    grid = ParameterGrid(spec.grid)
    total = len(grid)
    if spec.max_evaluations >= total:
        indices = list(range(total))
    elif spec.subsample:
        rng = numpy_rng(spec.base.sim.seed, "sweep-subsample")
        indices = sorted(int(i) for i in rng.choice(total, size=spec.max_evaluations, replace=False))
    else:
        indices = list(range(spec.max_evaluations))
    master = spec.base.sim.seed
    return [SweepPoint(index=i, values=dict(grid[i]),
                       seed=master if spec.common_seed else point_seed(master, dict(grid[i])))
            for i in indices]


def point_config(base: RunConfig, point: SweepPoint) -> RunConfig:
    config = copy.deepcopy(base)
    for key, value in point.values.items():
        config.apply("rules" if key in RULES_KEYS else "dynamics", {key: value})
    config.sim.seed = point.seed
    return config


def sweep_metric_settings(base: RunConfig):
    """Centralities are not part of the objective and are skipped for sweeps."""
    return replace(base.metrics, compute_centralities=False)


# ─── Evaluation ────────────────────────────────────────────────────────────────
@safe_action
def _evaluate(config_dict: dict, target: MetricsReport, weights: Dict[str, float],
              full_metrics: bool) -> dict:
    config = RunConfig.from_dict(config_dict).validate()
    graph, _ = run(config.sim)
    report = compute_report(graph, sweep_metric_settings(config), full=full_metrics)
    comparison = compare(target, report, weights)
    return {"ok": True, "objective": comparison.objective, "metrics": report.scalars()}


def evaluate_point(base: RunConfig, point: SweepPoint, target: MetricsReport,
                   weights: Dict[str, float]) -> SweepResult:
    """Grow + metrics + compare for one point; a failure is recorded, not raised."""
    started = time.perf_counter()
    try:
        config = point_config(base, point)
    except ConfigError as e:
        return SweepResult(point=point, error=f"ConfigError: {e}")
    outcome = _evaluate(config.to_dict(), target, weights, config.output.full_metrics)
    result = SweepResult(point=point, seconds=time.perf_counter() - started)
    if outcome.get("ok"):
        result.objective = outcome["objective"]
        result.metrics = outcome["metrics"]
    else:
        result.error = outcome.get("error", "unknown failure")
    return result


def load_target(spec: SweepSpec) -> MetricsReport:
    if spec.target_report:
        report = load_report(spec.target_report)
        report.settings = {}
        return report
    graph = load_edge_list(spec.target, spec.target_format)
    return compute_report(graph, sweep_metric_settings(spec.base), full=spec.base.output.full_metrics)


def rank(results: List[SweepResult]) -> List[SweepResult]:
    """Objective ascending, grid index breaking ties; failed points last."""
    return sorted(results, key=lambda r: (not r.ok, r.objective if r.ok else 0.0, r.point.index))


def run_sweep(spec: SweepSpec, target: Optional[MetricsReport] = None) -> List[SweepResult]:
    spec.validate()
    target = target if target is not None else load_target(spec)
    points = expand_grid(spec)
    logger.info(f"Sweeping {len(points)} point(s) with parallelism {spec.parallelism}")
    if spec.parallelism == 1:
        results = [evaluate_point(spec.base, point, target, spec.weights) for point in points]
    else:
        with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            futures = [pool.submit(evaluate_point, spec.base, point, target, spec.weights) for point in points]
            results = [future.result() for future in futures]
    failed = sum(1 for r in results if not r.ok)
    if failed:
        logger.warning(f"{failed} of {len(results)} sweep point(s) failed; see the error column")
    return rank(results)


# ─── Output ────────────────────────────────────────────────────────────────────
def write_results_csv(results: List[SweepResult], grid_keys, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["rank", "point", "seed", "objective", "status"] + list(grid_keys)
                        + list(COMPARED_METRICS) + ["error"])
        for position, result in enumerate(results, start=1):
            values = [json.dumps(result.point.values[key]) if isinstance(result.point.values[key], list)
                      else format_value(result.point.values[key]) for key in grid_keys]
            metrics = [format_value(result.metrics.get(name)) if result.ok else "" for name in COMPARED_METRICS]
            writer.writerow([position, result.point.index, result.point.seed,
                             format_value(result.objective) if result.ok else "",
                             "ok" if result.ok else "failed"] + values + metrics + [result.error or ""])


def best_config(spec: SweepSpec, results: List[SweepResult]) -> Optional[RunConfig]:
    best = next((r for r in results if r.ok), None)
    if best is None:
        return None
    return point_config(spec.base, best.point)
