import copy
import csv
import logging
import os
import time
from typing import Dict, List, Optional, Sequence

from config import Config
from baselines.baseline_generator import BaselineSpec, generate_baseline
from core.dynamics import run
from core.errors import ConfigError
from core.run_config import RunConfig
from core.sweep import SweepSpec, best_config, run_sweep, write_results_csv
from metrics.metrics_report import MetricsReport, compute_report
from reporting.comparison import ComparisonReport, compare, load_report
from reporting.edge_list import read_edge_list, write_edge_list, write_label_table
from reporting.report_writer import (format_value, write_comparison, write_ledger_csv, write_manifest,
                                     write_report_bundle)

logger = logging.getLogger(__name__)

DEVELOPMENT_COLUMNS = ["target_nodes", "nodes", "edges", "avg_degree", "max_in_degree", "max_out_degree",
                       "modularity", "turns", "wall_seconds"]


class Backend:
    """
    Command orchestration behind the CLI. Each command validates its whole
    configuration first, then does the work and leaves an artifact directory
    with a manifest that is enough to replay it.
    """

    def __init__(self):
        # Maps command name to (method, description)
        self.commands = {
            "grow": (self.cmd_grow, "grow a network and report on it"),
            "metrics": (self.cmd_metrics, "report on an edge list"),
            "compare": (self.cmd_compare, "compare two networks side by side"),
            "baseline": (self.cmd_baseline, "generate a null-model network"),
            "sweep": (self.cmd_sweep, "calibrate parameters against a target network"),
            "develop": (self.cmd_develop, "grow the same configuration at increasing sizes"),
        }

    def run_command(self, name: str, **kwargs):
        if name not in self.commands:
            raise ConfigError(f"command: unknown command {name!r} (known: {', '.join(self.commands)})")
        method, description = self.commands[name]
        logger.info(f"Running '{name}': {description}")
        started = time.perf_counter()
        result = method(**kwargs)
        logger.info(f"'{name}' finished in {time.perf_counter() - started:.1f}s")
        return result

    # ── grow ──
    def cmd_grow(self, config: RunConfig) -> MetricsReport:
        report, _ = self._grow(config)
        return report

    def _grow(self, config: RunConfig):
        config.validate()
        out_dir = config.output.out_dir
        os.makedirs(out_dir, exist_ok=True)
        started = time.perf_counter()

        graph, ledger = run(config.sim)
        artifacts = [os.path.join(out_dir, "edges.txt")]
        write_edge_list(graph, artifacts[0])
        if config.output.write_ledger:
            artifacts.append(os.path.join(out_dir, "ledger.csv"))
            write_ledger_csv(ledger, artifacts[-1])
        report = compute_report(graph, config.metrics, full=config.output.full_metrics)
        artifacts.extend(write_report_bundle(report, out_dir, config.metrics.loglog_bins))

        write_manifest(out_dir, "grow", config.to_dict(), config.sim.seed, time.perf_counter() - started,
                       artifacts, extra={"turns": len(ledger), "nodes": graph.node_count,
                                         "edges": graph.edge_count})
        return report, len(ledger)

    # ── metrics ──
    def cmd_metrics(self, edge_list_path: str, config: RunConfig, fmt: str = "whitespace") -> MetricsReport:
        config.validate()
        out_dir = config.output.out_dir
        os.makedirs(out_dir, exist_ok=True)
        started = time.perf_counter()

        loaded = read_edge_list(edge_list_path, fmt)
        labels_path = os.path.join(out_dir, "labels.csv")
        write_label_table(loaded.labels, labels_path)
        report = compute_report(loaded.graph, config.metrics, full=config.output.full_metrics)
        artifacts = [labels_path] + write_report_bundle(report, out_dir, config.metrics.loglog_bins)

        write_manifest(out_dir, "metrics", config.to_dict(), config.metrics.seed, time.perf_counter() - started,
                       artifacts, extra={"input": os.path.abspath(edge_list_path), "format": fmt,
                                         "duplicates_dropped": loaded.duplicates,
                                         "self_loops_dropped": loaded.self_loops})
        return report

    # ── compare ──
    def _load_side(self, path: str, config: RunConfig, fmt: str) -> MetricsReport:
        if _is_report_file(path):
            return load_report(path)
        graph = read_edge_list(path, fmt).graph
        return compute_report(graph, config.metrics, full=config.output.full_metrics)

    def cmd_compare(self, left_path: str, right_path: str, config: RunConfig,
                    weights: Optional[Dict[str, float]] = None, fmt: str = "whitespace") -> ComparisonReport:
        config.validate()
        out_dir = config.output.out_dir
        started = time.perf_counter()
        left = self._load_side(left_path, config, fmt)
        right = self._load_side(right_path, config, fmt)
        comparison = compare(left, right, weights)
        artifacts = write_comparison(comparison, out_dir, left_name=os.path.basename(left_path),
                                     right_name=os.path.basename(right_path))
        write_manifest(out_dir, "compare", config.to_dict(), config.metrics.seed, time.perf_counter() - started,
                       artifacts, extra={"left": os.path.abspath(left_path), "right": os.path.abspath(right_path),
                                         "weights": comparison.weights,
                                         "objective": comparison.objective})
        return comparison

    # ── baseline ──
    def cmd_baseline(self, spec: BaselineSpec, config: RunConfig, with_metrics: bool = True) -> Optional[MetricsReport]:
        spec.validate()
        config.validate()
        out_dir = config.output.out_dir
        os.makedirs(out_dir, exist_ok=True)
        started = time.perf_counter()

        graph = generate_baseline(spec)
        artifacts = [os.path.join(out_dir, "edges.txt")]
        write_edge_list(graph, artifacts[0])
        report = None
        if with_metrics:
            report = compute_report(graph, config.metrics, full=config.output.full_metrics)
            artifacts.extend(write_report_bundle(report, out_dir, config.metrics.loglog_bins))
        write_manifest(out_dir, "baseline", config.to_dict(), spec.seed, time.perf_counter() - started,
                       artifacts, extra={"baseline": spec.to_dict(), "nodes": graph.node_count,
                                         "edges": graph.edge_count})
        return report

    # ── sweep ──
    def cmd_sweep(self, spec: SweepSpec, out_dir: Optional[str] = None):
        spec.validate()
        out_dir = out_dir or spec.base.output.out_dir
        os.makedirs(out_dir, exist_ok=True)
        started = time.perf_counter()

        results = run_sweep(spec)
        results_path = os.path.join(out_dir, "sweep.csv")
        write_results_csv(results, sorted(spec.grid), results_path)
        artifacts = [results_path]
        best = best_config(spec, results)
        if best is not None:
            best_path = os.path.join(out_dir, "best_config.json")
            best.save(best_path)
            artifacts.append(best_path)
            logger.info(f"Best point: objective {format_value(results[0].objective)}, config in {best_path}")
        else:
            logger.error("Every sweep point failed; no best configuration written.")

        write_manifest(out_dir, "sweep", spec.base.to_dict(), spec.base.sim.seed, time.perf_counter() - started,
                       artifacts, extra={"grid": spec.grid, "weights": spec.weights,
                                         "target": spec.target or spec.target_report,
                                         "evaluated": len(results),
                                         "failed": sum(1 for r in results if not r.ok)})
        return results

    # ── develop ──
    def cmd_develop(self, config: RunConfig, sizes: Sequence[int] = Config.DEVELOPMENT_SIZES,
                    full_metrics: bool = False) -> List[dict]:
        """
        The same configuration grown to each size in turn, each into its own
        subdirectory, with one summary row per size.
        """
        config.validate()
        bad = [s for s in sizes if not isinstance(s, int) or s < config.sim.n0]
        if not sizes or bad:
            raise ConfigError(f"sizes: need integers >= n0 ({config.sim.n0}), got {list(sizes)}")
        out_dir = config.output.out_dir
        os.makedirs(out_dir, exist_ok=True)
        started = time.perf_counter()

        rows = []
        for size in sizes:
            sized = copy.deepcopy(config)
            sized.sim.target_nodes = size
            sized.output.out_dir = os.path.join(out_dir, f"n{size}")
            sized.output.full_metrics = full_metrics
            size_started = time.perf_counter()
            report, turns = self._grow(sized)
            rows.append({
                "target_nodes": size,
                "nodes": report.nodes,
                "edges": report.edges,
                "avg_degree": report.avg_degree,
                "max_in_degree": report.max_in_degree,
                "max_out_degree": report.max_out_degree,
                "modularity": report.modularity,
                "turns": turns,
                "wall_seconds": time.perf_counter() - size_started,
            })
            logger.info(f"Development size {size}: {report.edges} edges, avg degree {report.avg_degree:.3f}")

        summary_path = os.path.join(out_dir, "development.csv")
        with open(summary_path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(DEVELOPMENT_COLUMNS)
            for row in rows:
                writer.writerow([format_value(row[column]) for column in DEVELOPMENT_COLUMNS])
        write_manifest(out_dir, "develop", config.to_dict(), config.sim.seed, time.perf_counter() - started,
                       [summary_path], extra={"sizes": list(sizes), "full_metrics": full_metrics})
        return rows



def _is_report_file(path: str) -> bool:
    """report.json, or a CSV of summary values whose header is 'metric,value'."""
    if path.endswith(".json"):
        return True
    if not os.path.isfile(path):
        return False
    with open(path, "r", encoding="utf-8", errors="replace") as handle:
        for raw in handle:
            line = raw.strip()
            if line and not line.startswith("#"):
                return line == "metric,value"
    return False
