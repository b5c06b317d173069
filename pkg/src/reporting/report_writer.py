import csv
import json
import logging
import os
import platform
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from config import Config
from core.dynamics import LEDGER_COLUMNS, TurnStats
from metrics.metrics_report import EXTRA_METRICS, TABLE_METRICS, MetricsReport
from reporting.comparison import COMPARED_METRICS, ComparisonReport
from reporting.export import export_loglog

logger = logging.getLogger(__name__)

# Row labels of the side-by-side comparison table.
ROW_LABELS = {
    "nodes": "Nodes",
    "edges": "Edges",
    "avg_degree": "Average Degree",
    "diameter": "Network Diameter",
    "avg_path_length": "Average Path Length",
    "modularity": "Modularity",
    "transitivity": "Transitivity",
    "avg_clustering": "Average Clustering",
    "max_in_degree": "Max In-Degree",
    "max_out_degree": "Max Out-Degree",
    "mean_in_degree": "Mean In-Degree",
    "in_degree_ccdf_slope": "In-Degree CCDF Slope",
}


def format_value(value) -> str:
    """Integers verbatim, floats with 6 significant digits, None as 'undefined'."""
    if value is None:
        return "undefined"
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{Config.FLOAT_DIGITS}g}"
    return str(value)


def _csv_writer(handle):
    return csv.writer(handle, lineterminator="\n")


def _report_lines(report: MetricsReport) -> List[str]:
    lines = [f"{name} = {format_value(value)}" for name, value in report.scalars().items()]
    lines.append(f"in_degree_max_to_mean = {format_value(report.degree_ratio('in'))}")
    lines.append(f"out_degree_max_to_mean = {format_value(report.degree_ratio('out'))}")
    for name, flag in sorted(report.flags.items()):
        lines.append(f"flag.{name} = {flag}")
    for name, value in sorted(report.settings.items()):
        lines.append(f"setting.{name} = {format_value(value)}")
    return lines


def write_report_text(report: MetricsReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(_report_lines(report)) + "\n")


def write_report_csv(report: MetricsReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["metric", "value"])
        for name in TABLE_METRICS + EXTRA_METRICS:
            writer.writerow([name, format_value(getattr(report, name))])


def _plain(value):
    if value is None:
        return None
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    return float(value)


def write_report_json(report: MetricsReport, path) -> None:
    payload = {
        "metrics": {name: _plain(value) for name, value in report.scalars().items()},
        "flags": dict(sorted(report.flags.items())),
        "settings": report.settings,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_histogram_csv(rows: Iterable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["degree", "count"])
        writer.writerows(rows)


def write_centralities_csv(centralities: Dict[str, np.ndarray], path) -> None:
    names = [name for name in ("eigenvector", "betweenness", "closeness") if name in centralities]
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["node"] + names)
        if not names:
            return
        for node in range(len(centralities[names[0]])):
            writer.writerow([node] + [format_value(float(centralities[name][node])) for name in names])


def write_points_csv(points: Sequence, path, header=("value", "frequency")) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(list(header))
        for x, y in points:
            writer.writerow([format_value(x), format_value(y)])


def write_loglog_series(report: MetricsReport, out_dir, bins: int) -> List[str]:
    """One log-log point series per degree direction and centrality."""
    written = []
    series = {"in_degree": report.hist_in, "out_degree": report.hist_out}
    series.update(report.centralities)
    header = ("value", "frequency") if bins == 0 else ("bin_centre", "density")
    for name, data in series.items():
        path = os.path.join(out_dir, f"loglog_{name}.csv")
        write_points_csv(export_loglog(data, bins), path, header)
        written.append(path)
    return written


def write_report_bundle(report: MetricsReport, out_dir, loglog_bins: int = Config.LOGLOG_BINS) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "report.txt": write_report_text,
        "report.csv": write_report_csv,
        "report.json": write_report_json,
    }
    written = []
    for name, writer in paths.items():
        path = os.path.join(out_dir, name)
        writer(report, path)
        written.append(path)
    for direction, histogram in (("in", report.hist_in), ("out", report.hist_out)):
        path = os.path.join(out_dir, f"hist_{direction}.csv")
        write_histogram_csv(histogram.as_rows(), path)
        written.append(path)
    if report.centralities:
        path = os.path.join(out_dir, "centralities.csv")
        write_centralities_csv(report.centralities, path)
        written.append(path)
    written.extend(write_loglog_series(report, out_dir, loglog_bins))
    logger.info(f"Wrote {len(written)} report files to {out_dir}")
    return written


def write_ledger_csv(ledger: Sequence[TurnStats], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(LEDGER_COLUMNS)
        for stats in ledger:
            writer.writerow(stats.as_row())


# ─── Comparison ────────────────────────────────────────────────────────────────
def _delta_cells(comparison: ComparisonReport, name: str) -> List[str]:
    """Left, right, absolute, relative and contribution cells, with "n/a" where a side has no value."""
    delta = comparison.deltas[name]
    if not delta.compared:
        left = "n/a" if "left" in delta.missing else format_value(delta.left)
        right = "n/a" if "right" in delta.missing else format_value(delta.right)
        return [left, right, "n/a", "n/a", "n/a"]
    return [format_value(delta.left), format_value(delta.right), format_value(delta.absolute),
            format_value(delta.relative), format_value(comparison.contribution(name))]


def comparison_table(comparison: ComparisonReport, left_name: str = "left", right_name: str = "right") -> str:
    """Side-by-side text table in fixed row order, then the objective and any notes."""
    header = ("Metric", left_name, right_name, "Abs. delta", "Rel. delta", "Weight")
    rows = [header]
    for name in COMPARED_METRICS:
        left, right, absolute, relative, _ = _delta_cells(comparison, name)
        rows.append((ROW_LABELS[name], left, right, absolute, relative,
                     format_value(comparison.weights.get(name, 0.0))))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                       for i, cell in enumerate(row)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append("")
    lines.append(f"objective = {format_value(comparison.objective)}")
    lines.extend(f"note = {note}" for note in comparison.notes)
    return "\n".join(lines) + "\n"


def write_comparison(comparison: ComparisonReport, out_dir, left_name: str = "left",
                     right_name: str = "right") -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    text_path = os.path.join(out_dir, "comparison.txt")
    with open(text_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(comparison_table(comparison, left_name, right_name))
    csv_path = os.path.join(out_dir, "comparison.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as handle:
        writer = _csv_writer(handle)
        writer.writerow(["metric", "left", "right", "absolute", "relative", "weight", "contribution"])
        for name in COMPARED_METRICS:
            left, right, absolute, relative, contribution = _delta_cells(comparison, name)
            writer.writerow([name, left, right, absolute, relative,
                             format_value(comparison.weights.get(name, 0.0)), contribution])
        writer.writerow(["objective", "", "", "", "", "", format_value(comparison.objective)])
    logger.info(f"Comparison written to {text_path} (objective {format_value(comparison.objective)})")
    return [text_path, csv_path]


# ─── Manifest ──────────────────────────────────────────────────────────────────
def write_manifest(out_dir, command: str, config: dict, seed: Optional[int], wall_seconds: float,
                   artifacts: Iterable[str] = (), extra: Optional[dict] = None) -> str:
    """
    Everything needed to replay a run: the full config, the seed and the code
    version. Wall time is recorded but is the only field that differs between
    replays.
    """
    manifest = {
        "tool": Config.APP_NAME,
        "version": Config.VERSION,
        "command": command,
        "seed": seed,
        "config": config,
        "python": platform.python_version(),
        "wall_seconds": round(wall_seconds, 3),
        "artifacts": sorted(os.path.basename(path) for path in artifacts),
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.info(f"Manifest written to {path}")
    return path
