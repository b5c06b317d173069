import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from config import Config
from core.errors import ConfigError, InputError, InputMissingError, MalformedInputError
from metrics.metrics_report import EXTRA_METRICS, TABLE_METRICS, MetricsReport

logger = logging.getLogger(__name__)

COMPARED_METRICS = TABLE_METRICS + EXTRA_METRICS


@dataclass
class MetricDelta:
    left: Optional[float]
    right: Optional[float]
    absolute: float
    relative: float
    missing: Tuple[str, ...] = ()   # sides that carry no value; such a metric is not compared

    @property
    def compared(self) -> bool:
        return not self.missing


@dataclass
class ComparisonReport:
    left: MetricsReport
    right: MetricsReport
    deltas: Dict[str, MetricDelta] = field(default_factory=dict)
    weights: Dict[str, float] = field(default_factory=dict)
    objective: float = 0.0
    notes: List[str] = field(default_factory=list)

    def contribution(self, name: str) -> float:
        return self.weights.get(name, 0.0) * self.deltas[name].relative


def default_weights() -> Dict[str, float]:
    return dict(Config.OBJECTIVE_WEIGHTS)


def check_weights(weights: Dict[str, float]) -> List[str]:
    found = []
    for name, weight in weights.items():
        if name not in COMPARED_METRICS:
            found.append(f"weights.{name}: unknown metric (known: {', '.join(COMPARED_METRICS)})")
        elif not isinstance(weight, (int, float)) or isinstance(weight, bool) or weight < 0:
            found.append(f"weights.{name}: must be a non-negative number, got {weight!r}")
    return found


def _delta(left: Optional[float], right: Optional[float], epsilon: float) -> MetricDelta:
    if left is None and right is None:
        return MetricDelta(left, right, 0.0, 0.0)
    if left is None or right is None:
        # Defined on one side only: counted as a full relative miss.
        return MetricDelta(left, right, float("inf"), 1.0)
    absolute = abs(float(left) - float(right))
    return MetricDelta(left, right, absolute, absolute / max(abs(float(left)), epsilon))


def _path_notes(side: str, report: MetricsReport) -> List[str]:
    notes = []
    if report.diameter and report.avg_path_length > report.diameter:
        notes.append(f"{side}: average path length {report.avg_path_length:.6g} exceeds the diameter "
                     f"{report.diameter}; the two values cannot come from the same shortest-path definition")
    return notes


def compare(left: MetricsReport, right: MetricsReport, weights: Optional[Dict[str, float]] = None,
            epsilon: float = Config.OBJECTIVE_EPSILON) -> ComparisonReport:
    """
    Per-metric deltas and the weighted normalized L1 objective,
    sum_m w_m * |left_m - right_m| / max(|left_m|, epsilon). Left is the
    reference side.
    """
    weights = default_weights() if weights is None else dict(weights)
    problems = check_weights(weights)
    if problems:
        raise ConfigError(problems)
    if left.settings and right.settings and left.settings != right.settings:
        differing = sorted(k for k in set(left.settings) | set(right.settings)
                           if left.settings.get(k) != right.settings.get(k))
        raise ConfigError([f"metrics.{k}: reports were computed with different settings "
                           f"({left.settings.get(k)!r} vs {right.settings.get(k)!r})" for k in differing])

    comparison = ComparisonReport(left=left, right=right, weights=weights)
    left_values, right_values = left.scalars(), right.scalars()
    for name in COMPARED_METRICS:
        missing = tuple(side for side, report in (("left", left), ("right", right)) if not report.provides(name))
        if missing:
            comparison.deltas[name] = MetricDelta(None if "left" in missing else left_values[name],
                                                  None if "right" in missing else right_values[name],
                                                  0.0, 0.0, missing)
            continue
        comparison.deltas[name] = _delta(left_values[name], right_values[name], epsilon)
    comparison.objective = float(sum(comparison.contribution(name) for name in COMPARED_METRICS))

    comparison.notes.extend(_path_notes("left", left))
    comparison.notes.extend(_path_notes("right", right))
    for side in ("left", "right"):
        absent = [name for name in COMPARED_METRICS
                  if side in comparison.deltas[name].missing and weights.get(name, 0.0) > 0]
        if absent:
            comparison.notes.append(f"{side} has no value for {', '.join(absent)}; left out of the objective")
    if comparison.deltas["modularity"].compared and (left.modularity is None) != (right.modularity is None):
        comparison.notes.append("modularity is undefined on one side only")
    for note in comparison.notes:
        logger.warning(note)
    logger.debug(f"Comparison objective {comparison.objective:.6g}")
    return comparison


# ─── Reference reports ─────────────────────────────────────────────────────────
def report_from_values(values: Dict[str, Optional[float]], settings: Optional[dict] = None) -> MetricsReport:
    report = MetricsReport(settings=settings or {})
    report.provided = tuple(values)
    for name, value in values.items():
        if name not in COMPARED_METRICS:
            raise ConfigError(f"{name}: unknown metric (known: {', '.join(COMPARED_METRICS)})")
        setattr(report, name, value)
    return report


def load_report(path) -> MetricsReport:
    """
    Read summary values back as a report: either a report.json written by
    this tool (settings included) or a plain "metric,value" CSV of reference
    values, such as published figures for a network that is not at hand.
    """
    if not os.path.exists(path):
        raise InputMissingError(path)
    if str(path).endswith(".json"):
        try:
            with open(path, "r", encoding="utf-8") as handle:
                payload = json.load(handle)
        except json.JSONDecodeError as e:
            raise MalformedInputError(path, e.lineno, e.msg) from e
        if not isinstance(payload, dict) or "metrics" not in payload:
            raise InputError(f"{path}: expected an object with a 'metrics' section")
        return report_from_values(payload["metrics"], payload.get("settings"))

    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#") or line == "metric,value":
                continue
            parts = [part.strip() for part in line.split(",")]
            if len(parts) != 2 or parts[0] not in COMPARED_METRICS:
                raise MalformedInputError(path, line_number, f"expected 'metric,value', got {line[:60]!r}")
            name, text = parts
            if text == "undefined":
                values[name] = None
                continue
            try:
                values[name] = float(text)
            except ValueError as e:
                raise MalformedInputError(path, line_number, f"not a number: {text!r}") from e
    return report_from_values(values)
