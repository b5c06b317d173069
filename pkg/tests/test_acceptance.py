"""Full-scale runs. Excluded by default; run with `pytest -m slow`."""

import os
import time

import pytest

from core.dynamics import SimParams, run
from core.run_config import RunConfig
from core.sweep import SweepSpec, run_sweep
from metrics.metrics_report import compute_report
from metrics.settings import MetricSettings
from reporting.edge_list import write_edge_list

pytestmark = pytest.mark.slow

FULL_SCALE = 160_000
CALIBRATED = os.path.join(os.path.dirname(__file__), "..", "configs", "calibrated_160k.json")


def test_full_scale_run_finishes_within_one_turn_of_the_target():
    params = SimParams(target_nodes=FULL_SCALE, seed=1)
    started = time.perf_counter()
    graph, ledger = run(params)
    elapsed = time.perf_counter() - started
    assert FULL_SCALE <= graph.node_count <= FULL_SCALE * (1 + params.nu) + 1
    assert ledger[-1].nodes == graph.node_count
    assert elapsed < 15 * 60


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_full_scale_structure(seed):
    config = RunConfig.load(CALIBRATED).override(seed=seed)
    assert config.sim.target_nodes == FULL_SCALE
    graph, _ = run(config.sim)
    report = compute_report(graph, MetricSettings(seed=seed), full=False)
    assert 4.0 <= report.avg_degree <= 7.2
    assert 0.45 <= report.modularity <= 0.70
    assert report.degree_ratio("in") >= 50
    assert report.degree_ratio("out") < report.degree_ratio("in")


def test_self_calibration_at_desk_scale(tmp_path):
    base = {"dynamics": {"target_nodes": 5000, "seed": 21}, "output": {"full_metrics": True}}
    graph, _ = run(RunConfig.from_dict(base).sim)
    target = tmp_path / "target.txt"
    write_edge_list(graph, target)
    spec = SweepSpec.from_dict({
        "grid": {"p_triadic": [0.1, 0.2, 0.4], "p_distance": [0.05, 0.2]},
        "target": str(target),
        "common_seed": True,
        "parallelism": 2,
        "base": base,
    })
    started = time.perf_counter()
    results = run_sweep(spec)
    assert results[0].point.values == {"p_distance": 0.05, "p_triadic": 0.2}
    assert results[0].objective < 1e-6
    assert time.perf_counter() - started < 10 * 60
