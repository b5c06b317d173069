import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from core.graph import DirectedGraph
from metrics.centrality import betweenness, eigenvector_centrality
from metrics.community import clustering_summary, modularity
from metrics.degree import DegreeHistogram, ccdf_slope, degree_histogram
from metrics.paths import path_statistics
from metrics.settings import MetricSettings

logger = logging.getLogger(__name__)

# Summary rows in the order the comparison table prints them.
TABLE_METRICS = ("nodes", "edges", "avg_degree", "diameter", "avg_path_length", "modularity")
EXTRA_METRICS = ("transitivity", "avg_clustering", "max_in_degree", "max_out_degree",
                 "mean_in_degree", "in_degree_ccdf_slope")


@dataclass
class MetricsReport:
    nodes: int = 0
    edges: int = 0
    avg_degree: float = 0.0
    diameter: int = 0
    avg_path_length: float = 0.0
    modularity: Optional[float] = None
    transitivity: float = 0.0
    avg_clustering: float = 0.0
    max_in_degree: int = 0
    max_out_degree: int = 0
    mean_in_degree: float = 0.0
    in_degree_ccdf_slope: Optional[float] = None
    centralities: Dict[str, np.ndarray] = field(default_factory=dict)
    flags: Dict[str, str] = field(default_factory=dict)
    settings: Dict = field(default_factory=dict)
    # Metrics a reference report actually carries; None means all of them.
    provided: Optional[Tuple[str, ...]] = None
    hist_in: DegreeHistogram = field(default_factory=lambda: DegreeHistogram("in"))
    hist_out: DegreeHistogram = field(default_factory=lambda: DegreeHistogram("out"))

    def provides(self, name: str) -> bool:
        return self.provided is None or name in self.provided

    def scalars(self) -> Dict[str, Optional[float]]:
        return {name: getattr(self, name) for name in TABLE_METRICS + EXTRA_METRICS}

    def degree_ratio(self, direction: str) -> float:
        """Max degree over mean degree (in and out means are both edges / nodes)."""
        mean = self.edges / self.nodes if self.nodes else 0.0
        top = self.max_in_degree if direction == "in" else self.max_out_degree
        return top / mean if mean else 0.0


def compute_report(graph: DirectedGraph, settings: Optional[MetricSettings] = None,
                   full: bool = True) -> MetricsReport:
    """
    Every summary measure plus per-node centralities. full=False keeps to
    the cheap set (degree statistics, clustering, modularity).
    """
    settings = settings or MetricSettings()
    started = time.perf_counter()
    n, m = graph.node_count, graph.edge_count
    report = MetricsReport(nodes=n, edges=m, settings=settings.result_key())
    report.avg_degree = m / n if n else 0.0
    report.mean_in_degree = report.avg_degree
    report.hist_in = degree_histogram(graph, "in")
    report.hist_out = degree_histogram(graph, "out")
    if n:
        in_degrees = graph.in_degrees()
        report.max_in_degree = int(in_degrees.max())
        report.max_out_degree = int(graph.out_degrees().max())
        report.in_degree_ccdf_slope = ccdf_slope(in_degrees, kmin=1)

    if m:
        report.modularity, _ = modularity(graph, seed=settings.seed)
        report.flags["modularity"] = "louvain"
    else:
        logger.warning("Graph has no edges: modularity is undefined.")
        report.flags["modularity"] = "undefined"
    report.transitivity, report.avg_clustering = clustering_summary(graph)

    if full and n:
        paths = path_statistics(graph, settings, include_closeness=settings.compute_centralities)
        report.diameter = paths.diameter
        report.avg_path_length = paths.avg_path_length
        report.flags["paths"] = "sampled" if paths.sampled else "exact"
        if settings.compute_centralities:
            eigen = eigenvector_centrality(graph, settings.eigen_tol, settings.eigen_max_iter)
            sampled = settings.sampled(n)
            report.centralities = {
                "eigenvector": eigen.scores,
                "betweenness": betweenness(graph, "sampled" if sampled else "exact",
                                           k=settings.betweenness_samples, settings=settings),
                "closeness": paths.closeness,
            }
            report.flags["eigenvector"] = ("edgeless" if eigen.edgeless
                                           else "converged" if eigen.converged else "not_converged")
            report.flags["betweenness"] = "sampled" if sampled else "exact"
            report.flags["closeness"] = "sampled" if paths.closeness_sampled else "exact"
    elif not full:
        report.flags["paths"] = "skipped"

    logger.info(f"Metrics computed for {n} nodes / {m} edges in {time.perf_counter() - started:.1f}s")
    return report
