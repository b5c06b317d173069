"""
Distance-based measures on the undirected projection.

All BFS work is done by scipy.sparse.csgraph in fixed-size source chunks.
Chunks may run on a thread pool; results are reduced in chunk order, so the
output does not depend on the thread count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from core.graph import DirectedGraph
from core.seeding import numpy_rng
from metrics.settings import MetricSettings

logger = logging.getLogger(__name__)


@dataclass
class PathStatistics:
    diameter: int = 0
    avg_path_length: float = 0.0
    component_size: int = 0
    sources: int = 0
    sampled: bool = False
    closeness: Optional[np.ndarray] = None
    closeness_sampled: bool = False


@dataclass
class _SweepResult:
    sums: np.ndarray
    reach: np.ndarray
    maxes: np.ndarray
    column_sums: Optional[np.ndarray] = field(default=None)


def weak_components(adjacency: sparse.csr_matrix) -> Tuple[int, np.ndarray]:
    return csgraph.connected_components(adjacency, directed=False)


def largest_component(labels: np.ndarray) -> int:
    """Label of the biggest component; ties go to the one holding the lowest node id."""
    sizes = np.bincount(labels)
    candidates = np.flatnonzero(sizes == sizes.max())
    if candidates.size == 1:
        return int(candidates[0])
    return int(labels[np.argmax(np.isin(labels, candidates))])


def _row_stats(adjacency, chunk: np.ndarray, want_columns: bool) -> _SweepResult:
    dist = csgraph.shortest_path(adjacency, method="D", directed=False, unweighted=True, indices=chunk)
    dist = np.atleast_2d(dist)
    finite = np.isfinite(dist)
    dist = np.where(finite, dist, 0.0)
    return _SweepResult(
        sums=dist.sum(axis=1),
        reach=finite.sum(axis=1),
        maxes=dist.max(axis=1),
        column_sums=dist.sum(axis=0) if want_columns else None,
    )


def _sweep(adjacency, sources: np.ndarray, settings: MetricSettings, want_columns: bool = False) -> _SweepResult:
    size = settings.chunk_size
    chunks = [sources[i:i + size] for i in range(0, len(sources), size)]
    work = partial(_row_stats, adjacency, want_columns=want_columns)
    if settings.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(chunk) for chunk in chunks]

    column_sums = None
    if want_columns:
        column_sums = np.zeros(adjacency.shape[0])
        for part in parts:
            column_sums += part.column_sums
    return _SweepResult(
        sums=np.concatenate([p.sums for p in parts]),
        reach=np.concatenate([p.reach for p in parts]),
        maxes=np.concatenate([p.maxes for p in parts]),
        column_sums=column_sums,
    )


def _component_groups(labels: np.ndarray) -> List[np.ndarray]:
    order = np.argsort(labels, kind="stable")
    counts = np.bincount(labels)
    return np.split(order, np.cumsum(counts)[:-1])


def _exact_closeness(sweep: _SweepResult) -> np.ndarray:
    result = np.zeros(sweep.sums.shape[0])
    np.divide(sweep.reach - 1, sweep.sums, out=result, where=sweep.sums > 0)
    return result


def path_statistics(graph: DirectedGraph, settings: Optional[MetricSettings] = None,
                    include_closeness: bool = True) -> PathStatistics:
    """
    Diameter and average path length over the largest weakly connected
    component, and (optionally) classical closeness for every node within its
    own component. Above settings.exact_threshold nodes the component is
    swept from sampled sources and the affected results are flagged.
    """
    settings = settings or MetricSettings()
    n = graph.node_count
    if n == 0:
        raise ValueError("path statistics need a non-empty graph")
    adjacency = graph.undirected_csr()
    _, labels = weak_components(adjacency)
    main_label = largest_component(labels)
    groups = _component_groups(labels)
    main_nodes = groups[main_label]
    size = main_nodes.size
    stats = PathStatistics(component_size=int(size))
    closeness = np.zeros(n) if include_closeness else None

    if size > 1:
        sub = adjacency[main_nodes][:, main_nodes]
        if settings.sampled(n):
            k = min(settings.path_samples, size)
            rng = numpy_rng(settings.seed, "path-sources")
            sources = np.sort(rng.choice(size, size=k, replace=False))
            stats.sampled = True
        else:
            sources = np.arange(size)
        sweep = _sweep(sub, sources, settings, want_columns=include_closeness and stats.sampled)
        stats.sources = int(sources.size)
        stats.diameter = int(sweep.maxes.max())
        stats.avg_path_length = float(sweep.sums.sum() / (sweep.reach - 1).sum())
        if include_closeness:
            if stats.sampled:
                # Average-distance estimator: each pivot row is a uniform sample of distances.
                estimated_totals = sweep.column_sums * (size / sources.size)
                main_closeness = np.zeros(size)
                np.divide(size - 1, estimated_totals, out=main_closeness, where=estimated_totals > 0)
                stats.closeness_sampled = True
            else:
                main_closeness = _exact_closeness(sweep)
            closeness[main_nodes] = main_closeness

    if include_closeness:
        for label, nodes in enumerate(groups):
            if label == main_label or nodes.size < 2:
                continue
            if nodes.size == 2:
                closeness[nodes] = 1.0
                continue
            sub = adjacency[nodes][:, nodes]
            closeness[nodes] = _exact_closeness(_sweep(sub, np.arange(nodes.size), settings))
        stats.closeness = closeness

    logger.debug(f"Path statistics: component={size} sources={stats.sources} "
                 f"diameter={stats.diameter} apl={stats.avg_path_length:.4f} sampled={stats.sampled}")
    return stats


def diameter_and_apl(graph: DirectedGraph, settings: Optional[MetricSettings] = None) -> Tuple[int, float]:
    stats = path_statistics(graph, settings, include_closeness=False)
    return stats.diameter, stats.avg_path_length


def closeness(graph: DirectedGraph, settings: Optional[MetricSettings] = None) -> np.ndarray:
    """(reachable - 1) / sum of distances within each node's component; isolated nodes score 0."""
    if graph.node_count == 0:
        return np.zeros(0)
    return path_statistics(graph, settings, include_closeness=True).closeness
