import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from core.graph import DirectedGraph
from core.seeding import numpy_rng
from metrics.settings import MetricSettings

logger = logging.getLogger(__name__)


@dataclass
class EigenvectorResult:
    scores: np.ndarray
    converged: bool
    iterations: int
    edgeless: bool = False


def eigenvector_centrality(graph: DirectedGraph, tol: float = 1e-9, max_iter: int = 1000) -> EigenvectorResult:
    """
    Power iteration on A + I of the undirected projection (the shift keeps
    bipartite graphs from oscillating and leaves eigenvectors unchanged).
    The iterate is L2-normalized; convergence is an L-infinity gap below tol.
    """
    n = graph.node_count
    if graph.edge_count == 0:
        logger.warning("Eigenvector centrality is undefined on an edgeless graph; returning zeros.")
        return EigenvectorResult(np.zeros(n), converged=False, iterations=0, edgeless=True)
    adjacency = graph.undirected_csr()
    x = np.full(n, 1.0 / np.sqrt(n))
    for iteration in range(1, max_iter + 1):
        y = adjacency @ x + x
        y /= np.linalg.norm(y)
        gap = np.abs(y - x).max()
        x = y
        if gap < tol:
            return EigenvectorResult(x, converged=True, iterations=iteration)
    logger.warning(f"Eigenvector centrality did not converge in {max_iter} iterations (gap {gap:.3e}).")
    return EigenvectorResult(x, converged=False, iterations=max_iter)


# ---- Betweenness --------------------------------------------------------------

# Projection shared with worker processes (set once per worker by the initializer).
_shared_projection: Optional[nx.DiGraph] = None


def _init_worker(projection: nx.DiGraph):
    global _shared_projection
    _shared_projection = projection


def _subset_chunk(sources: Sequence[int]) -> np.ndarray:
    """Dependencies of every node on shortest paths from the chunk's sources, summed."""
    projection = _shared_projection
    scores = nx.betweenness_centrality_subset(projection, sources, list(projection), normalized=False)
    return np.array([scores[v] for v in range(projection.number_of_nodes())])


def _symmetric_digraph(graph: DirectedGraph) -> nx.DiGraph:
    """The undirected projection with each edge in both directions; networkx leaves its subset sums unscaled."""
    pairs = graph.undirected_edge_pairs()
    projection = nx.DiGraph()
    projection.add_nodes_from(range(graph.node_count))
    projection.add_edges_from(pairs)
    projection.add_edges_from((dst, src) for src, dst in pairs)
    return projection


def betweenness(graph: DirectedGraph, mode: str = "exact", k: Optional[int] = None,
                settings: Optional[MetricSettings] = None) -> np.ndarray:
    """
    Unnormalized betweenness (each unordered pair counted once) on the
    undirected projection. mode="sampled" uses k uniform pivots and scales
    the sum by n / k.
    """
    settings = settings or MetricSettings()
    n = graph.node_count
    if n == 0:
        return np.zeros(0)
    if mode == "exact":
        sources = np.arange(n)
    elif mode == "sampled":
        if k is None or k < 1:
            raise ValueError("sampled betweenness needs k >= 1 pivots")
        k = min(k, n)
        rng = numpy_rng(settings.seed, "betweenness-pivots")
        sources = np.sort(rng.choice(n, size=k, replace=False))
    else:
        raise ValueError(f"unknown betweenness mode {mode!r}; expected 'exact' or 'sampled'")

    projection = _symmetric_digraph(graph)
    size = settings.chunk_size
    chunks = [sources[i:i + size].tolist() for i in range(0, len(sources), size)]
    if settings.threads > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=settings.threads, initializer=_init_worker,
                                 initargs=(projection,)) as pool:
            parts = list(pool.map(_subset_chunk, chunks))
    else:
        _init_worker(projection)
        parts = [_subset_chunk(chunk) for chunk in chunks]

    total = np.zeros(n)
    for part in parts:
        total += part
    # Each unordered pair is reached from both endpoints.
    total *= 0.5
    if mode == "sampled":
        total *= n / len(sources)
    return total
