import logging
from typing import List, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from core.errors import MetricUndefinedError
from core.graph import DirectedGraph

logger = logging.getLogger(__name__)


def to_undirected_nx(graph: DirectedGraph) -> nx.Graph:
    """Undirected projection with reciprocal pairs collapsed; isolated nodes kept."""
    projection = nx.Graph()
    projection.add_nodes_from(range(graph.node_count))
    projection.add_edges_from(graph.undirected_edge_pairs())
    return projection


def modularity(graph: DirectedGraph, seed: int = 0) -> Tuple[float, List[int]]:
    """
    Louvain communities of the undirected projection. Node visiting order is
    shuffled by the seeded generator, so the partition is reproducible.
    Returns Q and a community label per node; labels are numbered by each
    community's lowest node id.
    """
    if graph.edge_count == 0:
        raise MetricUndefinedError("modularity undefined: the graph has no edges")
    projection = to_undirected_nx(graph)
    communities = nx.community.louvain_communities(projection, seed=seed)
    communities = sorted(communities, key=min)
    partition = [0] * graph.node_count
    for label, members in enumerate(communities):
        for node in members:
            partition[node] = label
    q = float(nx.community.modularity(projection, communities))
    logger.debug(f"Louvain found {len(communities)} communities, Q={q:.6f}")
    return q, partition


def _triangles_per_node(adjacency: sparse.csr_matrix) -> np.ndarray:
    """
    Triangles through each node of a symmetric 0/1 adjacency. Edges are
    oriented from lower to higher (degree, id) rank so every triangle a<b<c
    is found once, as the closing edge a->c of the path a->b->c, and credited
    to a, b and c.
    """
    n = adjacency.shape[0]
    degree = np.diff(adjacency.indptr)
    position = np.empty(n, dtype=np.int64)
    position[np.lexsort((np.arange(n), degree))] = np.arange(n)
    coo = adjacency.tocoo()
    keep = position[coo.row] < position[coo.col]
    upper = sparse.csr_matrix((coo.data[keep], (coo.row[keep], coo.col[keep])), shape=(n, n))
    closing = (upper @ upper).multiply(upper)
    middle = (upper.T @ upper).multiply(upper)
    return (np.asarray(closing.sum(axis=1)).ravel() + np.asarray(closing.sum(axis=0)).ravel()
            + np.asarray(middle.sum(axis=1)).ravel())


def clustering_summary(graph: DirectedGraph) -> Tuple[float, float]:
    """(global transitivity, mean local clustering with isolates counted as 0)."""
    if graph.node_count == 0:
        return 0.0, 0.0
    adjacency = graph.undirected_csr()
    degree = np.diff(adjacency.indptr).astype(np.float64)
    triangles = _triangles_per_node(adjacency)
    pairs = degree * (degree - 1) / 2
    transitivity = float(triangles.sum() / pairs.sum()) if triangles.sum() > 0 else 0.0
    local = np.divide(triangles, pairs, out=np.zeros_like(triangles), where=pairs > 0)
    return transitivity, float(local.mean())
