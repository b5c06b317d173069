import os
import random
import sys

import pytest

SRC = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src"))
if SRC not in sys.path:
    sys.path.insert(0, SRC)

from core.graph import DirectedGraph  # noqa: E402


def make_graph(n, edges, turn=0):
    graph = DirectedGraph()
    graph.add_nodes(n, turn=turn)
    for src, dst in edges:
        graph.add_edge(src, dst)
    return graph


def has_edge(graph, src, dst):
    return dst in graph.neighbors_out(src)


def random_digraph(n, p, seed):
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
    return make_graph(n, edges)


class ScriptedRandom(random.Random):
    """
    random.Random whose randrange answers come from a script first; random()
    answers likewise. Falls back to the seeded stream when a script runs out.
    """

    def __init__(self, ranges=(), uniforms=(), seed=0):
        super().__init__(seed)
        self._ranges = list(ranges)
        self._uniforms = list(uniforms)

    def randrange(self, *args, **kwargs):
        if self._ranges:
            return self._ranges.pop(0)
        return super().randrange(*args, **kwargs)

    def random(self):
        if self._uniforms:
            return self._uniforms.pop(0)
        return super().random()


@pytest.fixture
def path4():
    """Undirected path 0-1-2-3, stored as 0->1, 1->2, 2->3."""
    return make_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star4():
    """Star K1,4: leaves 1..4 follow the centre 0."""
    return make_graph(5, [(leaf, 0) for leaf in range(1, 5)])


@pytest.fixture
def triangle():
    return make_graph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def bridged_triangles():
    """Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3."""
    return make_graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
