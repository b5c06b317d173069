import numpy as np

from baselines.baseline_generator import BaselineGenerator, BaselineSpec
from core.graph import DirectedGraph
from core.seeding import numpy_rng


class PrefAttachGenerator(BaselineGenerator):
    """
    Classical cumulative advantage. Starts with a fully connected seed of
    m + 1 nodes (both directions); each entrant then follows m distinct
    nodes chosen with probability proportional to their total degree.
    """

    def get_description(self) -> str:
        return "cumulative advantage: attach with probability k_i / sum_j k_j"

    def generate(self, spec: BaselineSpec) -> DirectedGraph:
        n, m = spec.n, spec.m
        rng = numpy_rng(spec.seed, "pref_attach")
        seed_nodes = m + 1
        graph = DirectedGraph()
        graph.add_nodes(seed_nodes, turn=0)

        # Every edge endpoint appears once here, so a uniform pick from the
        # filled prefix is a pick proportional to total degree.
        endpoints = np.empty(2 * (seed_nodes * m + (n - seed_nodes) * m), dtype=np.int64)
        filled = 0
        for i in range(seed_nodes):
            for j in range(seed_nodes):
                if i != j:
                    graph.add_edge(i, j)
                    endpoints[filled:filled + 2] = (i, j)
                    filled += 2

        for turn, new_node in enumerate(range(seed_nodes, n), start=1):
            graph.add_node(turn)
            targets = []
            chosen = set()
            while len(targets) < m:
                candidate = int(endpoints[rng.integers(filled)])
                if candidate not in chosen:
                    chosen.add(candidate)
                    targets.append(candidate)
            for target in targets:
                graph.add_edge(new_node, target)
                endpoints[filled:filled + 2] = (new_node, target)
                filled += 2
        return graph
