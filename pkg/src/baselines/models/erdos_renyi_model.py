import numpy as np

from baselines.baseline_generator import BaselineGenerator, BaselineSpec
from core.graph import DirectedGraph
from core.seeding import numpy_rng


class ErdosRenyiGenerator(BaselineGenerator):
    """
    Directed G(n, p): every ordered pair (i, j), i != j, holds an edge
    independently with probability p. Per source, the out-degree is drawn
    from Binomial(n - 1, p) and the targets uniformly without replacement,
    which is the same distribution without touching all n^2 pairs.
    """

    def get_description(self) -> str:
        return "uniform random directed graph G(n, p)"

    def generate(self, spec: BaselineSpec) -> DirectedGraph:
        n, p = spec.n, spec.p
        rng = numpy_rng(spec.seed, "erdos_renyi")
        graph = DirectedGraph()
        graph.add_nodes(n, turn=0)
        if p == 0.0:
            return graph
        out_degrees = rng.binomial(n - 1, p, size=n)
        for src in range(n):
            k = int(out_degrees[src])
            if k == 0:
                continue
            # Draw among the n - 1 other nodes, then skip over src itself.
            targets = np.sort(rng.choice(n - 1, size=k, replace=False))
            targets[targets >= src] += 1
            for dst in targets.tolist():
                graph.add_edge(src, dst)
        return graph
