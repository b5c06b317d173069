import random
from typing import List, Sequence, Tuple

import numpy as np
from scipy import sparse


class DirectedGraph:
    """
    Grow-only directed simple graph.

    Nodes are dense integer ids assigned in creation order. Adjacency is kept
    twice: insertion-ordered lists (for deterministic iteration and uniform
    neighbor picks) and per-node out-sets (for O(1) duplicate checks).
    There is no removal API; the model never deletes nodes or ties.
    """

    def __init__(self):
        self._out: List[List[int]] = []
        self._in: List[List[int]] = []
        self._out_sets: List[set] = []
        self._birth_turn: List[int] = []
        self._edge_count = 0

    # ---- Construction -------------------------------------------------------

    def add_node(self, turn: int = 0) -> int:
        if self._birth_turn and turn < self._birth_turn[-1]:
            raise ValueError(f"birth turn {turn} precedes the last node's turn {self._birth_turn[-1]}")
        node_id = len(self._out)
        self._out.append([])
        self._in.append([])
        self._out_sets.append(set())
        self._birth_turn.append(turn)
        return node_id

    def add_nodes(self, count: int, turn: int = 0) -> List[int]:
        return [self.add_node(turn) for _ in range(count)]

    def add_edge(self, src: int, dst: int) -> bool:
        """Adds src -> dst. Returns False without mutating on self-loops and duplicates."""
        self._check(src)
        self._check(dst)
        if src == dst or dst in self._out_sets[src]:
            return False
        self._out_sets[src].add(dst)
        self._out[src].append(dst)
        self._in[dst].append(src)
        self._edge_count += 1
        return True

    # ---- Queries ------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._out)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __len__(self) -> int:
        return len(self._out)

    def in_degree(self, v: int) -> int:
        self._check(v)
        return len(self._in[v])

    def out_degree(self, v: int) -> int:
        self._check(v)
        return len(self._out[v])

    def birth_turn(self, v: int) -> int:
        self._check(v)
        return self._birth_turn[v]

    def neighbors_out(self, v: int) -> Sequence[int]:
        self._check(v)
        return tuple(self._out[v])

    def neighbors_in(self, v: int) -> Sequence[int]:
        self._check(v)
        return tuple(self._in[v])

    def random_node(self, rng: random.Random) -> int:
        if not self._out:
            raise ValueError("cannot sample a node from an empty graph")
        return rng.randrange(len(self._out))

    def edges(self) -> List[Tuple[int, int]]:
        """All edges sorted by (src, dst)."""
        return [(src, dst) for src in range(len(self._out)) for dst in sorted(self._out[src])]

    def in_degrees(self) -> np.ndarray:
        return np.fromiter((len(nbrs) for nbrs in self._in), dtype=np.int64, count=len(self._in))

    def out_degrees(self) -> np.ndarray:
        return np.fromiter((len(nbrs) for nbrs in self._out), dtype=np.int64, count=len(self._out))

    def undirected_csr(self) -> sparse.csr_matrix:
        """
        Symmetric 0/1 adjacency of the undirected projection; reciprocal pairs
        collapse into a single undirected edge.
        """
        n = len(self._out)
        src, dst = self._edge_arrays()
        rows = np.concatenate([src, dst])
        cols = np.concatenate([dst, src])
        data = np.ones(rows.shape[0], dtype=np.float64)
        adjacency = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        adjacency.data[:] = 1.0
        adjacency.sort_indices()
        return adjacency

    def undirected_edge_pairs(self) -> List[Tuple[int, int]]:
        pairs = set()
        for src, targets in enumerate(self._out):
            for dst in targets:
                pairs.add((src, dst) if src < dst else (dst, src))
        return sorted(pairs)

    # ---- Internal helpers ---------------------------------------------------

    # Hot-path accessors for the rule plugins. They skip id validation and
    # return the live lists; callers must not mutate them.
    def _out_list(self, v: int) -> List[int]:
        return self._out[v]

    def _in_list(self, v: int) -> List[int]:
        return self._in[v]

    def _out_set(self, v: int) -> set:
        return self._out_sets[v]

    def _in_degree_list(self) -> List[int]:
        return [len(nbrs) for nbrs in self._in]

    def _edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        src = np.empty(self._edge_count, dtype=np.int64)
        dst = np.empty(self._edge_count, dtype=np.int64)
        position = 0
        for s, targets in enumerate(self._out):
            k = len(targets)
            src[position:position + k] = s
            dst[position:position + k] = targets
            position += k
        return src, dst

    def _check(self, v: int):
        if not 0 <= v < len(self._out):
            raise IndexError(f"unknown node id {v}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self._out == other._out and self._in == other._in
                and self._birth_turn == other._birth_turn)

    def __repr__(self) -> str:
        return f"DirectedGraph(nodes={self.node_count}, edges={self.edge_count})"
