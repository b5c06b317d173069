import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from core.graph import DirectedGraph

logger = logging.getLogger(__name__)

DIRECTIONS = ("in", "out", "total")


@dataclass
class DegreeHistogram:
    direction: str
    counts: Dict[int, int] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return sum(self.counts.values())

    def degree_sum(self) -> int:
        return sum(k * c for k, c in self.counts.items())

    def mean(self) -> float:
        total = self.node_count
        return self.degree_sum() / total if total else 0.0

    def as_rows(self):
        return sorted(self.counts.items())


def degree_array(graph: DirectedGraph, direction: str) -> np.ndarray:
    if direction == "in":
        return graph.in_degrees()
    if direction == "out":
        return graph.out_degrees()
    if direction == "total":
        return graph.in_degrees() + graph.out_degrees()
    raise ValueError(f"unknown degree direction {direction!r}; expected one of {DIRECTIONS}")


def degree_histogram(graph: DirectedGraph, direction: str) -> DegreeHistogram:
    degrees = degree_array(graph, direction)
    if degrees.size == 0:
        return DegreeHistogram(direction, {})
    counts = np.bincount(degrees)
    nonzero = np.flatnonzero(counts)
    return DegreeHistogram(direction, {int(k): int(counts[k]) for k in nonzero})


def ccdf_points(degrees: Iterable[int], kmin: int = 1):
    """(k, P(K >= k)) for every distinct observed degree k >= kmin."""
    values = np.asarray(list(degrees), dtype=np.int64)
    values = values[values >= kmin]
    if values.size == 0:
        return np.empty(0), np.empty(0)
    distinct, counts = np.unique(values, return_counts=True)
    tail = np.cumsum(counts[::-1])[::-1]
    return distinct.astype(float), tail / values.size


def ccdf_slope(degrees: Iterable[int], kmin: int = 1, min_tail: int = 10) -> Optional[float]:
    """
    Least-squares slope of log10 CCDF against log10 degree, over degrees >= kmin
    whose tail still holds at least `min_tail` observations.
    """
    values = np.asarray(list(degrees), dtype=np.int64)
    k, ccdf = ccdf_points(values, kmin)
    if k.size == 0:
        return None
    keep = ccdf * np.count_nonzero(values >= kmin) >= min_tail
    k, ccdf = k[keep], ccdf[keep]
    if k.size < 2:
        return None
    slope, _ = np.polyfit(np.log10(k), np.log10(ccdf), deg=1)
    return float(slope)


def skewness(values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float)
    if values.size < 3 or np.all(values == values[0]):
        return 0.0
    return float(stats.skew(values))


def growth_matched_null(ledger, p_random: float, n0: int) -> Dict[int, float]:
    """
    Expected in-degree histogram of a randomness-only run with this growth
    schedule. An entrant of turn t follows a given pre-existing node with
    probability p_random / n_pre(t); a node's in-degree is then (to within the
    Poisson limit of a sum of rare Bernoullis) Poisson with the summed rate.
    """
    sizes = [n0]
    for stats_row in ledger:
        sizes.append(sizes[-1] + stats_row.entrants)
    # rate[t] = expected random in-links per pre-existing node from turn t's entrants
    rates = np.array([row.entrants * p_random / sizes[i] for i, row in enumerate(ledger)], dtype=float)
    # Node born in turn b (b = 0 for the seed) is pre-existing for turns b+1 .. T.
    tail = np.concatenate([np.cumsum(rates[::-1])[::-1], [0.0]])
    cohort_sizes = [n0] + [row.entrants for row in ledger]
    lambdas = np.repeat(tail, cohort_sizes)
    if lambdas.size == 0:
        return {}
    k_max = int(max(10, np.ceil(lambdas.max() * 4 + 10)))
    ks = np.arange(k_max + 1)
    expected = stats.poisson.pmf(ks[:, None], lambdas[None, :]).sum(axis=1)
    return {int(k): float(e) for k, e in zip(ks, expected) if e > 0}


def chi_square_fit(observed: Dict[int, int], expected: Dict[int, float], min_expected: float = 5.0):
    """
    Chi-square goodness of fit after pooling adjacent degree bins until each
    pooled bin expects at least `min_expected` observations. The expected
    counts are rescaled to the observed total. Returns (statistic, p_value).
    """
    top = max(max(observed, default=0), max(expected, default=0))
    obs = np.array([observed.get(k, 0) for k in range(top + 1)], dtype=float)
    exp = np.array([expected.get(k, 0.0) for k in range(top + 1)], dtype=float)
    exp *= obs.sum() / exp.sum()

    pooled_obs, pooled_exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if pooled_obs:
            pooled_obs[-1] += acc_o
            pooled_exp[-1] += acc_e
        else:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
    if len(pooled_obs) < 2:
        return 0.0, 1.0
    statistic, p_value = stats.chisquare(pooled_obs, pooled_exp)
    return float(statistic), float(p_value)
