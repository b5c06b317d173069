import random

import networkx as nx
import numpy as np
import pytest
from scipy import stats

from baselines.baseline_generator import generate_erdos_renyi
from conftest import make_graph, random_digraph
from core.dynamics import SimParams, run
from core.errors import MetricUndefinedError
from core.graph import DirectedGraph
from metrics.centrality import betweenness, eigenvector_centrality
from metrics.community import clustering_summary, modularity, to_undirected_nx
from metrics.degree import (ccdf_points, ccdf_slope, chi_square_fit, degree_histogram, growth_matched_null,
                            skewness)
from metrics.metrics_report import compute_report
from metrics.paths import closeness, diameter_and_apl, largest_component, path_statistics
from metrics.settings import MetricSettings


# ---- degree ----------------------------------------------------------------------------

def test_degree_histogram_census():
    graph = make_graph(3, [(0, 1), (0, 2)])
    assert degree_histogram(graph, "out").counts == {2: 1, 0: 2}
    assert degree_histogram(graph, "in").counts == {0: 1, 1: 2}
    assert degree_histogram(DirectedGraph(), "in").counts == {}


def test_degree_histogram_moments():
    graph = random_digraph(60, 0.1, seed=4)
    for direction in ("in", "out"):
        histogram = degree_histogram(graph, direction)
        assert histogram.node_count == graph.node_count
        assert histogram.degree_sum() == graph.edge_count
        assert histogram.mean() == pytest.approx(graph.edge_count / graph.node_count)


def test_unknown_direction():
    with pytest.raises(ValueError):
        degree_histogram(make_graph(2, []), "sideways")


def test_erdos_renyi_in_degrees_fit_binomial():
    n, p = 2000, 0.002
    graph = generate_erdos_renyi(n, p, seed=17)
    observed = degree_histogram(graph, "in").counts
    ks = np.arange(0, 40)
    expected = {int(k): float(e) for k, e in zip(ks, n * stats.binom.pmf(ks, n - 1, p))}
    _, p_value = chi_square_fit(observed, expected)
    assert p_value > 0.01


def test_chi_square_rejects_a_wrong_null():
    graph = generate_erdos_renyi(2000, 0.002, seed=17)
    observed = degree_histogram(graph, "in").counts
    ks = np.arange(0, 40)
    expected = {int(k): float(e) for k, e in zip(ks, 2000 * stats.poisson.pmf(ks, 12.0))}
    _, p_value = chi_square_fit(observed, expected)
    assert p_value < 1e-6


def test_ccdf_points_start_at_one():
    k, ccdf = ccdf_points([1, 1, 2, 3, 0], kmin=1)
    assert list(k) == [1, 2, 3]
    assert list(ccdf) == [1.0, 0.5, 0.25]


def test_ccdf_slope_of_a_power_law():
    # Degrees with P(K >= k) = k^-2 exactly on a grid of quantiles.
    q = (np.arange(200_000) + 0.5) / 200_000
    degrees = np.floor((1 - q) ** (-1 / 2.0)).astype(int)
    assert ccdf_slope(degrees, kmin=1) == pytest.approx(-2.0, abs=0.15)


def test_ccdf_slope_needs_a_tail():
    assert ccdf_slope([0, 0, 0]) is None
    assert ccdf_slope([1] * 50) is None


def test_skewness_of_symmetric_sample_is_zero():
    assert skewness([1, 2, 3, 4, 5]) == pytest.approx(0.0)
    assert skewness([1, 1, 1, 10]) > 0
    assert skewness([4, 4, 4]) == 0.0


# ---- paths ------------------------------------------------------------------------------

def test_path_diameter_and_apl(path4):
    diameter, apl = diameter_and_apl(path4)
    assert diameter == 3
    assert apl == pytest.approx(20 / 12)


def test_triangle_diameter_and_apl(triangle):
    assert diameter_and_apl(triangle) == (1, pytest.approx(1.0))


def test_disjoint_edges_use_one_component():
    graph = make_graph(4, [(0, 1), (2, 3)])
    assert diameter_and_apl(graph) == (1, pytest.approx(1.0))


def test_isolated_nodes_give_zero_paths():
    assert diameter_and_apl(make_graph(3, [])) == (0, 0.0)


def test_empty_graph_has_no_paths():
    with pytest.raises(ValueError):
        diameter_and_apl(DirectedGraph())


def test_largest_component_tie_goes_to_lowest_node():
    labels = np.array([1, 1, 0, 0, 2])
    assert largest_component(labels) == 1


def test_sampling_that_covers_every_source_matches_exact():
    graph = random_digraph(120, 0.03, seed=8)
    exact = path_statistics(graph, MetricSettings())
    sampled = path_statistics(graph, MetricSettings(exact_threshold=50, path_samples=500))
    assert sampled.sampled and not exact.sampled
    assert sampled.diameter == exact.diameter
    assert sampled.avg_path_length == pytest.approx(exact.avg_path_length, rel=1e-12)
    assert sampled.closeness_sampled
    np.testing.assert_allclose(sampled.closeness, exact.closeness, rtol=1e-9)


def test_sampled_paths_are_flagged_and_bounded():
    graph = random_digraph(300, 0.01, seed=9)
    exact = path_statistics(graph, MetricSettings())
    sampled = path_statistics(graph, MetricSettings(exact_threshold=100, path_samples=40))
    assert sampled.sampled and sampled.sources == 40
    assert sampled.diameter <= exact.diameter
    assert sampled.avg_path_length == pytest.approx(exact.avg_path_length, rel=0.1)


def test_path_results_do_not_depend_on_thread_count():
    graph = random_digraph(400, 0.008, seed=10)
    one = path_statistics(graph, MetricSettings(threads=1, chunk_size=16))
    many = path_statistics(graph, MetricSettings(threads=8, chunk_size=16))
    assert one.diameter == many.diameter
    assert one.avg_path_length == many.avg_path_length
    assert np.array_equal(one.closeness, many.closeness)


# ---- closeness --------------------------------------------------------------------------

def test_star_closeness(star4):
    scores = closeness(star4)
    assert scores[0] == pytest.approx(1.0)
    assert scores[1] == pytest.approx(4 / 7)


def test_isolated_node_closeness_is_zero():
    graph = make_graph(4, [(0, 1), (1, 2)])
    assert closeness(graph)[3] == 0.0


def test_closeness_in_small_components():
    graph = make_graph(7, [(0, 1), (1, 2), (2, 3), (4, 5)])
    scores = closeness(graph)
    assert scores[4] == scores[5] == 1.0
    assert scores[6] == 0.0


# ---- betweenness ------------------------------------------------------------------------

def test_path_betweenness():
    graph = make_graph(3, [(0, 1), (1, 2)])
    assert list(betweenness(graph)) == [0.0, 1.0, 0.0]


def test_star_betweenness(star4):
    scores = betweenness(star4)
    assert scores[0] == pytest.approx(6.0)
    assert np.all(scores[1:] == 0.0)


def test_sampled_betweenness_with_every_pivot_is_exact():
    graph = random_digraph(80, 0.04, seed=12)
    exact = betweenness(graph, "exact")
    sampled = betweenness(graph, "sampled", k=80)
    np.testing.assert_allclose(sampled, exact, rtol=1e-12)


def test_betweenness_rejects_unknown_mode():
    with pytest.raises(ValueError):
        betweenness(make_graph(3, [(0, 1)]), "approximate")


def test_betweenness_does_not_depend_on_worker_count():
    graph = random_digraph(150, 0.03, seed=13)
    one = betweenness(graph, settings=MetricSettings(threads=1, chunk_size=16))
    many = betweenness(graph, settings=MetricSettings(threads=4, chunk_size=16))
    assert np.array_equal(one, many)


# ---- eigenvector ------------------------------------------------------------------------

def test_star_eigenvector(star4):
    result = eigenvector_centrality(star4)
    assert result.converged
    assert np.all(result.scores[0] > result.scores[1:])
    np.testing.assert_allclose(result.scores[1:], result.scores[1], rtol=1e-9)
    assert np.linalg.norm(result.scores) == pytest.approx(1.0)


def test_cycle_eigenvector_is_uniform():
    graph = make_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    result = eigenvector_centrality(graph)
    np.testing.assert_allclose(result.scores, 0.5, rtol=1e-9)


def test_edgeless_eigenvector_is_flagged():
    result = eigenvector_centrality(make_graph(3, []))
    assert result.edgeless and not result.converged
    assert np.all(result.scores == 0.0)


def test_eigenvector_matches_dense_solver():
    graph = random_digraph(50, 0.1, seed=14)
    result = eigenvector_centrality(graph, tol=1e-12, max_iter=100_000)
    values, vectors = np.linalg.eigh(graph.undirected_csr().toarray())
    reference = np.abs(vectors[:, np.argmax(values)])
    cosine = float(result.scores @ reference)
    assert result.converged
    assert 1.0 - cosine < 1e-6


# ---- community --------------------------------------------------------------------------

def partition_q(graph, partition):
    communities = {}
    for node, label in enumerate(partition):
        communities.setdefault(label, set()).add(node)
    return nx.community.modularity(to_undirected_nx(graph), list(communities.values()))


def test_bridged_triangles_modularity(bridged_triangles):
    q = partition_q(bridged_triangles, [0, 0, 0, 1, 1, 1])
    assert q == pytest.approx(2 * (3 / 7 - (7 / 14) ** 2), abs=1e-9)


def test_louvain_finds_at_least_the_natural_split(bridged_triangles):
    q, partition = modularity(bridged_triangles, seed=1)
    assert q >= partition_q(bridged_triangles, [0] * 6)
    assert q == pytest.approx(0.357142857, abs=1e-6)
    assert partition[0] == 0


def test_complete_graph_single_community_has_zero_modularity():
    graph = make_graph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert partition_q(graph, [0] * 5) == pytest.approx(0.0, abs=1e-12)


def test_modularity_is_deterministic_for_a_seed():
    graph = random_digraph(150, 0.03, seed=15)
    assert modularity(graph, seed=3) == modularity(graph, seed=3)


def test_modularity_of_edgeless_graph_is_undefined():
    with pytest.raises(MetricUndefinedError, match="undefined"):
        modularity(make_graph(4, []))


def test_disconnected_communities_have_non_negative_modularity():
    graph = make_graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    q, _ = modularity(graph, seed=0)
    assert q >= 0.0


def test_clustering_summary(triangle, path4):
    assert clustering_summary(triangle) == (pytest.approx(1.0), pytest.approx(1.0))
    assert clustering_summary(path4) == (0.0, 0.0)
    assert clustering_summary(DirectedGraph()) == (0.0, 0.0)


def test_clustering_summary_agrees_with_networkx():
    for seed, (n, p) in enumerate([(30, 0.2), (120, 0.05), (400, 0.01), (60, 0.5)]):
        graph = random_digraph(n, p, seed=seed)
        projection = to_undirected_nx(graph)
        transitivity, average = clustering_summary(graph)
        assert transitivity == pytest.approx(nx.transitivity(projection), abs=1e-12)
        assert average == pytest.approx(nx.average_clustering(projection), abs=1e-12)


def test_clustering_of_a_hub_with_closed_spokes():
    # Star 0 -> 1..6 plus the ring 1-2-...-6-1: six triangles through the hub.
    edges = [(0, k) for k in range(1, 7)] + [(k, k % 6 + 1) for k in range(1, 7)]
    transitivity, average = clustering_summary(make_graph(8, edges))
    assert transitivity == pytest.approx(18 / (15 + 6 * 3))
    assert average == pytest.approx((6 / 15 + 6 * (2 / 3)) / 8)


# ---- reference oracle suite --------------------------------------------------------------

def _oracle_paths(projection):
    components = sorted(nx.connected_components(projection), key=lambda c: (-len(c), min(c)))
    main = projection.subgraph(components[0])
    if main.number_of_nodes() < 2:
        return 0, 0.0
    return nx.diameter(main), nx.average_shortest_path_length(main)


def _counted_betweenness(graph):
    """Pair-by-pair betweenness. The first power of A that reaches t from s gives d(s, t) and the path count."""
    adjacency = graph.undirected_csr().toarray()
    n = len(adjacency)
    dist = np.where(np.eye(n) > 0, 0.0, np.inf)
    sigma = np.eye(n)
    walks = np.eye(n)
    for length in range(1, n):
        walks = walks @ adjacency
        reached = (walks > 0) & np.isinf(dist)
        if not reached.any():
            break
        dist[reached] = length
        sigma[reached] = walks[reached]
    scores = np.zeros(n)
    connected = np.isfinite(dist)
    for v in range(n):
        through = connected & (dist[:, [v]] + dist[[v], :] == dist)
        share = np.where(through, sigma[:, [v]] * sigma[[v], :] / np.where(connected, sigma, 1.0), 0.0)
        share[v, :] = 0.0
        share[:, v] = 0.0
        scores[v] = np.triu(share, 1).sum()
    return scores


def test_metrics_match_reference_implementations():
    rng = random.Random(2718)
    for trial in range(50):
        n = rng.randint(2, 200)
        graph = random_digraph(n, min(1.0, rng.uniform(0.5, 3.0) / n), seed=trial)
        projection = to_undirected_nx(graph)

        np.testing.assert_allclose(betweenness(graph), _counted_betweenness(graph), rtol=1e-6, atol=1e-9)

        expected_closeness = nx.closeness_centrality(projection, wf_improved=False)
        np.testing.assert_allclose(closeness(graph), [expected_closeness[v] for v in range(n)],
                                   rtol=1e-6, atol=1e-12)

        diameter, apl = diameter_and_apl(graph)
        expected_diameter, expected_apl = _oracle_paths(projection)
        assert diameter == expected_diameter
        assert apl == pytest.approx(expected_apl, rel=1e-6)

        if graph.edge_count:
            values, vectors = np.linalg.eigh(graph.undirected_csr().toarray())
            ordered = np.sort(values)
            if ordered[-1] - ordered[-2] > 0.1:
                result = eigenvector_centrality(graph, tol=1e-11, max_iter=100_000)
                reference = np.abs(vectors[:, np.argmax(values)])
                np.testing.assert_allclose(result.scores, reference, rtol=1e-5, atol=1e-6)


# ---- report -----------------------------------------------------------------------------

def test_triangle_report(triangle):
    report = compute_report(triangle)
    assert report.avg_degree == 1.0
    assert report.diameter == 1
    assert report.avg_degree * report.nodes == report.edges
    assert report.flags["paths"] == "exact"
    assert report.flags["eigenvector"] == "converged"
    assert set(report.centralities) == {"eigenvector", "betweenness", "closeness"}
    assert report.avg_path_length <= report.diameter


def test_empty_report():
    report = compute_report(DirectedGraph())
    assert report.nodes == 0
    assert report.modularity is None
    assert report.flags["modularity"] == "undefined"


def test_quick_report_skips_paths(bridged_triangles):
    report = compute_report(bridged_triangles, full=False)
    assert report.flags["paths"] == "skipped"
    assert report.modularity is not None
    assert report.centralities == {}


def test_degree_ratios(star4):
    report = compute_report(star4)
    assert report.max_in_degree == 4
    assert report.degree_ratio("in") == pytest.approx(4 / 0.8)
    assert report.degree_ratio("out") == pytest.approx(1 / 0.8)


def test_all_centralities_are_non_negative():
    report = compute_report(random_digraph(80, 0.04, seed=19))
    for scores in report.centralities.values():
        assert np.all(scores >= 0)


def test_growth_matched_null_accepts_a_randomness_only_run():
    params = SimParams(n0=10, target_nodes=2000, seed=5, profile="random_only")
    graph, ledger = run(params)
    null = growth_matched_null(ledger, params.p_random, params.n0)
    assert sum(null.values()) == pytest.approx(graph.node_count, rel=1e-6)
    _, p_value = chi_square_fit(degree_histogram(graph, "in").counts, null)
    assert p_value > 0.01


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_randomness_alone_gives_each_entrant_at_most_one_follow(seed):
    graph, ledger = run(SimParams(n0=10, target_nodes=2000, seed=seed, profile="random_only"))
    assert graph.out_degrees().max() <= 1
    assert all(stats_row.edges_by_rule[0] <= stats_row.entrants for stats_row in ledger)
    assert all(stats_row.edges_by_rule[1:] == [0, 0, 0] for stats_row in ledger)

    mixed, _ = run(SimParams(n0=10, target_nodes=2000, seed=seed, p_random=0.3, p_triadic=0.0,
                             p_cumulative=0.25, p_distance=0.0))
    density = graph.edge_count / graph.node_count
    assert abs((mixed.edge_count / mixed.node_count) / density - 1) < 0.35
    assert stats.skew(graph.in_degrees()) < stats.skew(mixed.in_degrees())


def test_growth_matched_null_of_an_empty_ledger():
    null = growth_matched_null([], 0.9, 10)
    assert null == {0: pytest.approx(10.0)}
