import copy
import random

import networkx as nx
import pytest

from conftest import ScriptedRandom, has_edge, make_graph, random_digraph
from rules.base_rule import RuleContext, RuleOutcome
from rules.cumulative.cumulative_rule import CumulativeGrowthRule
from rules.distance.distance_rule import DistanceClosureRule, top_nodes, within_two_hops
from rules.randomness.randomness_rule import RandomnessRule
from rules.triadic.triadic_rule import TriadicClosureRule

ALL_RULES = (RandomnessRule(), TriadicClosureRule(), CumulativeGrowthRule(), DistanceClosureRule())


def ctx(p, entrants=(), kappa=None, top_k=5, distance_check=True):
    return RuleContext(p=p, entrants=list(entrants), kappa=kappa, created_this_turn={},
                       top_k=top_k, distance_check=distance_check)


def assert_cost_identity(rule, outcome: RuleOutcome):
    failures = outcome.attempts - outcome.successes
    assert outcome.actions_consumed == outcome.successes * rule.cost_success + failures


# ---- randomness ----------------------------------------------------------------------

def test_randomness_with_p_zero_fails_every_entrant():
    graph = make_graph(10, [])
    outcome = RandomnessRule().apply(graph, 100, ctx(0.0, entrants=range(5, 10)), random.Random(1))
    assert (outcome.successes, outcome.actions_consumed) == (0, 5)
    assert graph.edge_count == 0


def test_randomness_forced_success():
    graph = make_graph(3, [])
    outcome = RandomnessRule().apply(graph, 100, ctx(1.0, entrants=[2]), random.Random(1))
    assert (outcome.successes, outcome.actions_consumed) == (1, 2)
    assert graph.out_degree(2) == 1


def test_randomness_respects_budget_cap():
    graph = make_graph(6, [])
    outcome = RandomnessRule().apply(graph, 2, ctx(1.0, entrants=[3, 4, 5]), random.Random(1))
    assert (outcome.successes, outcome.actions_consumed) == (1, 2)


def test_randomness_targets_only_pre_existing_nodes():
    graph = make_graph(10, [])
    for seed in range(30):
        trial = copy.deepcopy(graph)
        RandomnessRule().apply(trial, 100, ctx(1.0, entrants=range(5, 10)), random.Random(seed))
        assert all(dst < 5 for _, dst in trial.edges())
        assert all(trial.out_degree(v) == 1 for v in range(5, 10))


# ---- triadic -------------------------------------------------------------------------

def test_triadic_closes_the_only_open_two_path():
    graph = make_graph(3, [(0, 1), (1, 2)])
    rng = ScriptedRandom(ranges=[0, 0, 0])
    outcome = TriadicClosureRule().apply(graph, 3, ctx(1.0), rng)
    assert has_edge(graph, 0, 2)
    assert (outcome.successes, outcome.actions_consumed) == (1, 3)


def test_triadic_with_larger_budget_keeps_cost_identity():
    graph = make_graph(3, [(0, 1), (1, 2)])
    rule = TriadicClosureRule()
    outcome = rule.apply(graph, 9, ctx(1.0), ScriptedRandom(ranges=[0, 0, 0]))
    assert has_edge(graph, 0, 2)
    assert outcome.actions_consumed == 9
    assert_cost_identity(rule, outcome)


def test_triadic_on_edgeless_graph_only_fails():
    graph = make_graph(5, [])
    outcome = TriadicClosureRule().apply(graph, 7, ctx(1.0), random.Random(3))
    assert (outcome.successes, outcome.attempts, outcome.actions_consumed) == (0, 7, 7)


def test_triadic_closure_raises_transitivity():
    graph = make_graph(4, [(0, 1), (1, 2), (2, 3)])
    before = nx.transitivity(nx.Graph(graph.undirected_edge_pairs()))
    TriadicClosureRule().apply(graph, 3, ctx(1.0), ScriptedRandom(ranges=[0, 0, 0]))
    after = nx.transitivity(nx.Graph(graph.undirected_edge_pairs()))
    assert before == 0.0
    assert after > before


# ---- cumulative ----------------------------------------------------------------------

def popular_one():
    """Node 1 has in-degree 5 (from 2..6); node 0 has in-degree 0."""
    return make_graph(7, [(v, 1) for v in range(2, 7)])


def test_cumulative_links_towards_higher_in_degree():
    graph = popular_one()
    outcome = CumulativeGrowthRule().apply(graph, 2, ctx(1.0), ScriptedRandom(ranges=[0, 0]))
    assert has_edge(graph, 0, 1)
    assert (outcome.successes, outcome.actions_consumed) == (1, 2)


def test_cumulative_reversed_draw_fails():
    graph = popular_one()
    edges_before = graph.edge_count
    outcome = CumulativeGrowthRule().apply(graph, 2, ctx(1.0), ScriptedRandom(ranges=[1, 0, 1, 0]))
    assert graph.edge_count == edges_before
    assert (outcome.successes, outcome.actions_consumed) == (0, 2)


def test_cumulative_equal_in_degrees_never_link():
    graph = make_graph(2, [])
    outcome = CumulativeGrowthRule().apply(graph, 50, ctx(1.0), random.Random(4))
    assert graph.edge_count == 0
    assert outcome.actions_consumed == 50


def test_cumulative_single_node_graph_spends_budget():
    graph = make_graph(1, [])
    outcome = CumulativeGrowthRule().apply(graph, 4, ctx(1.0), random.Random(4))
    assert (outcome.attempts, outcome.actions_consumed) == (4, 4)


def test_cumulative_never_links_to_weakly_smaller_in_degree():
    graph = random_digraph(40, 0.05, seed=5)
    rule = CumulativeGrowthRule()
    rng = random.Random(6)
    for _ in range(300):
        in_before = graph.in_degrees()
        edges_before = set(graph.edges())
        rule.apply(graph, 2, ctx(1.0), rng)
        for a, b in set(graph.edges()) - edges_before:
            assert in_before[b] > in_before[a]


# ---- distance ------------------------------------------------------------------------

def hub_graph():
    """Leaves 1..4 follow hub 0; node 5 is isolated."""
    return make_graph(6, [(leaf, 0) for leaf in range(1, 5)])


def test_top_nodes_breaks_ties_towards_lower_id():
    graph = make_graph(6, [(0, 3), (1, 3), (0, 4), (1, 4), (2, 5)])
    assert top_nodes(graph, 2) == [3, 4]
    assert top_nodes(graph, 3) == [3, 4, 5]
    assert top_nodes(graph, 50) == [3, 4, 5, 0, 1, 2]


def test_within_two_hops():
    graph = make_graph(6, [(0, 1), (2, 1), (3, 4)])
    assert within_two_hops(graph, 0, 1)
    assert within_two_hops(graph, 0, 2)
    assert not within_two_hops(graph, 0, 3)
    assert not within_two_hops(graph, 0, 0)


def test_distance_rule_links_leaf_to_hub_without_check():
    graph = hub_graph()
    outcome = DistanceClosureRule().apply(graph, 2, ctx(1.0, top_k=1, distance_check=False),
                                          ScriptedRandom(ranges=[5, 0]))
    assert has_edge(graph, 5, 0)
    assert (outcome.successes, outcome.actions_consumed) == (1, 2)


def test_distance_check_blocks_disjoint_component():
    graph = make_graph(7, [(leaf, 0) for leaf in range(1, 5)] + [(5, 6)])
    outcome = DistanceClosureRule().apply(graph, 10, ctx(1.0, top_k=1, distance_check=True),
                                          ScriptedRandom(ranges=[5, 0] * 10))
    assert outcome.successes == 0
    assert outcome.actions_consumed == 10
    assert not has_edge(graph, 5, 0)


def test_singleton_top_list_receives_every_link():
    graph = make_graph(12, [(v, 7) for v in range(6)] + [(8, 9)])
    before = set(graph.edges())
    outcome = DistanceClosureRule().apply(graph, 200, ctx(1.0, top_k=1, distance_check=False),
                                          random.Random(12))
    created = set(graph.edges()) - before
    assert outcome.successes == len(created) > 0
    assert all(dst == 7 for _, dst in created)


# ---- shared properties -------------------------------------------------------------

@pytest.mark.parametrize("rule", ALL_RULES, ids=lambda r: r.name)
def test_rule_leaves_graph_unchanged_at_p_zero_or_no_budget(rule):
    graph = random_digraph(30, 0.08, seed=2)
    entrants = range(25, 30)
    for p, budget in ((0.0, 100), (1.0, 0)):
        trial = copy.deepcopy(graph)
        outcome = rule.apply(trial, budget, ctx(p, entrants=entrants), random.Random(1))
        assert trial == graph
        assert outcome.successes == 0
        assert outcome.actions_consumed <= budget


@pytest.mark.parametrize("rule", ALL_RULES, ids=lambda r: r.name)
def test_cost_identity_and_budget_bound(rule):
    rng = random.Random(21)
    for trial in range(40):
        graph = random_digraph(rng.randint(2, 40), rng.random() * 0.2, seed=trial)
        n = graph.node_count
        entrants = range(max(0, n - rng.randint(0, 5)), n)
        budget = rng.randint(0, 60)
        outcome = rule.apply(graph, budget, ctx(rng.random(), entrants=entrants, top_k=rng.randint(1, 5),
                                                distance_check=rng.random() < 0.5), rng)
        assert outcome.actions_consumed <= budget
        assert_cost_identity(rule, outcome)


@pytest.mark.parametrize("rule", ALL_RULES[1:], ids=lambda r: r.name)
def test_kappa_caps_creations_per_node(rule):
    graph = random_digraph(25, 0.15, seed=9)
    context = ctx(1.0, kappa=1, top_k=5, distance_check=False)
    before = graph.out_degrees()
    outcome = rule.apply(graph, 400, context, random.Random(10))
    gained = graph.out_degrees() - before
    assert gained.max() <= 1
    assert sum(context.created_this_turn.values()) == outcome.successes == gained.sum()


@pytest.mark.parametrize("rule", ALL_RULES[1:], ids=lambda r: r.name)
def test_success_grows_with_probability(rule):
    def mean_successes(p):
        total = 0
        for seed in range(20):
            graph = random_digraph(40, 0.08, seed=100 + seed)
            total += rule.apply(graph, 120, ctx(p, distance_check=False), random.Random(seed)).successes
        return total / 20

    assert mean_successes(1.0) >= mean_successes(0.5)
