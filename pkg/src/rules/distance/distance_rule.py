import heapq
import random
from typing import List

from core.graph import DirectedGraph
from rules.base_rule import BaseRule, RuleContext, RuleOutcome


def top_nodes(graph: DirectedGraph, top_k: int) -> List[int]:
    """The top_k nodes by in-degree; ties go to the lower id."""
    in_degrees = graph._in_degree_list()
    return heapq.nlargest(min(top_k, len(in_degrees)), range(len(in_degrees)),
                          key=lambda v: (in_degrees[v], -v))


def within_two_hops(graph: DirectedGraph, ego: int, alter: int) -> bool:
    """Undirected distance between ego and alter is 1 or 2."""
    if ego == alter:
        return False
    alter_out = graph._out_set(alter)
    if alter in graph._out_set(ego) or ego in alter_out:
        return True
    for middle in graph._out_list(ego):
        if alter in graph._out_set(middle) or middle in alter_out:
            return True
    for middle in graph._in_list(ego):
        if alter in graph._out_set(middle) or middle in alter_out:
            return True
    return False


class DistanceClosureRule(BaseRule):
    """
    Platform-style recommendation: a random node follows one of the globally
    most-followed nodes, optionally only when that node is already within
    two undirected hops.
    """

    name = "distance"
    cost_success = 2

    def get_description(self) -> str:
        return "follow a random top in-degree node, optionally only within undirected distance 2"

    def apply(self, graph: DirectedGraph, budget: int, ctx: RuleContext, rng: random.Random) -> RuleOutcome:
        outcome = RuleOutcome()
        n = graph.node_count
        if n == 0:
            return outcome
        # Computed once per invocation, like the list of top nodes a recommender publishes.
        tops = top_nodes(graph, ctx.top_k)
        while budget - outcome.actions_consumed >= 1:
            remaining = budget - outcome.actions_consumed
            ego = rng.randrange(n)
            top = tops[rng.randrange(len(tops))]
            linked = False
            if rng.random() < ctx.p and remaining >= self.cost_success and ego != top:
                if not ctx.distance_check or within_two_hops(graph, ego, top):
                    linked = self._link(graph, ego, top, ctx)
            self._settle(outcome, linked)
        return outcome
