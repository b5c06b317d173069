import random

from core.graph import DirectedGraph
from rules.base_rule import BaseRule, RuleContext, RuleOutcome


class TriadicClosureRule(BaseRule):
    """
    Ego discovers who its friends follow: a random node picks one of its
    out-neighbors, then one of that neighbor's out-neighbors, and follows it.
    """

    name = "triadic"
    cost_success = 3

    def get_description(self) -> str:
        return "close open two-paths by following a random neighbor of a random out-neighbor"

    def apply(self, graph: DirectedGraph, budget: int, ctx: RuleContext, rng: random.Random) -> RuleOutcome:
        outcome = RuleOutcome()
        n = graph.node_count
        if n == 0:
            return outcome
        while budget - outcome.actions_consumed >= 1:
            remaining = budget - outcome.actions_consumed
            ego = rng.randrange(n)
            linked = False
            if rng.random() < ctx.p and remaining >= self.cost_success:
                friends = graph._out_list(ego)
                if friends:
                    friend = friends[rng.randrange(len(friends))]
                    candidates = graph._out_list(friend)
                    if candidates:
                        candidate = candidates[rng.randrange(len(candidates))]
                        if candidate != ego:
                            linked = self._link(graph, ego, candidate, ctx)
            self._settle(outcome, linked)
        return outcome
