import random

from core.graph import DirectedGraph
from rules.base_rule import BaseRule, RuleContext, RuleOutcome


class CumulativeGrowthRule(BaseRule):
    """
    Relative preferential attachment: of two distinct random nodes (a, b),
    a follows b only when b is strictly more followed than a.
    """

    name = "cumulative"
    cost_success = 2

    def get_description(self) -> str:
        return "follow a randomly encountered node only if it has strictly higher in-degree"

    def apply(self, graph: DirectedGraph, budget: int, ctx: RuleContext, rng: random.Random) -> RuleOutcome:
        outcome = RuleOutcome()
        n = graph.node_count
        if n < 2:
            # No distinct pair exists; every observation fails.
            while budget - outcome.actions_consumed >= 1:
                outcome.record_failure()
            return outcome
        while budget - outcome.actions_consumed >= 1:
            remaining = budget - outcome.actions_consumed
            a = rng.randrange(n)
            b = rng.randrange(n - 1)
            if b >= a:
                b += 1
            linked = False
            if rng.random() < ctx.p and remaining >= self.cost_success:
                if len(graph._in_list(b)) > len(graph._in_list(a)):
                    linked = self._link(graph, a, b, ctx)
            self._settle(outcome, linked)
        return outcome
