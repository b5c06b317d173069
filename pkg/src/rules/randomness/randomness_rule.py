import random

from core.graph import DirectedGraph
from rules.base_rule import BaseRule, RuleContext, RuleOutcome


class RandomnessRule(BaseRule):
    """
    Each entrant gets exactly one chance, on arrival, to follow a node chosen
    uniformly among those that were already in the network before this
    turn's entry batch.
    """

    name = "randomness"
    cost_success = 2

    def get_description(self) -> str:
        return "give each entrant one chance to follow a uniformly random existing node"

    def apply(self, graph: DirectedGraph, budget: int, ctx: RuleContext, rng: random.Random) -> RuleOutcome:
        outcome = RuleOutcome()
        if not ctx.entrants:
            return outcome
        # Entrants are consecutive ids, so everything below the first one pre-exists.
        pool = min(ctx.entrants)
        for entrant in ctx.entrants:
            remaining = budget - outcome.actions_consumed
            if remaining < 1:
                break
            linked = False
            if rng.random() < ctx.p and remaining >= self.cost_success and pool > 0:
                target = rng.randrange(pool)
                linked = self._link(graph, entrant, target, ctx)
            self._settle(outcome, linked)
        return outcome
