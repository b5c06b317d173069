import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from core.graph import DirectedGraph


@dataclass
class RuleOutcome:
    attempts: int = 0
    successes: int = 0
    actions_consumed: int = 0

    def record_success(self, cost: int):
        self.attempts += 1
        self.successes += 1
        self.actions_consumed += cost

    def record_failure(self):
        self.attempts += 1
        self.actions_consumed += 1


@dataclass
class RuleContext:
    """
    Everything a rule may read besides the graph: its probability, the
    entrants of the current turn and the per-turn edge-creation ledger used to
    enforce kappa. `created_this_turn` is shared by all rules of a turn.
    """
    p: float
    entrants: Sequence[int] = ()
    kappa: Optional[int] = None
    created_this_turn: Optional[Dict[int, int]] = None
    top_k: int = 1
    distance_check: bool = True


class BaseRule(ABC):
    """
    Abstract Base Class for all link-formation rules.
    Each rule consumes a sub-budget of actions: one action per observation
    plus the extra cost of following through on a successful Bernoulli test.
    """

    name: str = ""
    cost_success: int = 2

    @abstractmethod
    def get_description(self) -> str:
        """
        Returns a brief description of the social force the rule models.
        """
        pass

    @abstractmethod
    def apply(self, graph: DirectedGraph, budget: int, ctx: RuleContext, rng: random.Random) -> RuleOutcome:
        """
        Runs attempts until the budget (or, for entry-driven rules, the
        entrant list) is exhausted. Never spends more than `budget`.
        """
        pass

    def _link(self, graph: DirectedGraph, src: int, dst: int, ctx: RuleContext) -> bool:
        # Blocked by kappa or an existing tie: the observation happened, the follow did not.
        ledger = ctx.created_this_turn
        if ctx.kappa is not None and ledger is not None and ledger.get(src, 0) >= ctx.kappa:
            return False
        if not graph.add_edge(src, dst):
            return False
        if ledger is not None:
            ledger[src] = ledger.get(src, 0) + 1
        return True

    def _settle(self, outcome: RuleOutcome, linked: bool):
        if linked:
            outcome.record_success(self.cost_success)
        else:
            outcome.record_failure()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, cost_success={self.cost_success})"
