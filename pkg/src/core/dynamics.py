import importlib
import logging
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from config import Config
from core.errors import ConfigError, SimulationError
from core.graph import DirectedGraph
from core.seeding import simulation_rng
from rules.base_rule import BaseRule, RuleContext

logger = logging.getLogger(__name__)

RULE_NAMES = ("randomness", "triadic", "cumulative", "distance")

# Absorbs float noise such as 0.29 * 100 = 28.999999999999996 before flooring.
_ROUNDING_SLACK = 1e-9


@dataclass
class SimParams:
    nu: float = Config.NU
    psi: float = Config.PSI
    kappa: int = Config.KAPPA
    p_random: float = Config.P_RANDOM
    p_triadic: float = Config.P_TRIADIC
    p_cumulative: float = Config.P_CUMULATIVE
    p_distance: float = Config.P_DISTANCE
    top_k: int = Config.TOP_K
    distance_check: bool = Config.DISTANCE_CHECK
    n0: int = Config.N0
    target_nodes: int = Config.TARGET_NODES
    seed: int = Config.SEED
    budget_split: Tuple[float, float, float, float] = Config.BUDGET_SPLIT
    profile: str = Config.PROFILE

    def __post_init__(self):
        self.budget_split = tuple(float(x) for x in self.budget_split)

    def problems(self) -> List[str]:
        """Every violated invariant as a `field: message` string."""
        found = []
        for name in ("p_random", "p_triadic", "p_cumulative", "p_distance", "nu"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                found.append(f"{name}: must be in [0, 1], got {value}")
        if self.psi < 1.0:
            found.append(f"psi: must be >= 1, got {self.psi}")
        for name in ("kappa", "top_k", "n0"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                found.append(f"{name}: must be a positive integer, got {value!r}")
        if not isinstance(self.target_nodes, int) or self.target_nodes < self.n0:
            found.append(f"target_nodes: must be an integer >= n0 ({self.n0}), got {self.target_nodes!r}")
        if len(self.budget_split) != 4:
            found.append(f"budget_split: needs four fractions, got {len(self.budget_split)}")
        elif any(x < 0 for x in self.budget_split) or abs(sum(self.budget_split) - 1.0) > 1e-9:
            found.append(f"budget_split: must be non-negative and sum to 1, got {list(self.budget_split)}")
        if self.profile not in Config.RULE_PROFILES:
            found.append(f"profile: unknown profile {self.profile!r} (known: {', '.join(sorted(Config.RULE_PROFILES))})")
        return found

    def validate(self) -> "SimParams":
        found = self.problems()
        if found:
            raise ConfigError(found)
        return self

    def probabilities(self) -> Dict[str, float]:
        """Per-rule probabilities with rules outside the active profile forced to 0."""
        enabled = set(Config.RULE_PROFILES[self.profile])
        raw = {
            "randomness": self.p_random,
            "triadic": self.p_triadic,
            "cumulative": self.p_cumulative,
            "distance": self.p_distance,
        }
        return {name: (p if name in enabled else 0.0) for name, p in raw.items()}

    def to_dict(self) -> dict:
        data = asdict(self)
        data["budget_split"] = list(self.budget_split)
        return data


@dataclass
class TurnStats:
    turn: int
    entrants: int
    tau: int
    consumed_by_rule: List[int] = field(default_factory=lambda: [0, 0, 0, 0])
    edges_by_rule: List[int] = field(default_factory=lambda: [0, 0, 0, 0])
    carry: float = 0.0
    nodes: int = 0
    edges: int = 0

    @property
    def consumed(self) -> int:
        return sum(self.consumed_by_rule)

    def as_row(self) -> List:
        return [self.turn, self.entrants, self.tau, *self.consumed_by_rule, *self.edges_by_rule]


LEDGER_COLUMNS = ["turn", "entrants", "tau",
                  "consumed_r1", "consumed_r2", "consumed_r3", "consumed_r4",
                  "edges_r1", "edges_r2", "edges_r3", "edges_r4"]


@dataclass
class SimState:
    rng: random.Random
    carry: float = 0.0
    turn: int = 0


# ---- Rule plugin loading ----------------------------------------------------

_rule_cache: Dict[Tuple[str, ...], List[BaseRule]] = {}


def load_rules(module_paths: Sequence[str] = Config.RULE_SEQUENCE) -> List[BaseRule]:
    """
    Imports each rule module in order and instantiates the BaseRule subclass
    it defines. The result must cover every rule name exactly once, in the
    fixed activation order.
    """
    key = tuple(module_paths)
    if key in _rule_cache:
        return _rule_cache[key]
    rules = []
    for module_path in module_paths:
        try:
            module = importlib.import_module(module_path)
        except ImportError as e:
            raise ConfigError(f"rule module {module_path!r} could not be imported: {e}")
        for attr_name in dir(module):
            attr = getattr(module, attr_name)
            # A class, a subclass of BaseRule, defined in this module (not re-exported)
            if (isinstance(attr, type) and issubclass(attr, BaseRule) and attr is not BaseRule
                    and attr.__module__ == module.__name__):
                rules.append(attr())
                logger.debug(f"Loaded rule plugin: {module_path} ({rules[-1].get_description()})")
                break
        else:
            raise ConfigError(f"rule module {module_path!r} defines no BaseRule subclass")
    names = tuple(rule.name for rule in rules)
    if names != RULE_NAMES:
        raise ConfigError(f"rule sequence must load {RULE_NAMES} in order, got {names}")
    _rule_cache[key] = rules
    return rules


# ---- Coupled entry / activity -----------------------------------------------

def entry_count(n_t: int, nu: float, carry_in: float = 0.0) -> Tuple[int, float]:
    """Entrants this turn, with the fractional remainder carried forward."""
    exact = n_t * nu + carry_in
    entrants = math.floor(exact + _ROUNDING_SLACK)
    carry_out = max(exact - entrants, 0.0)
    return entrants, carry_out


def action_budget(n_t: int, psi: float) -> int:
    return math.floor(n_t * psi + _ROUNDING_SLACK)


def split_budget(tau: int, budget_split: Sequence[float]) -> List[int]:
    """Floors the first three shares; the last rule takes what is left."""
    shares = [math.floor(tau * s + _ROUNDING_SLACK) for s in budget_split[:-1]]
    shares.append(tau - sum(shares))
    return shares


# ---- Scheduler --------------------------------------------------------------

def step(graph: DirectedGraph, params: SimParams, state: SimState) -> TurnStats:
    """
    One turn: add entrants, compute the budget on the new size, then run
    the rules in order, each on its share plus whatever the previous rule
    left unspent.
    """
    if graph.node_count < 1:
        raise SimulationError("cannot step an empty graph")
    state.turn += 1
    entrants, state.carry = entry_count(graph.node_count, params.nu, state.carry)
    new_nodes = graph.add_nodes(entrants, turn=state.turn)

    tau = action_budget(graph.node_count, params.psi)
    stats = TurnStats(turn=state.turn, entrants=entrants, tau=tau, carry=state.carry)

    probabilities = params.probabilities()
    created: Dict[int, int] = {}
    leftover = 0
    for index, (rule, share) in enumerate(zip(load_rules(), split_budget(tau, params.budget_split))):
        ctx = RuleContext(
            p=probabilities[rule.name],
            entrants=new_nodes,
            kappa=params.kappa,
            created_this_turn=created,
            top_k=params.top_k,
            distance_check=params.distance_check,
        )
        sub_budget = share + leftover
        outcome = rule.apply(graph, sub_budget, ctx, state.rng)
        stats.consumed_by_rule[index] = outcome.actions_consumed
        stats.edges_by_rule[index] = outcome.successes
        leftover = sub_budget - outcome.actions_consumed

    stats.nodes = graph.node_count
    stats.edges = graph.edge_count
    logger.debug(f"turn {stats.turn}: entrants={entrants} tau={tau} "
                 f"consumed={stats.consumed_by_rule} edges={stats.edges_by_rule}")
    return stats


def run(params: SimParams, rng: Optional[random.Random] = None) -> Tuple[DirectedGraph, List[TurnStats]]:
    """Seeds n0 isolated nodes and steps until the node count reaches target_nodes."""
    params.validate()
    if params.nu == 0 and params.target_nodes > params.n0:
        raise SimulationError("non-growing configuration: nu = 0 can never reach target_nodes > n0")

    graph = DirectedGraph()
    graph.add_nodes(params.n0, turn=0)
    state = SimState(rng=rng if rng is not None else simulation_rng(params.seed))
    ledger: List[TurnStats] = []
    while graph.node_count < params.target_nodes:
        ledger.append(step(graph, params, state))
    logger.info(f"Run finished: {graph.node_count} nodes, {graph.edge_count} edges in {len(ledger)} turns")
    return graph, ledger
