from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import List, Optional

from core.errors import ConfigError
from core.graph import DirectedGraph

BASELINE_KINDS = ("erdos_renyi", "pref_attach")


@dataclass
class BaselineSpec:
    kind: str
    n: int
    m: Optional[int] = None      # edges per entrant (pref_attach)
    p: Optional[float] = None    # ordered-pair edge probability (erdos_renyi)
    seed: int = 0

    def problems(self) -> List[str]:
        found = []
        if self.kind not in BASELINE_KINDS:
            found.append(f"kind: unknown baseline {self.kind!r} (known: {', '.join(BASELINE_KINDS)})")
        if not isinstance(self.n, int) or self.n < 2:
            found.append(f"n: must be an integer >= 2, got {self.n!r}")
        if self.kind == "erdos_renyi" and (self.p is None or not 0.0 <= self.p <= 1.0):
            found.append(f"p: must be in [0, 1], got {self.p!r}")
        if self.kind == "pref_attach":
            if not isinstance(self.m, int) or self.m < 1:
                found.append(f"m: must be a positive integer, got {self.m!r}")
            elif isinstance(self.n, int) and self.n <= self.m + 1:
                found.append(f"n: must exceed m + 1 ({self.m + 1}), got {self.n}")
        return found

    def validate(self) -> "BaselineSpec":
        found = self.problems()
        if found:
            raise ConfigError(found)
        return self

    def to_dict(self) -> dict:
        return asdict(self)


class BaselineGenerator(ABC):
    """Abstract interface for null-model generators."""

    @abstractmethod
    def generate(self, spec: BaselineSpec) -> DirectedGraph:
        """
        Return a freshly generated graph for the spec. Generation is a pure
        function of the spec (seed included).
        """
        pass

    @abstractmethod
    def get_description(self) -> str:
        pass


# ─── Factory & Module-Level API ────────────────────────────────────────────────
def get_baseline_generator(kind: str) -> BaselineGenerator:
    kind = kind.lower()
    if kind == "erdos_renyi":
        from baselines.models.erdos_renyi_model import ErdosRenyiGenerator
        return ErdosRenyiGenerator()
    elif kind == "pref_attach":
        from baselines.models.pref_attach_model import PrefAttachGenerator
        return PrefAttachGenerator()
    else:
        raise ConfigError(f"kind: unknown baseline {kind!r} (known: {', '.join(BASELINE_KINDS)})")


def generate_baseline(spec: BaselineSpec) -> DirectedGraph:
    spec.validate()
    return get_baseline_generator(spec.kind).generate(spec)


def generate_erdos_renyi(n: int, p: float, seed: int = 0) -> DirectedGraph:
    return generate_baseline(BaselineSpec(kind="erdos_renyi", n=n, p=p, seed=seed))


def generate_pref_attach(n: int, m: int, seed: int = 0) -> DirectedGraph:
    return generate_baseline(BaselineSpec(kind="pref_attach", n=n, m=m, seed=seed))
