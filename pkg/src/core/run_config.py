import json
import logging
import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List

from config import Config
from core.dynamics import SimParams
from core.errors import ConfigError, InputMissingError, MalformedInputError
from metrics.settings import MetricSettings

logger = logging.getLogger(__name__)

# Config file sections and the fields each one may set.
DYNAMICS_KEYS = ("nu", "psi", "kappa", "n0", "target_nodes", "seed", "budget_split", "profile")
RULES_KEYS = ("p_random", "p_triadic", "p_cumulative", "p_distance", "top_k", "distance_check")
METRICS_KEYS = tuple(f.name for f in fields(MetricSettings))
OUTPUT_KEYS = ("out_dir", "full_metrics", "write_ledger")
SECTIONS = {"dynamics": DYNAMICS_KEYS, "rules": RULES_KEYS, "metrics": METRICS_KEYS, "output": OUTPUT_KEYS}


@dataclass
class OutputSettings:
    out_dir: str = Config.OUT_DIR
    full_metrics: bool = True    # False: degree statistics, clustering and modularity only
    write_ledger: bool = True


@dataclass
class RunConfig:
    sim: SimParams = field(default_factory=SimParams)
    metrics: MetricSettings = field(default_factory=MetricSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    # ── building ──
    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """
        Defaults overlaid with a nested config document. Unknown sections or
        keys and values of the wrong type are reported together.
        """
        if not isinstance(data, dict):
            raise ConfigError("config: expected a JSON object with sections "
                              f"{', '.join(SECTIONS)}")
        problems = []
        for section, body in data.items():
            if section not in SECTIONS:
                problems.append(f"{section}: unknown section (known: {', '.join(SECTIONS)})")
            elif not isinstance(body, dict):
                problems.append(f"{section}: expected an object, got {type(body).__name__}")
            else:
                problems.extend(f"{section}.{key}: unknown key" for key in body if key not in SECTIONS[section])
        config = cls()
        for section in SECTIONS:
            body = data.get(section, {})
            if not isinstance(body, dict):
                continue
            try:
                config.apply(section, {key: value for key, value in body.items() if key in SECTIONS[section]})
            except ConfigError as e:
                problems.extend(e.problems)
        if problems:
            raise ConfigError(problems)
        # The metric seed follows the run seed unless set on its own.
        if "seed" in data.get("dynamics", {}) and "seed" not in data.get("metrics", {}):
            config.metrics.seed = config.sim.seed
        return config

    @classmethod
    def load(cls, path) -> "RunConfig":
        if not os.path.exists(path):
            raise InputMissingError(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise MalformedInputError(path, e.lineno, f"invalid JSON: {e.msg}") from e
        logger.info(f"Loaded config from {path}")
        return cls.from_dict(data)

    def _target(self, section: str):
        return {"dynamics": self.sim, "rules": self.sim, "metrics": self.metrics, "output": self.output}[section]

    def apply(self, section: str, values: Dict[str, Any]) -> "RunConfig":
        """Set fields of one section, checking each value against its default's type."""
        target = self._target(section)
        problems = []
        for key, value in values.items():
            if value is None:
                continue
            checked = _coerce(getattr(target, key), value)
            if checked is _BAD:
                problems.append(f"{section}.{key}: expected {_type_name(getattr(target, key))}, got {value!r}")
            else:
                setattr(target, key, checked)
        if problems:
            raise ConfigError(problems)
        return self

    def override(self, **overrides) -> "RunConfig":
        """CLI-style flat overrides; None means 'not given'."""
        for key, value in overrides.items():
            if value is None:
                continue
            section = next((name for name in ("dynamics", "rules", "output", "metrics") if key in SECTIONS[name]), None)
            if section is None:
                raise ConfigError(f"{key}: unknown setting")
            self.apply(section, {key: value})
        if overrides.get("seed") is not None:
            self.metrics.seed = self.sim.seed
        return self

    # ── checking ──
    def problems(self) -> List[str]:
        found = self.sim.problems() + self.metrics.problems()
        if not self.output.out_dir:
            found.append("output.out_dir: must not be empty")
        return found

    def validate(self) -> "RunConfig":
        found = self.problems()
        if found:
            raise ConfigError(found)
        return self

    # ── serialising ──
    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        sim = self.sim.to_dict()
        metrics = self.metrics.to_dict()
        return {
            "dynamics": {key: sim[key] for key in DYNAMICS_KEYS},
            "rules": {key: sim[key] for key in RULES_KEYS},
            "metrics": {key: metrics[key] for key in METRICS_KEYS},
            "output": {key: getattr(self.output, key) for key in OUTPUT_KEYS},
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


_BAD = object()


def _type_name(default) -> str:
    if isinstance(default, bool):
        return "a boolean"
    if isinstance(default, int):
        return "an integer"
    if isinstance(default, float):
        return "a number"
    if isinstance(default, tuple):
        return f"a list of {len(default)} numbers"
    return "a string"


def _coerce(default, value):
    if isinstance(default, bool):
        return value if isinstance(value, bool) else _BAD
    if isinstance(default, int):
        return value if isinstance(value, int) and not isinstance(value, bool) else _BAD
    if isinstance(default, float):
        return float(value) if isinstance(value, (int, float)) and not isinstance(value, bool) else _BAD
    if isinstance(default, tuple):
        if isinstance(value, (list, tuple)) and all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
            return tuple(float(x) for x in value)
        return _BAD
    return value if isinstance(value, str) else _BAD
