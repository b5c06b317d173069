import functools
import logging

logger = logging.getLogger(__name__)


class NetgrowthError(Exception):
    """Base class for every user-facing failure. `exit_code` is the CLI contract."""
    exit_code = 4


class ConfigError(NetgrowthError):
    """Invalid configuration. Carries every offending field."""
    exit_code = 2

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InputError(NetgrowthError):
    exit_code = 3


class InputMissingError(InputError):
    exit_code = 3

    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"Input file not found: {self.path}")


class MalformedInputError(InputError):
    exit_code = 5

    def __init__(self, path, line_number: int, reason: str):
        self.path = str(path)
        self.line_number = line_number
        super().__init__(f"{self.path}:{line_number}: {reason}")


class SimulationError(NetgrowthError):
    exit_code = 4


class MetricUndefinedError(NetgrowthError):
    exit_code = 4


# Decorator for safe execution and uniform error handling
def safe_action(func):
    """
    Runs a unit of work and converts any failure into a failure record
    ({"ok": False, "error": ...}) instead of raising. Successful results are
    passed through unchanged.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NetgrowthError as e:
            logger.error(f"{type(e).__name__} in {func.__name__}: {e}", exc_info=True)
            return {"ok": False, "error": f"{type(e).__name__}: {e}"}
        except Exception as e:
            logger.error(f"Error in {func.__name__}: {e}", exc_info=True)
            return {"ok": False, "error": f"[FAIL] {func.__name__.replace('_', ' ')}: {e}"}
    return wrapper
