from dataclasses import asdict, dataclass
from typing import List

from config import Config


@dataclass
class MetricSettings:
    exact_threshold: int = Config.EXACT_THRESHOLD
    path_samples: int = Config.PATH_SAMPLES
    betweenness_samples: int = Config.BETWEENNESS_SAMPLES
    eigen_tol: float = Config.EIGEN_TOL
    eigen_max_iter: int = Config.EIGEN_MAX_ITER
    chunk_size: int = Config.CHUNK_SIZE
    loglog_bins: int = Config.LOGLOG_BINS
    compute_centralities: bool = Config.COMPUTE_CENTRALITIES
    seed: int = Config.SEED
    threads: int = Config.THREADS

    def problems(self) -> List[str]:
        found = []
        for name in ("exact_threshold", "path_samples", "betweenness_samples", "eigen_max_iter",
                     "chunk_size", "threads"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                found.append(f"metrics.{name}: must be a positive integer, got {value!r}")
        if not self.eigen_tol > 0:
            found.append(f"metrics.eigen_tol: must be > 0, got {self.eigen_tol!r}")
        if not isinstance(self.loglog_bins, int) or self.loglog_bins < 0:
            found.append(f"metrics.loglog_bins: must be a non-negative integer, got {self.loglog_bins!r}")
        return found

    def sampled(self, node_count: int) -> bool:
        return node_count > self.exact_threshold

    def result_key(self) -> dict:
        """Settings that change metric values; thread count is not one of them."""
        key = asdict(self)
        key.pop("threads")
        return key

    def to_dict(self) -> dict:
        return asdict(self)
