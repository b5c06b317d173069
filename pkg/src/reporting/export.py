import logging
from typing import List, Mapping, Tuple, Union

import numpy as np

from metrics.degree import DegreeHistogram

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


def _value_counts(data) -> Tuple[np.ndarray, np.ndarray]:
    """(values, counts) with zero, negative and non-finite values removed."""
    if isinstance(data, DegreeHistogram):
        data = data.counts
    if isinstance(data, Mapping):
        pairs = sorted((float(k), float(c)) for k, c in data.items() if c)
        values = np.array([k for k, _ in pairs], dtype=float)
        counts = np.array([c for _, c in pairs], dtype=float)
    else:
        raw = np.asarray(data, dtype=float).ravel()
        values, counts = np.unique(raw, return_counts=True)
        counts = counts.astype(float)
    keep = np.isfinite(values) & (values > 0) & (counts > 0)
    return values[keep], counts[keep]


def export_loglog(data: Union[DegreeHistogram, Mapping, np.ndarray, List[float]], bins: int = 0) -> List[Point]:
    """
    Point series for a log-log plot of a distribution. With bins=0 the
    series is (value, frequency); otherwise values are grouped into
    logarithmically spaced bins and each point is (geometric bin centre,
    density), with empty bins left out.
    """
    values, counts = _value_counts(data)
    if values.size == 0:
        logger.warning("Nothing to export on log-log axes: no positive values.")
        return []
    total = counts.sum()
    if bins == 0 or values.size == 1:
        return [(float(v), float(c / total)) for v, c in zip(values, counts)]

    low, high = np.log10(values[0]), np.log10(values[-1])
    edges = np.logspace(low, high, bins + 1)
    edges[-1] = values[-1] * (1 + 1e-12)
    binned, _ = np.histogram(values, bins=edges, weights=counts)
    widths = np.diff(edges)
    centres = np.sqrt(edges[:-1] * edges[1:])
    keep = binned > 0
    density = binned[keep] / (widths[keep] * total)
    return [(float(x), float(y)) for x, y in zip(centres[keep], density)]

