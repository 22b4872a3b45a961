"""Local space-syntax measures: closeness, mean depth and relative asymmetry.

Depth is hop count. For node ``i`` and radius ``r``:

* ``total_depth``  sum of depths of all nodes within ``r`` steps
* ``k_local``      number of those nodes plus ``i`` itself
* ``closeness``    ``1 / total_depth``
* ``mean_depth``   ``total_depth / (k_local - 1)``
* ``ra``           ``2 (mean_depth - 1) / (k_local - 2)``
* ``score``        ``-ra``, the movement predictor (higher = more integrated)

Values that would divide by zero are NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import IsolatedNode
from .graph import ConnectivityGraph, bfs_depths


@dataclass(frozen=True)
class SyntaxMetrics:
    total_depth: np.ndarray
    k_local: np.ndarray
    closeness: np.ndarray
    mean_depth: np.ndarray
    ra: np.ndarray
    score: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.total_depth)

    @property
    def defined(self) -> np.ndarray:
        """Mask of nodes whose relative asymmetry exists (``k_local >= 3``)."""
        return ~np.isnan(self.ra)


def local_closeness(g: ConnectivityGraph, i: int, radius: int = 2) -> float:
    depths = bfs_depths(g, i, radius)
    if not depths:
        raise IsolatedNode(f"node {i} has no other node within {radius} steps")
    return 1.0 / sum(depths.values())


def metrics_from_depths(total_depth, k_local) -> SyntaxMetrics:
    td = np.asarray(total_depth, dtype=np.int64)
    kl = np.asarray(k_local, dtype=np.int64)
    # one correctly rounded division per value, so equal ratios give equal floats
    with np.errstate(divide="ignore", invalid="ignore"):
        closeness = np.where(td > 0, 1.0 / td, np.nan)
        mean_depth = np.where(kl >= 2, td / (kl - 1), np.nan)
        ra = np.where(kl >= 3, (2 * (td - kl + 1)) / ((kl - 1) * (kl - 2)), np.nan)
    return SyntaxMetrics(td, kl, closeness, mean_depth, ra, -ra)


def compute_syntax_metrics(g: ConnectivityGraph, radius: int = 2) -> SyntaxMetrics:
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    indptr, indices = g.csr()
    td, kl = kernels.local_depth_sums(indptr, indices, radius)
    return metrics_from_depths(td, kl)


def rank_by_integration(m: SyntaxMetrics) -> list:
    """Node ids, most integrated (lowest RA) first; undefined RA last; ties by id."""
    ra = m.ra
    return sorted(range(m.node_count), key=lambda i: (bool(np.isnan(ra[i])), 0.0 if np.isnan(ra[i]) else ra[i], i))
