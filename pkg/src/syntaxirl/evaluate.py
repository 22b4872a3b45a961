"""Score both movement predictors against held-out visit counts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, GraphMismatch


@dataclass
class EvalReport:
    pearson_syntax: float
    pearson_irl: float
    n_nodes_used: int
    per_node: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pearson_syntax": self.pearson_syntax,
            "pearson_irl": self.pearson_irl,
            "n_nodes_used": self.n_nodes_used,
            "per_node": self.per_node,
        }


def visit_counts(trajectories, node_count: int) -> np.ndarray:
    counts = np.zeros(node_count, dtype=np.int64)
    for z in trajectories:
        np.add.at(counts, np.asarray(z, dtype=np.int64), 1)
    return counts


def pearson_r(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DegenerateInput(f"pearson_r needs equal-length vectors, got {x.shape} and {y.shape}")
    if len(x) < 3:
        raise DegenerateInput(f"pearson_r needs at least 3 points, got {len(x)}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("pearson_r undefined for a constant vector")
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def compare_methods(metrics, result, test) -> EvalReport:
    """Pearson correlation of syntax score and IRL visitation with test counts.

    Nodes without a syntax score are dropped from both correlations.
    """
    n = metrics.node_count
    if len(result.svf) != n:
        raise GraphMismatch(f"metrics cover {n} nodes but the model covers {len(result.svf)}")
    for z in test:
        if any(not 0 <= v < n for v in z):
            raise GraphMismatch(f"test trajectory visits a node outside 0..{n - 1}")
    counts = visit_counts(test, n)
    keep = np.flatnonzero(metrics.defined)
    pearson_syntax = pearson_r(metrics.score[keep], counts[keep])
    pearson_irl = pearson_r(result.svf[keep], counts[keep])
    per_node = [
        {
            "node_id": i,
            "test_count": int(counts[i]),
            "syntax_score": None if np.isnan(metrics.score[i]) else float(metrics.score[i]),
            "irl_svf": float(result.svf[i]),
        }
        for i in range(n)
    ]
    return EvalReport(pearson_syntax, pearson_irl, int(len(keep)), per_node)
