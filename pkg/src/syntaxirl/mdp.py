"""Deterministic finite-horizon MDP over a connectivity graph.

Each state is a graph node. Action 0 is ``stay``; actions ``1..deg`` move to
the neighbours in ascending id order. Rewards are linear in per-state
features, ``R(s) = theta @ F[s]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyGraph, InvalidTrajectory
from .graph import ConnectivityGraph


@dataclass(frozen=True)
class MdpModel:
    graph: ConnectivityGraph
    succ: np.ndarray  # (N, Amax) int64, -1 padded
    n_actions: np.ndarray  # (N,) int64
    features: np.ndarray  # (N, d)
    horizon: int
    gamma: float = 1.0

    @property
    def n_states(self) -> int:
        return self.graph.node_count

    @property
    def states(self) -> range:
        return range(self.n_states)

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def actions(self, s: int) -> list:
        return list(range(int(self.n_actions[s])))

    def transition(self, s: int, a: int) -> int:
        if not 0 <= a < self.n_actions[s]:
            raise ValueError(f"state {s} has no action {a}")
        return int(self.succ[s, a])

    def with_horizon(self, horizon: int) -> "MdpModel":
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        return MdpModel(self.graph, self.succ, self.n_actions, self.features, int(horizon), self.gamma)

    def reward(self, theta) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return self.features @ np.asarray(theta, dtype=np.float64)


def mdp_from_graph(
    g: ConnectivityGraph,
    horizon: int,
    gamma: float = 1.0,
    features="one-hot",
) -> MdpModel:
    """Build the MDP. ``features`` is ``"one-hot"`` or an ``(N, d)`` matrix."""
    n = g.node_count
    if n == 0:
        raise EmptyGraph("cannot build an MDP from an empty graph")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    n_actions = np.array([g.degree(s) + 1 for s in range(n)], dtype=np.int64)
    succ = np.full((n, int(n_actions.max())), -1, dtype=np.int64)
    for s in range(n):
        succ[s, 0] = s
        succ[s, 1:n_actions[s]] = g.neighbors(s)
    if isinstance(features, str):
        if features != "one-hot":
            raise ValueError(f"unknown feature mode {features!r}")
        fmat = np.eye(n)
    else:
        fmat = np.array(features, dtype=np.float64)
        if fmat.ndim != 2 or fmat.shape[0] != n:
            raise ValueError(f"feature matrix must have shape ({n}, d), got {fmat.shape}")
        if not np.all(np.isfinite(fmat)):
            raise ValueError("feature matrix contains non-finite entries")
    succ.setflags(write=False)
    n_actions.setflags(write=False)
    fmat.setflags(write=False)
    return MdpModel(g, succ, n_actions, fmat, int(horizon), float(gamma))


def validate_trajectory(m: MdpModel, z: Sequence[int]) -> None:
    if len(z) == 0:
        raise InvalidTrajectory("empty trajectory")
    for v in z:
        if not 0 <= v < m.n_states:
            raise InvalidTrajectory(f"node {v} not in graph")
    for a, b in zip(z, z[1:]):
        if a != b and not m.graph.has_edge(a, b):
            raise InvalidTrajectory(f"consecutive nodes {a} and {b} are not adjacent")


def path_feature_counts(m: MdpModel, z: Sequence[int]) -> np.ndarray:
    """Sum of feature rows over every state in ``z``; revisits count again."""
    validate_trajectory(m, z)
    return m.features[np.asarray(z, dtype=np.int64)].sum(axis=0)
