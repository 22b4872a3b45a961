"""Maximum-entropy inverse reinforcement learning on a deterministic MDP.

The learner's distribution over length-``H+1`` state sequences starting at
``s0`` is ``exp(sum_t R(s_t)) / Z(s0)`` with the partition taken over *all*
such sequences, computed by a log-domain backward recursion. Expert
demonstrations shorter than the horizon are padded with ``stay`` steps.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    EmptyCorpus,
    InvalidDistribution,
    NumericalOverflow,
    TooLarge,
    TrajectoryTooLong,
)
from .mdp import MdpModel, validate_trajectory

log = logging.getLogger(__name__)

ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class StochasticPolicy:
    """Time-indexed policy; ``probs[t, s, a]`` for ``t = 0..H-1``."""

    probs: np.ndarray
    n_actions: np.ndarray

    @property
    def horizon(self) -> int:
        return self.probs.shape[0]

    def action_probs(self, t: int, s: int) -> np.ndarray:
        return self.probs[t, s, : self.n_actions[s]]


@dataclass(frozen=True)
class TrainConfig:
    iterations: int = 100
    eta0: float = 1.0
    decay: float = 0.97
    seed: int = 0
    tolerance: float = 0.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not self.eta0 > 0:
            raise ValueError(f"eta0 must be positive, got {self.eta0}")
        if not 0 < self.decay <= 1:
            raise ValueError(f"decay must lie in (0, 1], got {self.decay}")


@dataclass(frozen=True)
class HistoryRecord:
    iteration: int
    grad_l1: float
    learning_rate: float


@dataclass
class IrlResult:
    theta_star: np.ndarray
    svf: np.ndarray
    horizon: int
    config: TrainConfig
    history: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "theta": [float(x) for x in self.theta_star],
            "svf": [float(x) for x in self.svf],
            "horizon": int(self.horizon),
            "seed": int(self.config.seed),
            "config": asdict(self.config),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IrlResult":
        return cls(
            theta_star=np.asarray(data["theta"], dtype=np.float64),
            svf=np.asarray(data["svf"], dtype=np.float64),
            horizon=int(data["horizon"]),
            config=TrainConfig(**{k: v for k, v in data.get("config", {}).items() if k in _CONFIG_KEYS}),
        )


_CONFIG_KEYS = {f.name for f in fields(TrainConfig)}


def horizon_for(trajectories) -> int:
    """Smallest horizon that fits every trajectory: longest state count minus one."""
    if not trajectories:
        raise EmptyCorpus("no trajectories")
    return max(1, max(len(z) for z in trajectories) - 1)


def pad_trajectory(z: Sequence[int], horizon: int) -> list:
    if len(z) > horizon + 1:
        raise TrajectoryTooLong(f"trajectory of {len(z)} states exceeds horizon {horizon}")
    return list(z) + [z[-1]] * (horizon + 1 - len(z))


def expert_feature_expectation(m: MdpModel, trajectories, horizon: int | None = None) -> np.ndarray:
    """Mean feature count of the demonstrations after stay-padding to ``horizon + 1`` states."""
    horizon = m.horizon if horizon is None else horizon
    if len(trajectories) == 0:
        raise EmptyCorpus("expert feature expectation needs at least one trajectory")
    total = np.zeros(m.feature_dim)
    for z in trajectories:
        validate_trajectory(m, z)
        total += m.features[pad_trajectory(z, horizon)].sum(axis=0)
    return total / len(trajectories)


def start_distribution(trajectories, n_states: int) -> np.ndarray:
    """Empirical distribution of first states."""
    if len(trajectories) == 0:
        raise EmptyCorpus("no trajectories to take start states from")
    p0 = np.bincount([z[0] for z in trajectories], minlength=n_states).astype(np.float64)
    return p0 / p0.sum()


def _soft_backward(m: MdpModel, theta):
    reward = m.reward(theta)
    if not np.all(np.isfinite(reward)):
        raise NumericalOverflow("state rewards are not finite")
    probs, v0, ok = kernels.soft_backward(reward, m.succ, m.n_actions, m.horizon)
    if not ok:
        raise NumericalOverflow("soft value recursion produced a non-finite value")
    return probs, v0


def backward_policy(m: MdpModel, theta) -> StochasticPolicy:
    probs, _ = _soft_backward(m, theta)
    return StochasticPolicy(probs, m.n_actions)


def log_partition(m: MdpModel, theta) -> np.ndarray:
    """``log Z(s0)`` for every start state."""
    return _soft_backward(m, theta)[1]


def _check_p0(p0, n: int) -> np.ndarray:
    p0 = np.asarray(p0, dtype=np.float64)
    if p0.shape != (n,) or np.any(p0 < 0) or not np.all(np.isfinite(p0)) or abs(p0.sum() - 1.0) > 1e-9:
        raise InvalidDistribution("start distribution must be a non-negative length-N vector summing to 1")
    return p0


def expected_svf(m: MdpModel, policy: StochasticPolicy, p0) -> np.ndarray:
    """Expected visits per state over ``t = 0..H``; sums to ``H + 1``."""
    p0 = _check_p0(p0, m.n_states)
    return kernels.forward_svf(policy.probs, m.succ, m.n_actions, p0)


def likelihood_gradient(m: MdpModel, theta, f_expert, p0) -> np.ndarray:
    """``f_expert - F.T @ svf(theta)``."""
    svf = expected_svf(m, backward_policy(m, theta), p0)
    return np.asarray(f_expert, dtype=np.float64) - m.features.T @ svf


def log_likelihood(m: MdpModel, theta, trajectories) -> float:
    """Mean log-probability of the padded demonstrations given their start states."""
    theta = np.asarray(theta, dtype=np.float64)
    v0 = log_partition(m, theta)
    reward = m.reward(theta)
    total = 0.0
    for z in trajectories:
        padded = pad_trajectory(z, m.horizon)
        total += reward[padded].sum() - v0[z[0]]
    return total / len(trajectories)


def enumerate_path_distribution(m: MdpModel, theta, p0) -> dict:
    """Exact path distribution by brute force over every action sequence.

    Each start state's paths are normalised by their own partition and then
    weighted by ``p0``, which is the distribution the backward policy induces.
    Intended as a test oracle; refuses instances with ``N**(H+1) > 10**6``.
    """
    n, h = m.n_states, m.horizon
    if n ** (h + 1) > ENUMERATION_LIMIT:
        raise TooLarge(f"{n}**{h + 1} paths exceed the enumeration limit")
    p0 = _check_p0(p0, n)
    reward = m.reward(theta)
    out = {}
    for s0 in range(n):
        if p0[s0] == 0:
            continue
        paths, logw = [], []

        def walk(path, lw):
            if len(path) == h + 1:
                paths.append(tuple(path))
                logw.append(lw)
                return
            s = path[-1]
            for a in range(m.n_actions[s]):
                nxt = int(m.succ[s, a])
                path.append(nxt)
                walk(path, lw + reward[nxt])
                path.pop()

        walk([s0], reward[s0])
        logw = np.array(logw)
        top = logw.max()
        weights = np.exp(logw - top)
        weights /= weights.sum()
        for path, w in zip(paths, weights):
            out[path] = out.get(path, 0.0) + p0[s0] * w
    return out


def svf_from_distribution(dist: dict, n_states: int) -> np.ndarray:
    svf = np.zeros(n_states)
    for path, p in dist.items():
        np.add.at(svf, list(path), p)
    return svf


def policy_path_probability(m: MdpModel, policy: StochasticPolicy, path) -> float:
    """Probability that ``policy`` generates ``path`` given its first state."""
    prob = 1.0
    for t, (s, nxt) in enumerate(zip(path, path[1:])):
        acts = m.succ[s, : m.n_actions[s]]
        (a,) = np.nonzero(acts == nxt)[0]
        prob *= policy.probs[t, s, a]
    return prob


def train_maxent(m: MdpModel, trajectories, cfg: TrainConfig | None = None) -> IrlResult:
    """Gradient ascent on the demonstration log-likelihood.

    Step ``n`` (1-based) uses learning rate ``eta0 * decay**(n-1)``. Stops after
    ``cfg.iterations`` steps or once the L1 norm of the gradient drops below
    ``cfg.tolerance``.
    """
    cfg = cfg or TrainConfig()
    trajectories = list(trajectories)
    f_expert = expert_feature_expectation(m, trajectories)
    p0 = start_distribution(trajectories, m.n_states)
    rng = np.random.default_rng(cfg.seed)
    theta = rng.uniform(-0.01, 0.01, size=m.feature_dim)
    history = []
    for n in range(1, cfg.iterations + 1):
        eta = cfg.eta0 * cfg.decay ** (n - 1)
        try:
            grad = likelihood_gradient(m, theta, f_expert, p0)
        except NumericalOverflow as exc:
            raise NumericalOverflow(f"{exc} at iteration {n}", iteration=n) from None
        g1 = float(np.abs(grad).sum())
        history.append(HistoryRecord(n, g1, eta))
        log.debug("iter %d grad_l1 %.6g lr %.4g", n, g1, eta)
        if g1 < cfg.tolerance:
            break
        with np.errstate(over="ignore", invalid="ignore"):  # caught as NumericalOverflow next pass
            theta = theta + eta * grad
    try:
        svf = expected_svf(m, backward_policy(m, theta), p0)
    except NumericalOverflow as exc:
        raise NumericalOverflow(f"{exc} after iteration {len(history)}", iteration=len(history)) from None
    return IrlResult(theta, svf, m.horizon, cfg, history)
