"""NumPy reference kernels, used when the compiled extension is absent.

Action tables are padded: ``succ[s, a]`` is the successor state of action
``a`` in state ``s`` for ``a < n_actions[s]`` and ``-1`` beyond.
"""

import numpy as np


def soft_backward(reward, succ, n_actions, horizon):
    """Finite-horizon soft value recursion.

    Returns ``(probs, v0, ok)`` where ``probs[t, s, a]`` is the time-indexed
    policy, ``v0`` the log-partition per start state and ``ok`` is False when
    a non-finite value appeared.
    """
    reward = np.asarray(reward, dtype=np.float64)
    n, amax = succ.shape
    valid = np.arange(amax)[None, :] < n_actions[:, None]
    safe = np.where(valid, succ, 0)
    probs = np.zeros((horizon, n, amax))
    v = reward.copy()
    for t in range(horizon - 1, -1, -1):
        with np.errstate(over="ignore", invalid="ignore"):
            q = np.where(valid, reward[:, None] + v[safe], -np.inf)
        top = q.max(axis=1)
        if not np.all(np.isfinite(top)):
            return probs, v, False
        z = np.exp(q - top[:, None])
        v = top + np.log(z.sum(axis=1))
        probs[t] = np.exp(q - v[:, None])
    return probs, v, bool(np.all(np.isfinite(v)))


def forward_svf(probs, succ, n_actions, p0):
    horizon, n, amax = probs.shape
    valid = np.arange(amax)[None, :] < n_actions[:, None]
    targets = succ[valid]
    d = np.asarray(p0, dtype=np.float64).copy()
    svf = d.copy()
    for t in range(horizon):
        flow = probs[t] * d[:, None]
        d = np.bincount(targets, weights=flow[valid], minlength=n)
        svf += d
    return svf


def local_depth_sums(indptr, indices, radius):
    """Per-node depth total and neighbourhood size (self included) within ``radius`` hops."""
    n = len(indptr) - 1
    td = np.zeros(n, dtype=np.int64)
    kl = np.ones(n, dtype=np.int64)
    for s in range(n):
        depth = {s: 0}
        frontier = [s]
        d = 0
        while frontier and d < radius:
            d += 1
            nxt = []
            for u in frontier:
                for v in indices[indptr[u]:indptr[u + 1]]:
                    v = int(v)
                    if v not in depth:
                        depth[v] = d
                        nxt.append(v)
            td[s] += d * len(nxt)
            kl[s] += len(nxt)
            frontier = nxt
    return td, kl
