"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--sizes 8 12 24] [--repeat 5]
"""

import argparse
import time

import numpy as np

from syntaxirl import kernels
from syntaxirl.datagen import generate_corpus
from syntaxirl.graph import grid_graph
from syntaxirl.irl import TrainConfig, horizon_for, train_maxent
from syntaxirl.mdp import mdp_from_graph


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_size(side, repeat):
    g = grid_graph(side, side)
    corpus = generate_corpus(g, 300, seed=1)
    m = mdp_from_graph(g, horizon_for(corpus.trajectories))
    indptr, indices = g.csr()
    reward = np.random.default_rng(0).normal(size=m.n_states)
    p0 = np.full(m.n_states, 1.0 / m.n_states)
    rows = {}
    for name in kernels.available_backends():
        k = kernels.get_backend(name)
        probs, _, _ = k.soft_backward(reward, m.succ, m.n_actions, m.horizon)
        rows[name] = {
            "soft_backward": best_of(lambda: k.soft_backward(reward, m.succ, m.n_actions, m.horizon), repeat),
            "forward_svf": best_of(lambda: k.forward_svf(probs, m.succ, m.n_actions, p0), repeat),
            "local_depth_sums": best_of(lambda: k.local_depth_sums(indptr, indices, 2), repeat),
        }
        original = kernels.BACKEND
        kernels.use_backend(name)
        try:
            rows[name]["train_100"] = best_of(
                lambda: train_maxent(m, corpus.trajectories, TrainConfig(iterations=100)), max(1, repeat // 2)
            )
        finally:
            kernels.use_backend(original)
    return m, rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 24])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"{'grid':>6} {'N':>5} {'H':>4} {'kernel':<17}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for side in args.sizes:
        m, rows = bench_size(side, args.repeat)
        for kernel in rows[backends[0]]:
            times = [rows[b][kernel] for b in backends]
            speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else ""
            print(f"{side:>3}x{side:<2} {m.n_states:>5} {m.horizon:>4} {kernel:<17}"
                  + "".join(f"{t * 1e3:>10.3f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
