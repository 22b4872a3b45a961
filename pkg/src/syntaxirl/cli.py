"""Command-line pipeline.

Exit codes: 0 success, 2 invalid input or arguments, 3 numerical failure.
Errors are reported on stderr as a single JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .datagen import TrajectorySet, generate_corpus, load_osm, split_corpus
from .errors import GraphMismatch, InputError, NumericalError
from .evaluate import compare_methods
from .graph import grid_graph
from .irl import IrlResult, TrainConfig, horizon_for, train_maxent
from .mdp import mdp_from_graph
from .syntax import compute_syntax_metrics

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("syntaxirl")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class PipelineConfig:
    output_dir: str = "out"
    graph_path: str | None = None
    osm_path: str | None = None
    grid_width: int = 12
    grid_height: int = 12
    count: int = 400
    train_count: int = 300
    test_count: int = 100
    seed: int = 1
    radius: int = 2
    iterations: int = 100
    eta0: float = 1.0
    decay: float = 0.97
    tolerance: float = 0.0
    feature_mode: str = "one-hot"

    def validate(self):
        if min(self.count, self.train_count, self.test_count) < 1:
            raise InputError("count, train and test must be positive")
        if self.train_count + self.test_count != self.count:
            raise InputError(f"train {self.train_count} + test {self.test_count} != count {self.count}")


# section -> {toml key: PipelineConfig field}
_CONFIG_KEYS = {
    "pipeline": {"output_dir": "output_dir", "seed": "seed"},
    "graph": {"path": "graph_path", "osm": "osm_path", "grid_width": "grid_width", "grid_height": "grid_height"},
    "corpus": {"count": "count", "train": "train_count", "test": "test_count"},
    "syntax": {"radius": "radius"},
    "train": {
        "iterations": "iterations", "eta0": "eta0", "decay": "decay",
        "tolerance": "tolerance", "features": "feature_mode",
    },
}


def load_config(path) -> PipelineConfig:
    """Read a TOML pipeline config; relative paths resolve against its directory."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}") from None
    cfg = PipelineConfig()
    for section, table in raw.items():
        keys = _CONFIG_KEYS.get(section)
        if keys is None or not isinstance(table, dict):
            raise InputError(f"{path}: unknown section [{section}]")
        for key, value in table.items():
            if key not in keys:
                raise InputError(f"{path}: unknown key {key!r} in [{section}]")
            setattr(cfg, keys[key], value)
    base = path.parent
    for name in ("output_dir", "graph_path", "osm_path"):
        value = getattr(cfg, name)
        if value is not None and not Path(value).is_absolute():
            setattr(cfg, name, str(base / value))
    if cfg.feature_mode != "one-hot" and not Path(cfg.feature_mode).is_absolute():
        cfg.feature_mode = str(base / cfg.feature_mode)
    return cfg


def _features(mode: str, n: int):
    if mode in (None, "one-hot"):
        return "one-hot"
    try:
        return np.loadtxt(mode, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read feature matrix {mode}: {exc}") from None


def _check_same_graph(g, ts: TrajectorySet, what: str):
    if ts.graph_hash is not None and ts.graph_hash != io.graph_hash(g):
        raise GraphMismatch(f"{what} were generated on a different graph")


# -- stages -------------------------------------------------------------------

def stage_train(g, train: TrajectorySet, cfg: TrainConfig, feature_mode: str, model_out, history_out):
    _check_same_graph(g, train, "training traces")
    m = mdp_from_graph(g, horizon_for(train.trajectories), features=_features(feature_mode, g.node_count))
    result = train_maxent(m, train.trajectories, cfg)
    doc = result.to_dict()
    doc["config"]["features"] = feature_mode
    io.write_json(model_out, doc)
    io.write_text(history_out, io.history_to_text(result.history))
    return result


def stage_evaluate(g, metrics, result, test: TrajectorySet, out):
    _check_same_graph(g, test, "test traces")
    if metrics.node_count != g.node_count:
        raise GraphMismatch(f"metrics cover {metrics.node_count} nodes, graph has {g.node_count}")
    report = compare_methods(metrics, result, test)
    io.write_json(out, report.to_dict())
    return report


def run_pipeline(cfg: PipelineConfig) -> dict:
    cfg.validate()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.graph_path:
        g = io.load_graph(cfg.graph_path)
    elif cfg.osm_path:
        g = load_osm(cfg.osm_path)
    else:
        g = grid_graph(cfg.grid_width, cfg.grid_height)
    paths = {name: out / name for name in (
        "graph.json", "traces.jsonl", "train.jsonl", "test.jsonl",
        "metrics.csv", "model.json", "history.csv", "report.json",
    )}
    io.save_graph(g, paths["graph.json"])
    corpus = generate_corpus(g, cfg.count, cfg.seed)
    io.save_traces(corpus, paths["traces.jsonl"])
    train, test = split_corpus(corpus, cfg.train_count, cfg.test_count, cfg.seed)
    io.save_traces(train, paths["train.jsonl"])
    io.save_traces(test, paths["test.jsonl"])
    metrics = compute_syntax_metrics(g, cfg.radius)
    io.save_metrics(metrics, paths["metrics.csv"])
    tcfg = TrainConfig(cfg.iterations, cfg.eta0, cfg.decay, cfg.seed, cfg.tolerance)
    result = stage_train(g, train, tcfg, cfg.feature_mode, paths["model.json"], paths["history.csv"])
    report = stage_evaluate(g, metrics, result, test, paths["report.json"])
    return {"report": report, "result": result, "paths": paths}


# -- argument handling --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="syntaxirl", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("import-osm", help="OSM XML extract -> graph.json")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("gen-grid", help="unit-weight lattice -> graph.json")
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("gen-traces", help="seeded shortest-path corpus")
    s.add_argument("--graph", required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("split", help="seeded train/test split")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--train", type=int, required=True)
    s.add_argument("--test", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out-train", required=True)
    s.add_argument("--out-test", required=True)

    s = sub.add_parser("syntax", help="local integration metrics -> metrics.csv")
    s.add_argument("--graph", required=True)
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--out", required=True)

    s = sub.add_parser("train", help="maximum-entropy IRL -> model.json, history.csv")
    s.add_argument("--graph", required=True)
    s.add_argument("--traces", required=True)
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--eta0", type=float, default=1.0)
    s.add_argument("--decay", type=float, default=0.97)
    s.add_argument("--tolerance", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--features", default="one-hot", help="'one-hot' or a CSV matrix with one row per node")
    s.add_argument("--out", required=True)
    s.add_argument("--history", required=True)

    s = sub.add_parser("evaluate", help="correlate both predictors with test counts")
    s.add_argument("--graph", required=True)
    s.add_argument("--metrics", required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--test", required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("pipeline", help="run every stage from a TOML config")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--output-dir")
    s.add_argument("--count", type=int)
    s.add_argument("--train", type=int, dest="train_count")
    s.add_argument("--test", type=int, dest="test_count")
    s.add_argument("--iters", type=int, dest="iterations")
    return p


def _dispatch(args) -> None:
    cmd = args.command
    if cmd == "import-osm":
        io.save_graph(load_osm(args.inp), args.out)
    elif cmd == "gen-grid":
        io.save_graph(grid_graph(args.width, args.height), args.out)
    elif cmd == "gen-traces":
        g = io.load_graph(args.graph)
        io.save_traces(generate_corpus(g, args.count, args.seed), args.out)
    elif cmd == "split":
        train, test = split_corpus(io.load_traces(args.inp), args.train, args.test, args.seed)
        io.save_traces(train, args.out_train)
        io.save_traces(test, args.out_test)
    elif cmd == "syntax":
        if args.radius < 1:
            raise InputError(f"radius must be >= 1, got {args.radius}")
        io.save_metrics(compute_syntax_metrics(io.load_graph(args.graph), args.radius), args.out)
    elif cmd == "train":
        g = io.load_graph(args.graph)
        cfg = TrainConfig(args.iters, args.eta0, args.decay, args.seed, args.tolerance)
        result = stage_train(g, io.load_traces(args.traces), cfg, args.features, args.out, args.history)
        h = result.history
        print(f"grad_l1 {h[0].grad_l1:.6g} -> {h[-1].grad_l1:.6g} in {len(h)} iterations")
    elif cmd == "evaluate":
        g = io.load_graph(args.graph)
        result = IrlResult.from_dict(io.read_json(args.model))
        report = stage_evaluate(g, io.load_metrics(args.metrics), result, io.load_traces(args.test), args.out)
        print(f"pearson_syntax {report.pearson_syntax:.6f} pearson_irl {report.pearson_irl:.6f}")
    elif cmd == "pipeline":
        cfg = load_config(args.config)
        for name in ("seed", "output_dir", "count", "train_count", "test_count", "iterations"):
            value = getattr(args, name)
            if value is not None:
                setattr(cfg, name, value)
        report = run_pipeline(cfg)["report"]
        print(f"pearson_syntax {report.pearson_syntax:.6f} pearson_irl {report.pearson_irl:.6f}")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        _dispatch(args)
    except NumericalError as exc:
        _report(exc)
        return EXIT_NUMERIC
    except (InputError, ValueError, OSError) as exc:
        _report(exc)
        return EXIT_INPUT
    return EXIT_OK


def _report(exc):
    detail = {"error": type(exc).__name__, "message": str(exc)}
    if getattr(exc, "iteration", None) is not None:
        detail["iteration"] = exc.iteration
    sys.stderr.write(json.dumps(detail) + "\n")


if __name__ == "__main__":
    sys.exit(main())
