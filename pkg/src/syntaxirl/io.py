"""Deterministic readers and writers for every artifact format.

All text is UTF-8 with LF line endings. Floats are written with 17
significant digits so that values survive a round trip exactly.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .graph import ConnectivityGraph, build_graph


def fmt_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj, indent=0, step=2) -> str:
    """JSON text; containers holding containers are split over lines."""
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {dumps(v, indent + step, step)}" for k, v in obj.items()]
        if not any(isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj.values()):
            return "{" + ", ".join(items) + "}"
        pad = " " * (indent + step)
        return "{\n" + ",\n".join(pad + it for it in items) + "\n" + " " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        pad = " " * (indent + step)
        inner = ",\n".join(pad + dumps(v, indent + step, step) for v in obj)
        return "[\n" + inner + "\n" + " " * indent + "]"
    return _scalar(obj)


def write_text(path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_json(path, obj) -> None:
    write_text(path, dumps(obj) + "\n")


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


# -- graph.json ---------------------------------------------------------------

def graph_to_dict(g: ConnectivityGraph) -> dict:
    nodes = []
    for i in range(g.node_count):
        node = {"id": i}
        if g.coords is not None:
            node["lat"], node["lon"] = g.coords[i]
        nodes.append(node)
    edges = [{"u": u, "v": v, "w": float(w)} for u, v, w in g.edges]
    return {"nodes": nodes, "edges": edges}


def graph_from_dict(data: dict) -> ConnectivityGraph:
    try:
        nodes = data["nodes"]
        ids = [int(n["id"]) for n in nodes]
        if sorted(ids) != list(range(len(ids))):
            raise InputError("node ids must be dense integers 0..n-1")
        order = sorted(range(len(nodes)), key=lambda i: ids[i])
        coords = None
        if nodes and all("lat" in n and "lon" in n for n in nodes):
            coords = [(float(nodes[i]["lat"]), float(nodes[i]["lon"])) for i in order]
        edges = [(e["u"], e["v"], e.get("w", 1.0)) for e in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph document: {exc!r}") from None
    return build_graph(edges, len(ids), coords)


def graph_hash(g: ConnectivityGraph) -> str:
    return hashlib.sha256(dumps(graph_to_dict(g)).encode("utf-8")).hexdigest()


def save_graph(g: ConnectivityGraph, path) -> None:
    write_json(path, graph_to_dict(g))


def load_graph(path) -> ConnectivityGraph:
    return graph_from_dict(read_json(path))


# -- traces.jsonl -------------------------------------------------------------

def traces_to_text(trajectories, seed, role, ghash) -> str:
    header = {"seed": int(seed), "role": role, "graph_hash": ghash}
    lines = [dumps(header)] + [dumps([int(v) for v in z]) for z in trajectories]
    return "\n".join(lines) + "\n"


def save_traces(ts, path) -> None:
    write_text(path, traces_to_text(ts.trajectories, ts.seed, ts.role, ts.graph_hash))


def load_traces(path):
    from .datagen import TrajectorySet

    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().split("\n") if ln.strip()]
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    if not lines:
        raise InputError(f"{path}: empty trace file")
    try:
        header = json.loads(lines[0])
        trajectories = [tuple(int(v) for v in json.loads(ln)) for ln in lines[1:]]
        return TrajectorySet(
            trajectories=trajectories,
            seed=int(header["seed"]),
            role=header["role"],
            graph_hash=header.get("graph_hash"),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed trace file ({exc!r})") from None


# -- metrics.csv --------------------------------------------------------------

METRICS_HEADER = ["node_id", "total_depth", "k_local", "closeness", "mean_depth", "ra", "score"]


def _cell(x) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else fmt_float(x)


def metrics_to_text(m) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(METRICS_HEADER)
    for i in range(len(m.total_depth)):
        w.writerow([
            i, int(m.total_depth[i]), int(m.k_local[i]),
            _cell(m.closeness[i]), _cell(m.mean_depth[i]), _cell(m.ra[i]), _cell(m.score[i]),
        ])
    return buf.getvalue()


def save_metrics(m, path) -> None:
    write_text(path, metrics_to_text(m))


def load_metrics(path):
    from .syntax import SyntaxMetrics

    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    if not rows or rows[0] != METRICS_HEADER:
        raise InputError(f"{path}: expected header {','.join(METRICS_HEADER)}")
    body = rows[1:]
    try:
        if [int(r[0]) for r in body] != list(range(len(body))):
            raise InputError(f"{path}: rows must be sorted by dense node_id")
        col = lambda j: np.array([float(r[j]) if r[j] != "" else np.nan for r in body])
        return SyntaxMetrics(
            total_depth=np.array([int(r[1]) for r in body], dtype=np.int64),
            k_local=np.array([int(r[2]) for r in body], dtype=np.int64),
            closeness=col(3), mean_depth=col(4), ra=col(5), score=col(6),
        )
    except (IndexError, ValueError) as exc:
        raise InputError(f"{path}: malformed metrics row ({exc})") from None


# -- history.csv --------------------------------------------------------------

def history_to_text(history) -> str:
    lines = ["iter,grad_l1,learning_rate"]
    lines += [f"{h.iteration},{fmt_float(h.grad_l1)},{fmt_float(h.learning_rate)}" for h in history]
    return "\n".join(lines) + "\n"


def load_history(path) -> list:
    from .irl import HistoryRecord

    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [HistoryRecord(int(r["iter"]), float(r["grad_l1"]), float(r["learning_rate"])) for r in rows]
