"""Street graphs from OSM extracts and seeded shortest-path demonstration corpora."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import BadSplit, GraphTooSmall, MalformedXml, NoHighways
from .graph import ConnectivityGraph, build_graph, connected_components, dijkstra_path

EARTH_RADIUS_M = 6371000.0
# floor for chains whose endpoints share coordinates; edge weights must be > 0
MIN_EDGE_M = 1e-6


@dataclass(frozen=True)
class TrajectorySet:
    trajectories: list = field(default_factory=list)
    seed: int = 0
    role: str = "unsplit"  # train | test | unsplit
    graph_hash: str | None = None

    def __len__(self):
        return len(self.trajectories)

    def __iter__(self):
        return iter(self.trajectories)

    def __getitem__(self, i):
        return self.trajectories[i]


def haversine(lat1, lon1, lat2, lon2) -> float:
    """Great-circle distance in metres."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def _osm_key(osm_id: str):
    return (0, int(osm_id), "") if osm_id.lstrip("-").isdigit() else (1, 0, osm_id)


def parse_osm_extract(xml_document) -> ConnectivityGraph:
    """Intersection graph of the ``highway``-tagged ways in an OSM XML document.

    Graph nodes are way endpoints and OSM nodes shared by two or more way
    passes; chains of plain geometry points between them collapse into one
    edge weighted by their summed haversine length. Node ids follow OSM id
    order. Only the largest connected component is kept.
    """
    if hasattr(xml_document, "read"):
        xml_document = xml_document.read()
    try:
        root = ET.fromstring(xml_document)
    except ET.ParseError as exc:
        raise MalformedXml(f"cannot parse OSM XML: {exc}") from None

    coords = {}
    ways = []
    try:
        for el in root:
            if el.tag == "node":
                coords[el.attrib["id"]] = (float(el.attrib["lat"]), float(el.attrib["lon"]))
            elif el.tag == "way":
                tags = {t.attrib["k"]: t.attrib.get("v") for t in el if t.tag == "tag"}
                if "highway" in tags:
                    ways.append([nd.attrib["ref"] for nd in el if nd.tag == "nd"])
    except (KeyError, ValueError) as exc:
        raise MalformedXml(f"OSM element missing or bad attribute: {exc}") from None

    # refs absent from the extract split a way in two
    segments = []
    for refs in ways:
        current = []
        for ref in refs:
            if ref not in coords:
                if len(current) >= 2:
                    segments.append(current)
                current = []
            elif not current or current[-1] != ref:
                current.append(ref)
        if len(current) >= 2:
            segments.append(current)
    if not segments:
        raise NoHighways("no highway-tagged way with at least two located nodes")

    passes = {}
    for seg in segments:
        for ref in seg:
            passes[ref] = passes.get(ref, 0) + 1
    junctions = {seg[0] for seg in segments} | {seg[-1] for seg in segments}
    junctions |= {ref for ref, c in passes.items() if c >= 2}

    best = {}
    for seg in segments:
        start, length = seg[0], 0.0
        for a, b in zip(seg, seg[1:]):
            length += haversine(*coords[a], *coords[b])
            if b in junctions:
                if b != start:
                    key = (start, b) if _osm_key(start) < _osm_key(b) else (b, start)
                    w = max(length, MIN_EDGE_M)
                    if key not in best or w < best[key]:
                        best[key] = w
                start, length = b, 0.0
    if not best:
        raise NoHighways("highway ways produced no edges")

    order = sorted({x for key in best for x in key}, key=_osm_key)
    index = {ref: i for i, ref in enumerate(order)}
    full = build_graph(
        [(index[a], index[b], w) for (a, b), w in best.items()],
        len(order),
        [coords[ref] for ref in order],
    )
    keep = connected_components(full)[0]
    relabel = {old: new for new, old in enumerate(keep)}
    edges = [(relabel[u], relabel[v], w) for u, v, w in full.edges if u in relabel]
    return build_graph(edges, len(keep), [full.coords[u] for u in keep])


def load_osm(path) -> ConnectivityGraph:
    return parse_osm_extract(Path(path).read_bytes())


def generate_corpus(g: ConnectivityGraph, count: int, seed: int, role: str = "unsplit") -> TrajectorySet:
    """``count`` shortest paths between uniformly drawn distinct start/goal pairs."""
    from .io import graph_hash

    if g.node_count < 2:
        raise GraphTooSmall(f"need at least 2 nodes, graph has {g.node_count}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        start, goal = (int(x) for x in rng.integers(0, g.node_count, size=2))
        if start == goal:
            continue
        out.append(tuple(dijkstra_path(g, start, goal)))
    return TrajectorySet(out, int(seed), role, graph_hash(g))


def split_corpus(d: TrajectorySet, train_count: int, test_count: int, seed: int):
    """Seeded shuffle, then the first ``train_count`` go to training.

    Each part keeps the original corpus order.
    """
    m = len(d.trajectories)
    if train_count < 0 or test_count < 0 or train_count + test_count != m:
        raise BadSplit(f"split {train_count}+{test_count} does not partition {m} trajectories")
    perm = np.random.default_rng(seed).permutation(m)
    train_idx = sorted(int(i) for i in perm[:train_count])
    test_idx = sorted(int(i) for i in perm[train_count:])
    train = replace(d, trajectories=[d.trajectories[i] for i in train_idx], seed=int(seed), role="train")
    test = replace(d, trajectories=[d.trajectories[i] for i in test_idx], seed=int(seed), role="test")
    return train, test
