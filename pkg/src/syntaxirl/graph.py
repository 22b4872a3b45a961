"""Undirected weighted connectivity graphs.

Nodes are dense integer ids ``0..n-1``. Edge weights are street lengths
(metres, or unit steps for synthetic lattices). Topological depth ignores
the weights; routing uses them.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DuplicateEdge, InvalidEdge, NodeNotFound, Unreachable

# relative slack when deciding whether two route lengths tie
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ConnectivityGraph:
    node_count: int
    edges: tuple  # ((u, v, w), ...) with u < v, sorted
    coords: Optional[tuple] = None  # ((lat, lon), ...) or None
    _adj: tuple = field(default=(), init=False, repr=False, compare=False)
    _weight: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = [[] for _ in range(self.node_count)]
        weight = {}
        for u, v, w in self.edges:
            adj[u].append(v)
            adj[v].append(u)
            weight[(u, v)] = w
            weight[(v, u)] = w
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_weight", weight)

    def neighbors(self, u: int) -> tuple:
        self._check(u)
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def weight(self, u: int, v: int) -> float:
        try:
            return self._weight[(u, v)]
        except KeyError:
            raise InvalidEdge(f"no edge between {u} and {v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._weight

    def csr(self):
        """Adjacency as ``(indptr, indices)`` int64 arrays, neighbours sorted."""
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        for u, nbrs in enumerate(self._adj):
            indptr[u + 1] = indptr[u] + len(nbrs)
        indices = np.fromiter(
            (v for nbrs in self._adj for v in nbrs), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    def _check(self, u):
        if not (isinstance(u, (int, np.integer)) and 0 <= u < self.node_count):
            raise NodeNotFound(f"node {u!r} not in graph of {self.node_count} nodes")


def build_graph(
    edge_list: Iterable[Sequence],
    node_count: int,
    coords: Optional[Sequence] = None,
) -> ConnectivityGraph:
    """Validate an edge list and return an immutable graph.

    Raises :class:`InvalidEdge` on self-loops, out-of-range endpoints or
    non-positive weights, and :class:`DuplicateEdge` when an unordered pair
    appears twice.
    """
    if node_count < 0:
        raise InvalidEdge(f"negative node count {node_count}")
    seen = {}
    for item in edge_list:
        u, v, w = int(item[0]), int(item[1]), float(item[2])
        if u == v:
            raise InvalidEdge(f"self-loop at node {u}")
        for x in (u, v):
            if not 0 <= x < node_count:
                raise InvalidEdge(f"endpoint {x} outside [0, {node_count})")
        if not (w > 0 and np.isfinite(w)):
            raise InvalidEdge(f"edge ({u}, {v}) has non-positive weight {w}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {key} given twice")
        seen[key] = w
    if coords is not None:
        coords = tuple((float(lat), float(lon)) for lat, lon in coords)
        if len(coords) != node_count:
            raise InvalidEdge(f"{len(coords)} coordinates for {node_count} nodes")
    edges = tuple((u, v, w) for (u, v), w in sorted(seen.items()))
    return ConnectivityGraph(node_count, edges, coords)


def grid_graph(width: int, height: int) -> ConnectivityGraph:
    """Unit-weight 4-neighbour lattice; node ``r * width + c``."""
    if width < 1 or height < 1:
        raise InvalidEdge(f"grid dimensions must be positive, got {width}x{height}")
    edges = []
    for r in range(height):
        for c in range(width):
            u = r * width + c
            if c + 1 < width:
                edges.append((u, u + 1, 1.0))
            if r + 1 < height:
                edges.append((u, u + width, 1.0))
    return build_graph(edges, width * height)


def bfs_depths(g: ConnectivityGraph, source: int, radius: Optional[int] = None) -> dict:
    """Hop distance from ``source`` to every node within ``radius`` steps.

    The source itself and unreachable nodes are absent from the result.
    ``radius=None`` means unbounded.
    """
    g._check(source)
    depth = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = depth[u]
        if radius is not None and d >= radius:
            continue
        for v in g._adj[u]:
            if v not in depth:
                depth[v] = d + 1
                queue.append(v)
    del depth[source]
    return depth


def _distances_to(g: ConnectivityGraph, target: int) -> dict:
    dist = {target: 0.0}
    done = set()
    heap = [(0.0, target)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in g._adj[u]:
            nd = d + g._weight[(u, v)]
            if nd < dist.get(v, np.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra_path(g: ConnectivityGraph, src: int, dst: int) -> list:
    """Minimum-weight node sequence from ``src`` to ``dst``.

    Among equally short routes the one taking the smallest next node id at
    every step is returned, so output depends only on the graph.
    """
    g._check(src)
    g._check(dst)
    dist = _distances_to(g, dst)
    if src not in dist:
        raise Unreachable(f"no path from {src} to {dst}")
    path = [src]
    u = src
    while u != dst:
        du = dist[u]
        for v in g._adj[u]:  # ascending id
            dv = dist.get(v)
            if dv is None or not dv < du:
                continue
            if abs(dv + g._weight[(u, v)] - du) <= _TIE_RTOL * max(1.0, du):
                u = v
                break
        else:  # pragma: no cover - dist is a valid shortest-path tree
            raise Unreachable(f"route reconstruction failed at node {u}")
        path.append(u)
    return path


def path_weight(g: ConnectivityGraph, path: Sequence[int]) -> float:
    return float(sum(g.weight(a, b) for a, b in zip(path, path[1:])))


def connected_components(g: ConnectivityGraph) -> list:
    """Components as sorted node lists, largest first (ties: smallest min id)."""
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        comp = [s] + list(bfs_depths(g, s))
        for u in comp:
            seen[u] = True
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def is_connected(g: ConnectivityGraph) -> bool:
    return g.node_count > 0 and len(bfs_depths(g, 0)) == g.node_count - 1
