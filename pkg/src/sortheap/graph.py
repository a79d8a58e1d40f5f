"""Directed graphs, DIMACS ``.gr`` files and Dijkstra's algorithm."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INF = math.inf


class DimacsError(ValueError):
    pass


@dataclass
class Graph:
    node_count: int
    arcs: list[tuple[int, int, int]] = field(default_factory=list)

    def __post_init__(self):
        for t, h, w in self.arcs:
            if w < 0:
                raise ValueError(f"negative weight on arc {t}->{h}")
            if not (1 <= t <= self.node_count and 1 <= h <= self.node_count):
                raise ValueError(f"arc {t}->{h} outside 1..{self.node_count}")

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count + 1)]
        for t, h, w in self.arcs:
            adj[t].append((h, w))
        return adj


def parse_dimacs(text: str) -> Graph:
    n = m = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] != "sp":
                raise DimacsError(f"line {lineno}: expected 'p sp <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: bad counts in {raw!r}") from None
        elif parts[0] == "a":
            if n is None:
                raise DimacsError(f"line {lineno}: arc before problem line")
            if len(parts) != 4:
                raise DimacsError(f"line {lineno}: expected 'a <tail> <head> <weight>'")
            try:
                t, h, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: bad arc {raw!r}") from None
            if w < 0:
                raise DimacsError(f"line {lineno}: negative weight {w}")
            if not (1 <= t <= n and 1 <= h <= n):
                raise DimacsError(f"line {lineno}: node id outside 1..{n}")
            arcs.append((t, h, w))
        else:
            raise DimacsError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise DimacsError("missing 'p sp' problem line")
    if len(arcs) != m:
        raise DimacsError(f"arc count mismatch: expected {m}, found {len(arcs)}")
    return Graph(n, arcs)


def ingest_dimacs(path) -> Graph:
    return parse_dimacs(Path(path).read_text())


def format_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"c {comment}")
    lines.append(f"p sp {g.node_count} {len(g.arcs)}")
    lines += [f"a {t} {h} {w}" for t, h, w in g.arcs]
    return "\n".join(lines) + "\n"


def write_dimacs(g: Graph, path, comment: str | None = None) -> None:
    Path(path).write_text(format_dimacs(g, comment))


def random_graph(n: int, m: int, max_weight: int, rng) -> Graph:
    """``m`` arcs with uniform endpoints and weights in ``[0, max_weight]``.

    ``rng`` is a :class:`~sortheap.workload.SplitMix64`.
    """
    arcs = [(1 + rng.below(n), 1 + rng.below(n), rng.between(0, max_weight))
            for _ in range(m)]
    return Graph(n, arcs)


def make_heap(kind: str, strategy: str = "eager", forest_cls=None):
    from .pairing_heap import PairingHeap
    from .sort_heap import SortHeap

    if kind == "sort":
        return SortHeap(strategy, forest_cls=forest_cls)
    if kind == "pairing":
        return PairingHeap(forest_cls=forest_cls)
    raise ValueError(f"unknown heap kind {kind!r}")


def run_dijkstra(g: Graph, source: int, heap="sort", strategy: str = "eager",
                 forest_cls=None) -> list[float]:
    """Label-setting Dijkstra; ``dist[v-1]`` for node ``v``, ``inf`` if unreachable.

    ``heap`` is a heap kind name or an instance with the handle interface.
    Keys pack ``distance * (n + 1) + node`` so the extracted minimum names
    its node.
    """
    n = g.node_count
    if not 1 <= source <= n:
        raise ValueError(f"source {source} outside 1..{n}")
    pq = make_heap(heap, strategy, forest_cls) if isinstance(heap, str) else heap
    adj = g.adjacency()
    scale = n + 1
    dist = [INF] * (n + 1)
    handle = [None] * (n + 1)
    done = [False] * (n + 1)
    dist[source] = 0
    handle[source] = pq.insert(source)
    while len(pq):
        key = pq.extract_min()
        u = key % scale
        done[u] = True
        du = dist[u]
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = du + w
            if nd < dist[v]:
                if handle[v] is None:
                    handle[v] = pq.insert(nd * scale + v)
                else:
                    pq.decrease_key(handle[v], (dist[v] - nd) * scale)
                dist[v] = nd
    return dist[1:]


def reference_dijkstra(g: Graph, source: int) -> list[float]:
    """Array-scan Dijkstra, O(n^2), independent of any heap."""
    n = g.node_count
    w = np.full((n, n), np.inf)
    for t, h, wt in g.arcs:
        if wt < w[t - 1, h - 1]:
            w[t - 1, h - 1] = wt
    dist = np.full(n, np.inf)
    dist[source - 1] = 0
    settled = np.zeros(n, dtype=bool)
    for _ in range(n):
        cand = np.where(settled, np.inf, dist)
        u = int(np.argmin(cand))
        if not np.isfinite(cand[u]):
            break
        settled[u] = True
        np.minimum(dist, dist[u] + w[u], out=dist)
    return [int(d) if np.isfinite(d) else INF for d in dist]
