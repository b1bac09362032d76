"""Small graph primitives shared by the solvers and oracles.

Everything here works on ``(u, v, weight)`` edge tuples indexed by position,
so parallel edges stay distinguishable by id.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from typing import Iterable, Sequence


class DisjointSet:
    """Union-find over arbitrary hashable items with path halving."""

    def __init__(self, items: Iterable = ()):
        self._parent = {}
        self._size = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self._parent:
            self._parent[x] = x
            self._size[x] = 1

    def find(self, x):
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y) -> bool:
        """Merge the sets of ``x`` and ``y``; False if they were already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self._size[rx] < self._size[ry]:
            rx, ry = ry, rx
        self._parent[ry] = rx
        self._size[rx] += self._size[ry]
        return True


def adjacency(edges: Sequence, edge_ids: Iterable[int] | None = None) -> dict:
    """Map vertex -> list of (neighbour, edge id)."""
    adj = defaultdict(list)
    ids = range(len(edges)) if edge_ids is None else edge_ids
    for eid in ids:
        u, v = edges[eid][0], edges[eid][1]
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    return adj


def kruskal(edges: Sequence, vertices: Iterable, edge_ids: Iterable[int] | None = None) -> list[int]:
    """Minimum spanning forest over ``vertices`` using only edges with both ends inside.

    Ties are broken by edge id, so the result is deterministic.
    """
    vs = set(vertices)
    ids = range(len(edges)) if edge_ids is None else edge_ids
    usable = [eid for eid in ids if edges[eid][0] in vs and edges[eid][1] in vs]
    usable.sort(key=lambda eid: (edges[eid][2], eid))
    ds = DisjointSet(vs)
    chosen = []
    for eid in usable:
        if ds.union(edges[eid][0], edges[eid][1]):
            chosen.append(eid)
    return chosen


def dijkstra(adj: dict, source) -> tuple[dict, dict]:
    """Shortest distances and predecessor edge ids from ``source``.

    Works with any totally ordered additive weight type (ints, Fractions).
    Ties are resolved by vertex id, keeping paths reproducible.
    """
    dist = {source: 0}
    pred = {source: None}
    heap = [(0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, eid, w in adj[u]:
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = (u, eid)
                heapq.heappush(heap, (nd, v))
    return dist, pred


def weighted_adjacency(edges: Sequence) -> dict:
    adj = defaultdict(list)
    for eid, e in enumerate(edges):
        u, v, w = e[0], e[1], e[2]
        adj[u].append((v, eid, w))
        adj[v].append((u, eid, w))
    return adj


def path_edges(pred: dict, target) -> list[int]:
    """Edge ids along the shortest-path tree from its source to ``target``."""
    out = []
    while pred[target] is not None:
        u, eid = pred[target]
        out.append(eid)
        target = u
    return out


def component_of(edges: Sequence, edge_ids: Iterable[int], start) -> set:
    """Vertices reachable from ``start`` using the given edges."""
    adj = adjacency(edges, edge_ids)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_tree(edges: Sequence, edge_ids: Iterable[int], vertices: set) -> bool:
    """True iff ``edge_ids`` form a spanning tree on ``vertices``."""
    ids = list(edge_ids)
    if len(ids) != len(vertices) - 1:
        return False
    ds = DisjointSet(vertices)
    for eid in ids:
        u, v = edges[eid][0], edges[eid][1]
        if u not in vertices or v not in vertices or not ds.union(u, v):
            return False
    return True


def prune_leaves(edges: Sequence, edge_ids: Iterable[int], keep: set) -> set[int]:
    """Repeatedly drop leaves not in ``keep`` from a forest."""
    ids = set(edge_ids)
    changed = True
    while changed:
        changed = False
        deg = defaultdict(list)
        for eid in ids:
            deg[edges[eid][0]].append(eid)
            deg[edges[eid][1]].append(eid)
        for v, inc in deg.items():
            if len(inc) == 1 and v not in keep:
                ids.discard(inc[0])
                changed = True
    return ids
