"""Steiner tree subroutines with a declared approximation factor.

``EXACT_DP`` is Dreyfus-Wagner over terminal subsets (factor 1, at most
:data:`EXACT_DP_MAX_TERMINALS` terminals). ``MST2`` is the metric-closure
minimum spanning tree heuristic (factor 2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._graph import dijkstra, kruskal, path_edges, prune_leaves, weighted_adjacency
from .instance import PcstInstance, Tree

EXACT_DP_MAX_TERMINALS = 14


class SteinerCapacityError(RuntimeError):
    """Too many terminals for the exact dynamic program."""


class SteinerKind(enum.Enum):
    EXACT_DP = "exact"
    MST2 = "mst2"


@dataclass(frozen=True)
class SteinerSolver:
    kind: SteinerKind

    @property
    def declared_factor(self) -> Fraction:
        return Fraction(1) if self.kind is SteinerKind.EXACT_DP else Fraction(2)

    @classmethod
    def from_name(cls, name: str) -> "SteinerSolver":
        return cls(SteinerKind(name.lower()))


EXACT_DP = SteinerSolver(SteinerKind.EXACT_DP)
MST2 = SteinerSolver(SteinerKind.MST2)


def steiner_tree(solver: SteinerSolver, inst: PcstInstance, terminals: Iterable[int]) -> Tree:
    """A tree in ``inst``'s graph spanning ``terminals`` (which must include the root)."""
    terms = set(terminals)
    if inst.root not in terms:
        raise ValueError("terminal set must contain the root")
    bad = [t for t in terms if not 1 <= t <= inst.vertex_count]
    if bad:
        raise ValueError(f"terminals out of range: {sorted(bad)}")
    if len(terms) == 1:
        return Tree(frozenset(), frozenset({inst.root}))
    if solver.kind is SteinerKind.EXACT_DP:
        if len(terms) > EXACT_DP_MAX_TERMINALS:
            raise SteinerCapacityError(
                f"{len(terms)} terminals exceed the exact DP limit of {EXACT_DP_MAX_TERMINALS}")
        ids = _dreyfus_wagner(inst, terms)
    else:
        ids = _mst_heuristic(inst, terms)
    return _clean(inst, ids, terms)


def _clean(inst, ids, terms):
    """Spanning tree of the chosen edges' subgraph, with non-terminal leaves removed."""
    vs = {inst.root}
    for e in ids:
        vs.update((inst.edges[e].u, inst.edges[e].v))
    tree_ids = kruskal(inst.edges, vs, sorted(ids))
    tree_ids = prune_leaves(inst.edges, tree_ids, terms)
    return Tree.from_edges(inst, tree_ids)


def _all_pairs(inst, sources):
    adj = weighted_adjacency(inst.edges)
    for v in inst.vertices:
        adj.setdefault(v, [])
    return {s: dijkstra(adj, s) for s in sources}


def _dreyfus_wagner(inst: PcstInstance, terms: set) -> set:
    root = inst.root
    others = sorted(terms - {root})
    k = len(others)
    vertices = list(inst.vertices)
    sp = _all_pairs(inst, vertices)
    dist = {s: sp[s][0] for s in vertices}

    full = (1 << k) - 1
    dp = [None] * (full + 1)
    via = [None] * (full + 1)  # mask -> {v: u}, tree for mask joined at u then path u->v
    split = [None] * (full + 1)  # mask -> {u: submask}
    for i, t in enumerate(others):
        dp[1 << i] = {v: dist[t][v] for v in vertices}

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        low = mask & -mask
        g, g_split = {}, {}
        for u in vertices:
            best, best_s = None, None
            # submasks containing the lowest bit, so each split is seen once
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    c = dp[sub][u] + dp[mask ^ sub][u]
                    if best is None or c < best:
                        best, best_s = c, sub
                sub = (sub - 1) & mask
            g[u], g_split[u] = best, best_s
        row, row_via = {}, {}
        for v in vertices:
            best, best_u = None, None
            for u in vertices:
                c = g[u] + dist[u][v]
                if best is None or c < best:
                    best, best_u = c, u
            row[v], row_via[v] = best, best_u
        dp[mask], via[mask], split[mask] = row, row_via, g_split

    chosen = set()

    def build(mask, v):
        if mask & (mask - 1) == 0:
            t = others[mask.bit_length() - 1]
            chosen.update(path_edges(sp[t][1], v))
            return
        u = via[mask][v]
        chosen.update(path_edges(sp[u][1], v))
        s = split[mask][u]
        build(s, u)
        build(mask ^ s, u)

    build(full, root)
    return chosen


def _mst_heuristic(inst: PcstInstance, terms: set) -> set:
    order = sorted(terms)
    sp = _all_pairs(inst, order)
    closure = []
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            closure.append((a, b, sp[a][0][b]))
    chosen = set()
    for cid in kruskal(closure, order):
        a, b, _ = closure[cid]
        chosen.update(path_edges(sp[a][1], b))
    return chosen


def tree_cost(inst: PcstInstance, tree: Tree) -> Fraction:
    return inst.edge_cost(tree.edges)
