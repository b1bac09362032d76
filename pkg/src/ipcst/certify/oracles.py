"""Exhaustive baselines for small instances."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .._graph import kruskal
from ..instance import PcstInstance, Solution, Tree, evaluate_cost

ORACLE_MAX_VERTICES = 16


class OracleCapacityError(RuntimeError):
    pass


def oracle_pcst(inst: PcstInstance) -> Solution:
    """Exact optimum by enumerating root-containing vertex sets.

    For each set whose induced subgraph is connected, the best tree on exactly
    those vertices is the induced MST. Ties go to the lexicographically
    smallest sorted vertex tuple, then to the Kruskal tree (edge-id tie-break).
    """
    n = inst.vertex_count
    if n > ORACLE_MAX_VERTICES:
        raise OracleCapacityError(f"oracle limited to {ORACLE_MAX_VERTICES} vertices, got {n}")
    root = inst.root
    others = [v for v in inst.vertices if v != root]
    best = None
    best_key = None
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            vs = frozenset((root,) + extra)
            ids = kruskal(inst.edges, vs)
            if len(ids) != len(vs) - 1:
                continue
            sol = evaluate_cost(inst, Tree(frozenset(ids), vs))
            key = (sol.total_cost, tuple(sorted(vs)), tuple(sorted(ids)))
            if best_key is None or key < best_key:
                best, best_key = sol, key
    return best


def oracle_steiner_cost(inst: PcstInstance, terminals: Iterable[int]) -> Fraction:
    """Minimum Steiner tree weight: cheapest connected induced MST over supersets of the terminals."""
    terms = set(terminals)
    if inst.vertex_count > ORACLE_MAX_VERTICES:
        raise OracleCapacityError("instance too large for subset enumeration")
    if len(terms) <= 1:
        return Fraction(0)
    rest = [v for v in inst.vertices if v not in terms]
    best = None
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            vs = terms | set(extra)
            ids = kruskal(inst.edges, vs)
            if len(ids) != len(vs) - 1:
                continue
            c = inst.edge_cost(ids)
            if best is None or c < best:
                best = c
    return best
