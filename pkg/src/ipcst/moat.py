"""Goemans-Williamson moat growing for rooted PCST, simulated event by event.

All times and durations are exact Fractions. Every unit of coloring is charged
to a single vertex (root first, then ascending id among members with potential
left), so the per-vertex durations ``y_v`` and per-set durations ``y_S`` are
available for the lemma checks in :mod:`ipcst.certify`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ._graph import component_of
from .instance import PcstInstance, Solution, Tree, evaluate_cost, is_infinite


@dataclass(frozen=True)
class ColoringSegment:
    set: tuple  # sorted member ids of the active component
    charged_vertex: int
    duration: Fraction


@dataclass(frozen=True)
class MoatRun:
    forest_edges: frozenset
    tree: Solution
    dead_vertices: frozenset
    dead_sets: tuple  # frozensets, in deactivation order
    history: tuple  # ColoringSegment
    y_v: Mapping[int, Fraction]
    y_sets: Mapping[frozenset, Fraction]
    graph_key: str = ""
    event_count: int = 0
    end_time: Fraction = Fraction(0)
    penalties: Mapping[int, object] = field(default_factory=dict, repr=False)


class _Component:
    __slots__ = ("members", "active", "remaining", "y")

    def __init__(self, members, remaining):
        self.members = members  # sorted list
        self.active = True
        self.remaining = remaining  # None means unbounded (contains the root)
        self.y = Fraction(0)


def run_gw(inst: PcstInstance) -> MoatRun:
    """Growth phase plus pruning on ``inst`` (penalties used as given).

    At equal times, deactivations are processed before merges and merges go
    in ascending edge id; an edge that has become intra-component is skipped.
    """
    root = inst.root
    edges = inst.edges
    pen = inst.penalties
    comp_of = {}
    comps = {}
    for v in inst.vertices:
        c = _Component([v], None if v == root else pen[v])
        comps[v] = c
        comp_of[v] = v
    next_cid = inst.vertex_count + 1
    vertex_left = {v: (None if v == root else pen[v]) for v in inst.vertices}
    y_v = {v: Fraction(0) for v in inst.vertices}
    y_sets = {}
    colored = [Fraction(0)] * len(edges)
    forest = []
    dead = set()
    dead_sets = []
    history = []
    now = Fraction(0)
    events = 0

    while len(comps) > 1:
        # deactivation candidate: smallest remaining potential, ties by smallest member
        d1, d1_cid = None, None
        for cid, c in comps.items():
            if c.active and c.remaining is not None:
                if d1 is None or c.remaining < d1 or (c.remaining == d1 and c.members[0] < comps[d1_cid].members[0]):
                    d1, d1_cid = c.remaining, cid
        # merge candidate: earliest fully colored edge, ties by edge id
        d2, d2_eid = None, None
        for eid, e in enumerate(edges):
            cu, cv = comp_of[e.u], comp_of[e.v]
            if cu == cv:
                continue
            k = comps[cu].active + comps[cv].active
            if k == 0:
                continue
            t = (e.weight - colored[eid]) / k
            if d2 is None or t < d2:
                d2, d2_eid = t, eid
        # the root's component is always active and the graph is connected
        assert d2 is not None
        delta = d2 if d1 is None or d2 < d1 else d1

        if delta > 0:
            for eid, e in enumerate(edges):
                cu, cv = comp_of[e.u], comp_of[e.v]
                if cu != cv:
                    colored[eid] += delta * (comps[cu].active + comps[cv].active)
            for c in comps.values():
                if not c.active:
                    continue
                c.y += delta
                if c.remaining is not None:
                    c.remaining -= delta
                _charge(c, delta, root, vertex_left, y_v, history)
            now += delta

        events += 1
        if d1 is not None and d1 <= d2:
            c = comps[d1_cid]
            c.active = False
            dead.update(c.members)
            dead_sets.append(frozenset(c.members))
        else:
            e = edges[d2_eid]
            a, b = comps.pop(comp_of[e.u]), comps.pop(comp_of[e.v])
            for old in (a, b):
                y_sets[frozenset(old.members)] = old.y
            if a.remaining is None or b.remaining is None:
                remaining = None
            else:
                remaining = a.remaining + b.remaining
            merged = _Component(sorted(a.members + b.members), remaining)
            cid = next_cid
            next_cid += 1
            comps[cid] = merged
            for v in merged.members:
                comp_of[v] = cid
            forest.append(d2_eid)

    for c in comps.values():
        y_sets[frozenset(c.members)] = c.y

    tree_edges = _prune(inst, forest, dead_sets)
    tree = evaluate_cost(inst, Tree.from_edges(inst, tree_edges))
    return MoatRun(
        forest_edges=frozenset(forest),
        tree=tree,
        dead_vertices=frozenset(dead),
        dead_sets=tuple(dead_sets),
        history=tuple(history),
        y_v=y_v,
        y_sets=y_sets,
        graph_key=inst.graph_key(),
        event_count=events,
        end_time=now,
        penalties=dict(pen),
    )


def _charge(c, delta, root, vertex_left, y_v, history):
    key = tuple(c.members)
    if c.remaining is None:
        # a set holding the root always spends the root's color
        y_v[root] += delta
        history.append(ColoringSegment(key, root, delta))
        return
    left = delta
    for v in c.members:
        if left == 0:
            break
        avail = vertex_left[v]
        if avail <= 0:
            continue
        take = min(avail, left)
        vertex_left[v] = avail - take
        y_v[v] += take
        left -= take
        history.append(ColoringSegment(key, v, take))
    # delta never exceeds the component's remaining potential
    assert left == 0


def _prune(inst, forest, dead_sets):
    """Drop dead sets that hang off the forest by a single edge, to a fixpoint."""
    edges = inst.edges
    current = set(forest)
    changed = True
    while changed:
        changed = False
        for s in reversed(dead_sets):
            cut = [eid for eid in current if (edges[eid].u in s) != (edges[eid].v in s)]
            if len(cut) != 1:
                continue
            inside = {eid for eid in current if edges[eid].u in s and edges[eid].v in s}
            current -= inside
            current.discard(cut[0])
            changed = True
    keep = component_of(edges, current, inst.root)
    return {eid for eid in current if edges[eid].u in keep}


def gw_cost(run: MoatRun, original_penalties: Mapping[int, object], inst: PcstInstance | None = None) -> Fraction:
    """c(T) plus the *original* penalties of the vertices T misses."""
    total = run.tree.edge_cost
    for v, p in original_penalties.items():
        if v not in run.tree.tree_vertices:
            if is_infinite(p):
                raise ValueError(f"vertex {v} with infinite penalty is outside the tree")
            total += p
    return total


# ---------------------------------------------------------------- replay checks

def history_totals(run: MoatRun) -> tuple[dict, dict]:
    """(y_v, y_S) recomputed from the segment list alone."""
    yv, ys = {}, {}
    for seg in run.history:
        yv[seg.charged_vertex] = yv.get(seg.charged_vertex, Fraction(0)) + seg.duration
        key = frozenset(seg.set)
        ys[key] = ys.get(key, Fraction(0)) + seg.duration
    return yv, ys


def replay_check(run: MoatRun, inst: PcstInstance) -> list[str]:
    """Violated invariants of a run on ``inst``; an empty list means all hold.

    Durations are recomputed from the history, so a tampered history shows up
    either as a bookkeeping mismatch or as a failed bound.
    """
    out = []
    edges = inst.edges
    root = inst.root
    yv, ys = history_totals(run)
    for v in inst.vertices:
        if yv.get(v, 0) != run.y_v.get(v, 0):
            out.append(f"history: segments charged to {v} sum to {yv.get(v, 0)}, y_v is {run.y_v.get(v, 0)}")
    for s, val in run.y_sets.items():
        if ys.get(s, 0) != val:
            out.append(f"history: segments of set {sorted(s)} sum to {ys.get(s, 0)}, y_S is {val}")
    for s in ys:
        if s not in run.y_sets:
            out.append(f"history: set {sorted(s)} has segments but no y_S entry")
    for seg in run.history:
        if seg.duration <= 0:
            out.append(f"history: nonpositive duration on set {list(seg.set)}")
        if seg.charged_vertex not in seg.set:
            out.append(f"history: vertex {seg.charged_vertex} charged outside its set")
        if root in seg.set and seg.charged_vertex != root:
            out.append(f"history: set {list(seg.set)} holds the root but charged {seg.charged_vertex}")

    tv = run.tree.tree_vertices
    te = run.tree.tree_edges
    if not te <= run.forest_edges:
        out.append("structure: tree edges not contained in the forest")
    if not _spans(inst, run.forest_edges):
        out.append("structure: forest is not a spanning tree")

    # (a) every tree edge is fully colored
    colored = sum((val * sum(1 for e in te if (edges[e].u in s) != (edges[e].v in s))
                   for s, val in ys.items()), Fraction(0))
    c_t = inst.edge_cost(te)
    if colored != c_t:
        out.append(f"full coloring: c(T)={c_t} but coloring of T is {colored}")

    live_sum = sum((yv.get(v, Fraction(0)) for v in tv if v != root), Fraction(0))
    # (b) tree weight bound
    if not c_t <= 2 * live_sum:
        out.append(f"tree bound: c(T)={c_t} > 2*{live_sum}")
    # (c) durations vs penalties
    for v in inst.vertices:
        if v == root:
            continue
        p = inst.penalties[v]
        y = yv.get(v, Fraction(0))
        if y > p:
            out.append(f"potential: y_{v}={y} exceeds penalty {p}")
        if v in run.dead_vertices and y != p:
            out.append(f"potential: dead vertex {v} has y={y} != penalty {p}")
    # (d) vertices outside T are dead
    for v in inst.vertices:
        if v not in tv and v not in run.dead_vertices:
            out.append(f"outside vertex {v} is not dead")
    # (e) total cost bound
    outside_sum = sum((yv.get(v, Fraction(0)) for v in inst.vertices if v not in tv), Fraction(0))
    total = evaluate_cost(inst, run.tree.tree).total_cost
    if total > 2 * live_sum + outside_sum:
        out.append(f"cost bound: total {total} > 2*{live_sum} + {outside_sum}")
    return out


def _spans(inst, edge_ids):
    from ._graph import is_tree

    return is_tree(inst.edges, edge_ids, set(inst.vertices))
