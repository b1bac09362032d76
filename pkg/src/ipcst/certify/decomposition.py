"""Coloring-mass decomposition relative to an optimal tree, and the lemma checks
that bound each candidate solution by those masses."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from fractions import Fraction

from ..instance import (
    PcstInstance,
    Solution,
    augment_with_root_edges,
    evaluate_cost,
    scale_penalties,
    to_rational,
    zero_penalties,
)
from ..moat import MoatRun, gw_cost, run_gw
from ..steiner import EXACT_DP, SteinerSolver, steiner_tree
from .oracles import oracle_pcst


class FingerprintMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DecompStats:
    r_A: Fraction
    r_B: Fraction
    r_C: Fraction
    r_D: Fraction
    r_Bp: Fraction
    r_Bz: Fraction
    r_Dp: Fraction
    r_Dz: Fraction
    b1: Fraction
    b2: Fraction

    def violations(self) -> list[str]:
        out = []
        if self.r_B != self.r_Bp + self.r_Bz:
            out.append("r_B != r_Bp + r_Bz")
        if self.r_D != self.r_Dp + self.r_Dz:
            out.append("r_D != r_Dp + r_Dz")
        if self.r_B != self.b1 + self.b2:
            out.append("r_B != b1 + b2")
        for f in fields(self):
            if getattr(self, f.name) < 0:
                out.append(f"{f.name} is negative")
        return out

    def corrupted(self, **changes) -> "DecompStats":
        return replace(self, **changes)


@dataclass(frozen=True)
class Classes:
    A: frozenset
    B: frozenset
    C: frozenset
    D: frozenset


def classify(inst: PcstInstance, run: MoatRun, opt: Solution) -> Classes:
    """Non-root vertices by (in the optimal tree?) x (dead in the run?)."""
    a, b, c, d = set(), set(), set(), set()
    for v in inst.vertices:
        if v == inst.root:
            continue
        in_opt = v in opt.tree_vertices
        is_dead = v in run.dead_vertices
        if in_opt:
            (b if is_dead else a).add(v)
        else:
            (d if is_dead else c).add(v)
    return Classes(frozenset(a), frozenset(b), frozenset(c), frozenset(d))


def decompose(inst: PcstInstance, run: MoatRun, opt: Solution) -> DecompStats:
    """Aggregate the run's per-vertex durations by class.

    ``run`` comes from the scaled instance, ``opt`` from the unscaled one; both
    must share ``inst``'s graph.
    """
    if run.graph_key != inst.graph_key():
        raise FingerprintMismatch("run was produced on a different graph")
    if not opt.tree_edges <= set(range(len(inst.edges))) or inst.root not in opt.tree_vertices:
        raise FingerprintMismatch("optimal tree does not belong to this instance")
    cls = classify(inst, run, opt)
    y = run.y_v
    gw_vertices = run.tree.tree_vertices

    def mass(vs):
        return sum((y[v] for v in vs), Fraction(0))

    opt_edges = [inst.edges[e] for e in opt.tree_edges]
    b1 = b2 = Fraction(0)
    for seg in run.history:
        if seg.charged_vertex not in cls.B:
            continue
        s = set(seg.set)
        cut = sum(1 for e in opt_edges if (e.u in s) != (e.v in s))
        if cut == 1:
            b1 += seg.duration
        elif cut > 1:
            b2 += seg.duration
    return DecompStats(
        r_A=mass(cls.A),
        r_B=mass(cls.B),
        r_C=mass(cls.C),
        r_D=mass(cls.D),
        r_Bp=mass(cls.B & gw_vertices),
        r_Bz=mass(cls.B - gw_vertices),
        r_Dp=mass(cls.D & gw_vertices),
        r_Dz=mass(cls.D - gw_vertices),
        b1=b1,
        b2=b2,
    )


def check_lemmas(inst: PcstInstance, run: MoatRun, opt: Solution, stats: DecompStats, beta,
                 solver: SteinerSolver = EXACT_DP, alpha=None) -> list[str]:
    """Evaluate the per-call bounds on one level of the iterative algorithm.

    Returns human-readable descriptors of every failed inequality. ``alpha``
    (if given, and at least the solver's factor) adds the alpha-form
    restatements of the GW and ST bounds.
    """
    b = to_rational(beta)
    p = solver.declared_factor
    out = list(stats.violations())
    dead = run.dead_vertices
    y = run.y_v
    cost_opt = opt.total_cost
    c_opt = opt.edge_cost

    # dead vertices spent exactly their scaled penalty
    for v in inst.vertices:
        if v == inst.root:
            continue
        pv = inst.penalties[v]
        if b * y[v] > pv:
            out.append(f"scaled-potential: beta*y_{v}={b * y[v]} > pi={pv}")
        if v in dead and b * y[v] != pv:
            out.append(f"scaled-potential: dead {v} has beta*y={b * y[v]} != pi={pv}")
    # OPT pays its tree and the penalties it drops
    if cost_opt < c_opt + b * stats.r_C + b * stats.r_D:
        out.append(f"opt-penalty-bound: OPT={cost_opt} < c(T_OPT)+beta(r_C+r_D)")
    # coloring mass inside OPT
    lower = stats.r_A + stats.b1 + 2 * stats.b2 + b * stats.r_C + b * stats.r_D
    if cost_opt < lower:
        out.append(f"opt-coloring-bound: OPT={cost_opt} < r_A+b1+2b2+beta(r_C+r_D)={lower}")
    if c_opt < stats.r_A + stats.b1 + 2 * stats.b2:
        out.append(f"opt-coloring-bound: c(T_OPT)={c_opt} < r_A+b1+2b2")
    # GW pays at most twice its coloring
    cost_gw = gw_cost(run, inst.penalties)
    if cost_gw > 2 * (stats.r_A + stats.r_B + stats.r_C + stats.r_D):
        out.append(f"gw-bound: cost_GW={cost_gw} > 2(r_A+r_B+r_C+r_D)")
    # Steiner tree on the live vertices
    live = [v for v in inst.vertices if v not in dead]
    st = evaluate_cost(inst, steiner_tree(solver, inst, live))
    min_steiner = steiner_tree(EXACT_DP, inst, live)
    c_min = inst.edge_cost(min_steiner.edges)
    if st.total_cost > p * c_min + b * stats.r_B + b * stats.r_D:
        out.append(f"st-bound: cost_ST={st.total_cost} > p*c(minSteiner(L))+beta(r_B+r_D)")
    if c_min > c_opt + 2 * stats.r_C + 2 * stats.r_D:
        out.append(f"live-steiner-bound: c(minSteiner(L))={c_min} > c(T_OPT)+2(r_C+r_D)")
    # optimum once the dead penalties are zeroed
    opt_r = oracle_pcst(zero_penalties(inst, dead)).total_cost
    if opt_r > cost_opt - b * stats.r_D - stats.b1:
        out.append(f"residual-opt-bound: OPT(R)={opt_r} > OPT-beta*r_D-b1")

    if alpha is not None:
        a = to_rational(alpha)
        if a < p:
            raise ValueError("alpha must be at least the Steiner factor p")
        rhs_gw = (a * cost_opt + (2 - a) * stats.r_A + (2 - a) * stats.b1 + (2 - 2 * a) * stats.b2
                  + (2 - a * b) * stats.r_C + (2 - a * b) * stats.r_D)
        if cost_gw > rhs_gw:
            out.append(f"gw-alpha-bound: cost_GW={cost_gw} > alpha-form bound {rhs_gw}")
        rhs_st = (a * cost_opt + (p - a) * stats.r_A + (p + b - a) * stats.b1 + (2 * p + b - 2 * a) * stats.b2
                  + (2 * p - a * b) * stats.r_C + (2 * p + b - a * b) * stats.r_D)
        if st.total_cost > rhs_st:
            out.append(f"st-alpha-bound: cost_ST={st.total_cost} > alpha-form bound {rhs_st}")
    return out


def root_edge_violations(inst: PcstInstance, targets=None, beta=1) -> list[str]:
    """Compare GW on the scaled instance with and without zero-weight root edges.

    ``targets`` defaults to the optimal tree's non-root vertices.
    """
    scaled = scale_penalties(inst, beta)
    if targets is None:
        opt = oracle_pcst(inst)
        targets = opt.tree_vertices - {inst.root}
    base = run_gw(scaled)
    aug = run_gw(augment_with_root_edges(scaled, targets))
    out = []
    for v in inst.vertices:
        if aug.y_v[v] > base.y_v[v]:
            out.append(f"root-edge: y'_{v}={aug.y_v[v]} > y_{v}={base.y_v[v]}")
    for v in targets:
        if aug.y_v[v] != 0:
            out.append(f"root-edge: target {v} has y'={aug.y_v[v]} != 0")
    if not aug.dead_vertices <= base.dead_vertices:
        out.append(f"root-edge: K' has extra vertices {sorted(aug.dead_vertices - base.dead_vertices)}")
    return out
