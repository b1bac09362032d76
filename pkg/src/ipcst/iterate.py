"""Iterative best-of-three PCST: GW on scaled penalties, Steiner on live vertices,
and a recursive call with the dead vertices' penalties zeroed."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .instance import (  # noqa: F401  (evaluate_cost is part of this module's surface)
    PcstInstance,
    Solution,
    evaluate_cost,
    scale_penalties,
    to_rational,
    zero_penalties,
)
from .moat import MoatRun, run_gw
from .steiner import EXACT_DP, MST2, SteinerCapacityError, SteinerSolver, steiner_tree

DEFAULT_BETA = Fraction(313, 250)  # 1.252
LABELS = ("GW", "ST", "IT")


class BetaRangeError(ValueError):
    pass


@dataclass(frozen=True)
class LevelRecord:
    cost_gw: Fraction
    cost_st: Fraction
    cost_it: Fraction | None
    dead: frozenset
    chosen: str
    steiner_kind: str
    penalty_of_dead: Fraction


@dataclass(frozen=True)
class IterTrace:
    levels: tuple
    beta: Fraction
    p: Fraction

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class _Level:
    inst: PcstInstance
    run: MoatRun
    gw: Solution
    st: Solution
    steiner_kind: str
    penalty_of_dead: Fraction


def ipcst(inst: PcstInstance, beta=DEFAULT_BETA, solver: SteinerSolver = EXACT_DP,
          allow_beta_gt_2: bool = False) -> tuple[Solution, IterTrace]:
    """Cheapest of the GW, ST and recursive candidates, priced on ``inst``.

    Ties prefer GW, then ST, then IT. The recursion is unrolled into a loop:
    levels are collected top-down, then the choices are made bottom-up, each
    inner winner re-priced against its parent's penalties.
    """
    b = to_rational(beta)
    if b <= 0:
        raise BetaRangeError(f"beta must be positive, got {b}")
    if b > 2 and not allow_beta_gt_2:
        raise BetaRangeError(f"beta={b} exceeds 2; pass allow_beta_gt_2 to override")

    levels = []
    cur = inst
    while True:
        levels.append(_solve_level(cur, b, solver))
        lv = levels[-1]
        if lv.penalty_of_dead == 0:
            break
        if len(levels) > inst.vertex_count:
            raise RuntimeError("recursion deeper than |V|")
        cur = zero_penalties(cur, lv.run.dead_vertices)

    records = [None] * len(levels)
    best_tree = None
    for i in range(len(levels) - 1, -1, -1):
        lv = levels[i]
        candidates = [lv.gw, lv.st]
        cost_it = None
        if best_tree is not None:
            it = evaluate_cost(lv.inst, best_tree)
            cost_it = it.total_cost
            candidates.append(it)
        pick = min(range(len(candidates)), key=lambda j: (candidates[j].total_cost, j))
        best_tree = candidates[pick].tree
        records[i] = LevelRecord(lv.gw.total_cost, lv.st.total_cost, cost_it, lv.run.dead_vertices,
                                 LABELS[pick], lv.steiner_kind, lv.penalty_of_dead)

    p = max(Fraction(1) if r.steiner_kind == "EXACT_DP" else Fraction(2) for r in records)
    final = evaluate_cost(inst, best_tree)
    return final, IterTrace(tuple(records), b, p)


def _solve_level(inst: PcstInstance, beta: Fraction, solver: SteinerSolver) -> _Level:
    run = run_gw(scale_penalties(inst, beta))
    gw = evaluate_cost(inst, run.tree.tree)
    live = [v for v in inst.vertices if v not in run.dead_vertices]
    try:
        st_tree = steiner_tree(solver, inst, live)
        kind = solver.kind.name
    except SteinerCapacityError:
        st_tree = steiner_tree(MST2, inst, live)
        kind = MST2.kind.name
    st = evaluate_cost(inst, st_tree)
    return _Level(inst, run, gw, st, kind, inst.penalty_sum(run.dead_vertices))


def trace_violations(inst: PcstInstance, trace: IterTrace) -> list[str]:
    """Structural invariants of a trace: depth bound, fresh deaths, clean last level."""
    out = []
    if trace.depth > inst.vertex_count:
        out.append(f"depth {trace.depth} exceeds |V|={inst.vertex_count}")
    zeroed = set()
    last = len(trace.levels) - 1
    for i, rec in enumerate(trace.levels):
        fresh = {v for v in rec.dead if v not in zeroed}
        if rec.penalty_of_dead != inst.penalty_sum(fresh):
            out.append(f"level {i}: dead penalty {rec.penalty_of_dead} does not match fresh deaths")
        if i < last and rec.penalty_of_dead == 0:
            out.append(f"level {i} has zero dead penalty but recursed")
        zeroed |= set(rec.dead)
    if trace.levels and trace.levels[-1].penalty_of_dead != 0:
        out.append("last level has nonzero dead penalty")
    return out

