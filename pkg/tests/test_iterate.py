from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import small_instances
from ipcst.certify import oracle_pcst
from ipcst.instance import gen_star, make_instance, random_corpus, solution_violations
from ipcst.iterate import DEFAULT_BETA, BetaRangeError, ipcst, trace_violations
from ipcst.steiner import MST2


def test_default_beta():
    assert DEFAULT_BETA == Fraction(313, 250)


def test_star_default():
    sol, trace = ipcst(gen_star(3, Fraction(3, 5)))
    assert sol.total_cost == 3
    assert trace.depth == 0
    assert trace.levels[0].chosen == "GW"


def test_star_large_beta_recurses_once():
    inst = gen_star(3, Fraction(3, 5))
    sol, trace = ipcst(inst, Fraction(16, 5), allow_beta_gt_2=True)
    assert sol.total_cost == 6
    assert trace.depth == 1
    top = trace.levels[0]
    assert (top.cost_gw, top.cost_st, top.cost_it) == (6, 6, 6)
    assert top.chosen == "GW"
    assert top.dead == {2, 3, 4} and top.penalty_of_dead == 6
    assert trace.levels[1].penalty_of_dead == 0 and trace.levels[1].cost_it is None


def test_single_vertex():
    sol, trace = ipcst(make_instance(1, [], 1, {}))
    assert sol.total_cost == 0 and trace.depth == 0


@pytest.mark.parametrize("beta", [Fraction(0), Fraction(-1), Fraction(21, 10)])
def test_beta_range(beta):
    with pytest.raises(BetaRangeError):
        ipcst(gen_star(3, Fraction(3, 5)), beta)


def test_exact_dp_falls_back_when_too_many_terminals():
    n = 16
    inst = make_instance(n, [(i, i + 1, 1) for i in range(1, n)], 1, {v: 100 for v in range(2, n + 1)})
    sol, trace = ipcst(inst)
    assert sol.total_cost == n - 1
    assert trace.levels[0].steiner_kind == "MST2"
    assert trace.p == 2


def test_inner_winner_is_repriced():
    # the inner level sees zero penalties on the first level's dead vertices,
    # so its IT entry must be recomputed on the outer penalties
    for inst in random_corpus(60, seed=17, max_n=7):
        sol, trace = ipcst(inst)
        for rec in trace.levels:
            best = min(c for c in (rec.cost_gw, rec.cost_st, rec.cost_it) if c is not None)
            label = {"GW": rec.cost_gw, "ST": rec.cost_st, "IT": rec.cost_it}[rec.chosen]
            assert label == best
        assert sol.total_cost == min(c for c in (trace.levels[0].cost_gw, trace.levels[0].cost_st,
                                                trace.levels[0].cost_it) if c is not None)


def test_tie_prefers_gw_then_st():
    sol, trace = ipcst(gen_star(3, Fraction(3, 5)), Fraction(16, 5), allow_beta_gt_2=True)
    assert trace.levels[0].chosen == "GW"


@given(small_instances(max_n=7))
@settings(max_examples=60, deadline=None)
def test_ratio_and_trace(inst):
    opt = oracle_pcst(inst).total_cost
    for solver in (None, MST2):
        sol, trace = ipcst(inst) if solver is None else ipcst(inst, solver=solver)
        assert solution_violations(inst, sol) == []
        assert trace_violations(inst, trace) == []
        assert opt <= sol.total_cost <= 2 * opt
        assert trace.depth <= inst.vertex_count


def test_trace_violations_fire():
    inst = gen_star(3, Fraction(3, 5))
    _, trace = ipcst(inst, Fraction(16, 5), allow_beta_gt_2=True)
    broken = replace(trace, levels=trace.levels[:1])
    assert any("last level" in v for v in trace_violations(inst, broken))
