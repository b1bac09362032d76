from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import small_instances
from ipcst.certify import oracle_steiner_cost
from ipcst.instance import gen_star, make_instance
from ipcst.steiner import (
    EXACT_DP,
    EXACT_DP_MAX_TERMINALS,
    MST2,
    SteinerCapacityError,
    SteinerSolver,
    steiner_tree,
    tree_cost,
)
from ipcst._graph import is_tree


def test_star_terminals():
    inst = gen_star(3, Fraction(3, 5))
    for solver in (EXACT_DP, MST2):
        t = steiner_tree(solver, inst, [1, 3, 4])
        assert tree_cost(inst, t) == 3
        assert t.vertices == {1, 2, 3, 4}


def test_root_only():
    inst = gen_star(3, Fraction(3, 5))
    t = steiner_tree(EXACT_DP, inst, [1])
    assert t.edges == frozenset() and t.vertices == {1}


def test_root_required():
    inst = gen_star(3, Fraction(3, 5))
    with pytest.raises(ValueError):
        steiner_tree(EXACT_DP, inst, [3, 4])


def test_mst_heuristic_is_not_exact():
    # three terminals around a cheap hub: exact uses the hub; once the direct
    # edges are shorter than the detour, the closure MST takes two of them
    edges = [(1, 2, 3), (2, 3, 3), (1, 3, 3), (1, 4, 2), (2, 4, 2), (3, 4, 2)]
    inst = make_instance(4, edges, 1, {})
    assert tree_cost(inst, steiner_tree(EXACT_DP, inst, [1, 2, 3])) == 6
    assert tree_cost(inst, steiner_tree(MST2, inst, [1, 2, 3])) == 6
    edges = [(1, 2, "7/2"), (2, 3, "7/2"), (1, 3, "7/2"), (1, 4, 2), (2, 4, 2), (3, 4, 2)]
    inst = make_instance(4, edges, 1, {})
    assert tree_cost(inst, steiner_tree(EXACT_DP, inst, [1, 2, 3])) == 6
    assert tree_cost(inst, steiner_tree(MST2, inst, [1, 2, 3])) == 7


def test_capacity():
    n = EXACT_DP_MAX_TERMINALS + 1
    inst = make_instance(n, [(i, i + 1, 1) for i in range(1, n)], 1, {})
    with pytest.raises(SteinerCapacityError):
        steiner_tree(EXACT_DP, inst, range(1, n + 1))
    assert tree_cost(inst, steiner_tree(MST2, inst, range(1, n + 1))) == n - 1


def test_solver_names():
    assert SteinerSolver.from_name("exact") == EXACT_DP
    assert SteinerSolver.from_name("MST2") == MST2
    assert EXACT_DP.declared_factor == 1 and MST2.declared_factor == 2


@st.composite
def instance_and_terminals(draw):
    inst = draw(small_instances(max_n=8))
    others = [v for v in inst.vertices if v != inst.root]
    terms = draw(st.lists(st.sampled_from(others), unique=True)) if others else []
    return inst, [inst.root] + terms


@given(instance_and_terminals())
@settings(max_examples=100, deadline=None)
def test_exact_matches_enumeration_and_mst_within_two(case):
    inst, terms = case
    exact = steiner_tree(EXACT_DP, inst, terms)
    approx = steiner_tree(MST2, inst, terms)
    best = oracle_steiner_cost(inst, terms)
    assert tree_cost(inst, exact) == best
    assert best <= tree_cost(inst, approx) <= 2 * best
    for t in (exact, approx):
        assert set(terms) <= t.vertices
        assert is_tree(inst.edges, t.edges, set(t.vertices))
        # every leaf is a terminal
        deg = {v: 0 for v in t.vertices}
        for e in t.edges:
            deg[inst.edges[e].u] += 1
            deg[inst.edges[e].v] += 1
        assert all(v in terms for v, d in deg.items() if d == 1)
