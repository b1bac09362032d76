"""Test-only oracles written independently of the library's own search code."""

from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from ipcst.instance import gen_random


def edge_subset_opt(inst):
    """Exact PCST optimum by enumerating edge subsets that form a tree through the root.

    Uses a plain union-find and BFS, nothing from the package.
    """
    m = len(inst.edges)
    assert m <= 14, "too many edges for edge-subset enumeration"
    best = None
    for r in range(0, min(m, inst.vertex_count - 1) + 1):
        for ids in combinations(range(m), r):
            parent = {}

            def find(x):
                while parent.get(x, x) != x:
                    x = parent[x]
                return x

            ok = True
            verts = {inst.root}
            for i in ids:
                e = inst.edges[i]
                a, b = find(e.u), find(e.v)
                if a == b:
                    ok = False
                    break
                parent[a] = b
                verts.update((e.u, e.v))
            if not ok:
                continue
            if len({find(v) for v in verts}) != 1:
                continue
            cost = sum((inst.edges[i].weight for i in ids), Fraction(0))
            cost += sum((inst.penalties[v] for v in inst.vertices if v not in verts), Fraction(0))
            if best is None or cost < best:
                best = cost
    return best


def path_instance_costs():
    """Hand-computed optima for a few tiny instances: (n, edges, root, penalties, OPT)."""
    return [
        (1, [], 1, {}, Fraction(0)),
        (2, [(1, 2, 3)], 1, {2: 2}, Fraction(2)),
        (2, [(1, 2, 3)], 1, {2: 5}, Fraction(3)),
        (3, [(1, 2, 1), (2, 3, 1)], 1, {2: 0, 3: 3}, Fraction(2)),
        (3, [(1, 2, 1), (2, 3, 1), (1, 3, 5)], 2, {1: 1, 3: 4}, Fraction(2)),
    ]


@st.composite
def small_instances(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    prob = draw(st.sampled_from([Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)]))
    seed = draw(st.integers(0, 2**31))
    return gen_random(n, prob, 10, 10, seed)
