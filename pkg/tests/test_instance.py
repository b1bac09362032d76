import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import small_instances
from ipcst.certify import oracle_pcst
from ipcst.instance import (
    INFINITE,
    Edge,
    InstanceError,
    ParseError,
    PcstInstance,
    Tree,
    augment_with_root_edges,
    evaluate_cost,
    format_rational,
    gen_random,
    gen_star,
    is_infinite,
    make_instance,
    parse_instance,
    random_corpus,
    reroot,
    scale_penalties,
    serialize_instance,
    solution_violations,
    star_beta,
    to_rational,
    zero_penalties,
)

STAR3 = """\
33D32945 STP File, STP Format Version 1.0
# comment line
SECTION Comment
Name "star"
END

SECTION Graph
Nodes 4
Edges 3
E 1 2 1
E 2 3 1
E 2 4 1
END

SECTION Terminals
Root 1
TP 3 3
TP 4 3
END

EOF
"""


def test_parse_star3():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = parse_instance(STAR3)
    assert any("Comment" in str(w.message) for w in caught)
    assert inst.vertex_count == 4 and inst.root == 1
    assert [tuple(e) for e in inst.edges] == [(1, 2, 1), (2, 3, 1), (2, 4, 1)]
    assert inst.penalties[1] is INFINITE
    assert inst.penalties[2] == 0 and inst.penalties[3] == 3


def test_parse_case_insensitive_and_rationals():
    text = "section graph\nnodes 2\nedges 1\ne 1 2 3/2\nend\nsection terminals\nroot 2\ntp 1 0.25\nend\neof\n"
    inst = parse_instance(text)
    assert inst.edges[0].weight == Fraction(3, 2)
    assert inst.penalties[1] == Fraction(1, 4)


@pytest.mark.parametrize("text, fragment", [
    ("garbage\n", "line 1"),
    ("SECTION Graph\nNodes 2\nEdges 2\nE 1 2 1\nEND\nSECTION Terminals\nRoot 1\nEND\n", "edges"),
    ("SECTION Graph\nNodes 2\nEdges 1\nE 1 3 1\nEND\nSECTION Terminals\nRoot 1\nEND\n", "range"),
    ("SECTION Graph\nNodes 2\nEdges 1\nE 1 2 -1\nEND\nSECTION Terminals\nRoot 1\nEND\n", "negative"),
    ("SECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\nEND\nSECTION Terminals\nRoot 1\nTP 1 4\nEND\n", "root"),
    ("SECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\n", "end"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_instance(text)
    assert fragment in str(err.value).lower()


def test_arbitrary_first_line_is_not_a_header():
    with pytest.raises(ParseError):
        parse_instance("hello world\n" + STAR3.split("\n", 1)[1])


@pytest.mark.parametrize("kwargs, fragment", [
    (dict(n=2, edges=[], root=1, penalties={}), "disconnected"),
    (dict(n=2, edges=[(1, 1, 1), (1, 2, 1)], root=1, penalties={}), "self-loop"),
    (dict(n=2, edges=[(1, 2, 1), (2, 1, 4)], root=1, penalties={}), "duplicate"),
    (dict(n=2, edges=[(1, 2, 1)], root=1, penalties={2: -1}), "negative"),
    (dict(n=2, edges=[(1, 2, 1)], root=3, penalties={}), "root"),
])
def test_validation(kwargs, fragment):
    with pytest.raises(InstanceError, match=fragment):
        make_instance(**kwargs)


def test_root_penalty_must_be_infinite():
    with pytest.raises(InstanceError):
        PcstInstance(2, (Edge(1, 2, Fraction(1)),), 1, {1: Fraction(0), 2: Fraction(1)})


def test_infinite_has_no_arithmetic():
    assert is_infinite(INFINITE)
    with pytest.raises(TypeError):
        INFINITE + 1
    with pytest.raises(TypeError):
        INFINITE < 1


def test_rationals():
    assert to_rational(1.252) == Fraction(313, 250)
    assert to_rational("3/4") == Fraction(3, 4)
    assert format_rational(Fraction(6)) == "6/1"
    with pytest.raises(ValueError):
        to_rational("x")


@given(small_instances())
@settings(max_examples=60, deadline=None)
def test_round_trip(inst):
    text = serialize_instance(inst)
    back = parse_instance(text)
    assert back == inst and back.penalties == inst.penalties
    assert serialize_instance(back) == text
    assert back.fingerprint() == inst.fingerprint()


def test_zero_edges_refuse_serialization():
    inst = make_instance(3, [(1, 2, 1), (2, 3, 1)], 1, {2: 1, 3: 1})
    aug = augment_with_root_edges(inst, [3])
    assert aug.edges[-1] == Edge(1, 3, Fraction(0), zero_root_edge=True)
    with pytest.raises(InstanceError):
        serialize_instance(aug)
    with pytest.raises(InstanceError):
        augment_with_root_edges(inst, [1])


def test_gen_star_shape():
    inst = gen_star(3, Fraction(3, 5))
    assert inst.vertex_count == 4 and inst.root == 1
    assert inst.penalties[2] == 0 and inst.penalties[3] == 3 and inst.penalties[4] == 3
    assert all(e.weight == 1 for e in inst.edges)
    assert gen_star(2, Fraction(3, 2)).penalties[3] == 4
    assert gen_star(5, Fraction(3, 10)).penalties[6] == Fraction(5, 2)
    assert star_beta(Fraction(1, 10)) == Fraction(11, 5)
    with pytest.raises(InstanceError):
        gen_star(3, Fraction(1, 2))  # needs 1/(n-1) < epsilon


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_star_optimum_is_n(n):
    eps = Fraction(1, n - 1) + Fraction(1, 10)
    assert oracle_pcst(gen_star(n, eps)).total_cost == n


def test_gen_random_is_seeded_and_valid():
    a = gen_random(7, Fraction(2, 5), 10, 10, seed=11)
    b = gen_random(7, Fraction(2, 5), 10, 10, seed=11)
    assert serialize_instance(a) == serialize_instance(b)
    assert all(0 <= e.weight <= 10 for e in a.edges)
    corpus = random_corpus(30, seed=3, max_n=6)
    assert [c.fingerprint() for c in corpus] == [c.fingerprint() for c in random_corpus(30, seed=3, max_n=6)]
    assert all(1 <= c.vertex_count <= 6 for c in corpus)


def test_transforms():
    inst = make_instance(3, [(1, 2, 1), (2, 3, 2)], 1, {2: 2, 3: 5})
    s = scale_penalties(inst, Fraction(5, 4))
    assert s.penalties[3] == 4 and s.penalties[1] is INFINITE
    z = zero_penalties(inst, [3, 1])
    assert z.penalties[3] == 0 and z.penalties[1] is INFINITE
    r = reroot(inst, 3)
    assert r.root == 3 and r.penalties[1] == 0 and r.penalties[3] is INFINITE
    assert inst.graph_key() == s.graph_key() != r.graph_key()


def test_evaluate_cost_and_violations():
    inst = make_instance(3, [(1, 2, 1), (2, 3, 2)], 1, {2: 2, 3: 5})
    sol = oracle_pcst(inst)
    assert sol.total_cost == 3 and solution_violations(inst, sol) == []
    only_root = evaluate_cost(inst, Tree(frozenset(), frozenset({1})))
    assert only_root.total_cost == 7
    with pytest.raises(InstanceError):
        evaluate_cost(inst, Tree(frozenset(), frozenset({2})))
