"""Rooted PCST instances: model, validation, PCSPG-style text I/O and generators."""

from __future__ import annotations

import hashlib
import random
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ._graph import DisjointSet


class InstanceError(ValueError):
    """An instance violates the model's invariants."""


class ParseError(InstanceError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class _Infinite:
    """Penalty of the root. Supports identity tests only; arithmetic raises TypeError."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def is_infinite(x) -> bool:
    return x is INFINITE


def to_rational(value) -> Fraction:
    """Parse an integer, decimal, or ``a/b`` string (or number) into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # go through repr so 1.252 means 313/250, not the binary approximation
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc


def format_rational(x: Fraction) -> str:
    """Exact ``a/b`` form used in JSON output."""
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: Fraction
    zero_root_edge: bool = False  # member of the E0 set added by augment_with_root_edges

    def __iter__(self):
        # lets Edge stand in for a (u, v, weight) tuple in the graph helpers
        return iter((self.u, self.v, self.weight))

    def __getitem__(self, i):
        return (self.u, self.v, self.weight)[i]


@dataclass(frozen=True, eq=True)
class PcstInstance:
    vertex_count: int
    edges: tuple
    root: int
    penalties: Mapping[int, object] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "penalties", dict(self.penalties))
        validate(self)

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def penalty(self, v: int):
        return self.penalties[v]

    def penalty_sum(self, vertices: Iterable[int]) -> Fraction:
        """Sum of finite penalties; raises if the root is included."""
        total = Fraction(0)
        for v in vertices:
            p = self.penalties[v]
            if is_infinite(p):
                raise InstanceError("cannot sum an infinite penalty")
            total += p
        return total

    def edge_cost(self, edge_ids: Iterable[int]) -> Fraction:
        return sum((self.edges[e].weight for e in edge_ids), Fraction(0))

    def with_penalties(self, penalties: Mapping[int, object]) -> "PcstInstance":
        return PcstInstance(self.vertex_count, self.edges, self.root, penalties)

    def graph_key(self) -> str:
        """Digest of the graph and root only; penalties excluded."""
        h = hashlib.sha256()
        h.update(f"{self.vertex_count} {self.root}\n".encode())
        for e in self.edges:
            h.update(f"{e.u} {e.v} {format_rational(e.weight)} {int(e.zero_root_edge)}\n".encode())
        return h.hexdigest()

    def fingerprint(self) -> str:
        return hashlib.sha256(serialize_instance(self, allow_zero_edges=True).encode()).hexdigest()


def validate(inst: PcstInstance) -> None:
    n = inst.vertex_count
    if not isinstance(n, int) or n < 1:
        raise InstanceError(f"vertex_count must be a positive integer, got {n!r}")
    if not 1 <= inst.root <= n:
        raise InstanceError(f"root {inst.root} out of range 1..{n}")
    seen = set()
    for i, e in enumerate(inst.edges):
        if not isinstance(e, Edge):
            raise InstanceError(f"edge {i} is not an Edge")
        if not (1 <= e.u <= n and 1 <= e.v <= n):
            raise InstanceError(f"edge {i} ({e.u}, {e.v}) has an endpoint out of range")
        if e.u == e.v:
            raise InstanceError(f"edge {i} is a self-loop on {e.u}")
        if e.weight < 0:
            raise InstanceError(f"edge {i} has negative weight {e.weight}")
        if e.zero_root_edge:
            if e.weight != 0 or inst.root not in (e.u, e.v):
                raise InstanceError(f"edge {i} is marked E0 but is not a zero-weight root edge")
            continue
        key = frozenset((e.u, e.v))
        if key in seen:
            raise InstanceError(f"duplicate edge {e.u}-{e.v}")
        seen.add(key)
    if set(inst.penalties) != set(range(1, n + 1)):
        raise InstanceError("penalties must be given for exactly the vertices 1..n")
    for v, p in inst.penalties.items():
        if v == inst.root:
            if not is_infinite(p):
                raise InstanceError("root penalty must be INFINITE")
        elif is_infinite(p):
            raise InstanceError(f"non-root vertex {v} has infinite penalty")
        elif not isinstance(p, Fraction):
            raise InstanceError(f"penalty of {v} is not a Fraction")
        elif p < 0:
            raise InstanceError(f"vertex {v} has negative penalty {p}")
    ds = DisjointSet(range(1, n + 1))
    joined = 0
    for e in inst.edges:
        joined += ds.union(e.u, e.v)
    if joined != n - 1:
        raise InstanceError("graph is disconnected")


def make_instance(n: int, edges: Iterable, root: int, penalties: Mapping[int, object]) -> PcstInstance:
    """Convenience constructor: ``edges`` as (u, v, w) triples, penalties as numbers.

    Vertices missing from ``penalties`` get 0; the root always gets INFINITE.
    """
    es = tuple(Edge(int(u), int(v), to_rational(w)) for u, v, w in edges)
    pen = {}
    for v in range(1, n + 1):
        if v == root:
            pen[v] = INFINITE
        else:
            pen[v] = to_rational(penalties.get(v, 0))
    return PcstInstance(n, es, root, pen)


# ---------------------------------------------------------------- text format

_KNOWN_SECTIONS = {"graph", "terminals"}


def parse_instance(text: str) -> PcstInstance:
    """Parse the line-oriented PCSPG-style format.

    Unknown sections (coordinates, presolve, comments, ...) are skipped with a
    warning. Keywords are case-insensitive.
    """
    n = None
    declared_m = None
    edges = []
    root = None
    tp = {}
    section = None
    saw_eof = False
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0].lower()
        if saw_eof:
            raise ParseError("content after EOF", lineno)
        if section is None:
            if key == "section":
                if len(tokens) != 2:
                    raise ParseError("expected 'SECTION <name>'", lineno)
                section = tokens[1].lower()
                if section not in _KNOWN_SECTIONS:
                    warnings.warn(f"skipping unsupported section {tokens[1]!r} (line {lineno})")
            elif key == "eof":
                saw_eof = True
            elif re.match(r"^[0-9a-f]{8}$", key):
                # SteinLib magic header, e.g. "33D32945 STP File, STP Format Version 1.0"
                continue
            else:
                raise ParseError(f"unexpected {tokens[0]!r} outside a section", lineno)
            continue
        if key == "end":
            section = None
            continue
        if section not in _KNOWN_SECTIONS:
            continue
        if section == "graph":
            if key == "nodes":
                n = _int_field(tokens, lineno, "Nodes")
                if n < 1:
                    raise ParseError("Nodes must be positive", lineno)
            elif key == "edges":
                declared_m = _int_field(tokens, lineno, "Edges")
            elif key == "e":
                if len(tokens) != 4:
                    raise ParseError("expected 'E <u> <v> <weight>'", lineno)
                u, v = _vertex(tokens[1], lineno), _vertex(tokens[2], lineno)
                w = _rational(tokens[3], lineno)
                if w < 0:
                    raise ParseError(f"negative weight {tokens[3]}", lineno)
                edges.append((u, v, w, lineno))
            elif key in ("name", "remark", "creator", "problem"):
                continue
            else:
                raise ParseError(f"unknown keyword {tokens[0]!r} in Graph section", lineno)
        else:
            if key == "root":
                if len(tokens) != 2:
                    raise ParseError("expected 'Root <r>'", lineno)
                root = _vertex(tokens[1], lineno)
            elif key == "tp":
                if len(tokens) != 3:
                    raise ParseError("expected 'TP <v> <penalty>'", lineno)
                v = _vertex(tokens[1], lineno)
                p = _rational(tokens[2], lineno)
                if p < 0:
                    raise ParseError(f"negative penalty {tokens[2]}", lineno)
                if v in tp:
                    raise ParseError(f"duplicate TP line for vertex {v}", lineno)
                tp[v] = (p, lineno)
            elif key == "terminals":
                continue
            else:
                raise ParseError(f"unknown keyword {tokens[0]!r} in Terminals section", lineno)
    if section is not None:
        raise ParseError(f"section {section!r} not closed by END", len(lines))
    if n is None:
        raise ParseError("missing 'Nodes' line")
    if root is None:
        raise ParseError("missing 'Root' line")
    if declared_m is not None and declared_m != len(edges):
        raise ParseError(f"Edges declares {declared_m} but {len(edges)} E lines were given")
    if not 1 <= root <= n:
        raise ParseError(f"root {root} out of range 1..{n}")
    for u, v, _, lineno in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge endpoint out of range 1..{n}", lineno)
    for v, (_, lineno) in tp.items():
        if v == root:
            raise ParseError("the root must not carry a TP line", lineno)
        if not 1 <= v <= n:
            raise ParseError(f"TP vertex {v} out of range 1..{n}", lineno)
    pen = {v: INFINITE if v == root else tp.get(v, (Fraction(0), 0))[0] for v in range(1, n + 1)}
    es = tuple(Edge(u, v, w) for u, v, w, _ in edges)
    return PcstInstance(n, es, root, pen)


def _int_field(tokens, lineno, name):
    if len(tokens) != 2:
        raise ParseError(f"expected '{name} <int>'", lineno)
    try:
        return int(tokens[1])
    except ValueError:
        raise ParseError(f"{name} expects an integer, got {tokens[1]!r}", lineno) from None


def _vertex(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"vertex id must be an integer, got {tok!r}", lineno) from None


def _rational(tok, lineno):
    try:
        return to_rational(tok)
    except ValueError:
        raise ParseError(f"not a rational number: {tok!r}", lineno) from None


def serialize_instance(inst: PcstInstance, allow_zero_edges: bool = False) -> str:
    """Canonical text form; ``parse_instance`` inverts it exactly.

    Augmented (E0) edges have no place in the file format, so serializing an
    augmented instance is refused unless ``allow_zero_edges`` is set (used only
    for fingerprints; the output is then not parseable back to the same object).
    """
    if not allow_zero_edges and any(e.zero_root_edge for e in inst.edges):
        raise InstanceError("augmented instances (E0 edges) cannot be serialized")
    out = ["SECTION Graph", f"Nodes {inst.vertex_count}", f"Edges {len(inst.edges)}"]
    for e in inst.edges:
        tag = "E0" if e.zero_root_edge else "E"
        out.append(f"{tag} {e.u} {e.v} {e.weight}")
    out += ["END", "", "SECTION Terminals", f"Root {inst.root}"]
    for v in inst.vertices:
        p = inst.penalties[v]
        if v != inst.root and p != 0:
            out.append(f"TP {v} {p}")
    out += ["END", "", "EOF", ""]
    return "\n".join(out)


# ---------------------------------------------------------------- generators

def gen_star(n: int, epsilon) -> PcstInstance:
    """Star with ``n`` unit-weight leaves around a zero-penalty center.

    Vertex 1 is the root leaf, vertex 2 the center, 3..n+1 the other leaves,
    each with penalty 2(1 + 1/(n-1)). With beta = 2(1 + epsilon) and
    1/(n-1) < epsilon, GW on the scaled instance pays 2n against an optimum of n.
    """
    eps = to_rational(epsilon)
    if not isinstance(n, int) or n < 2:
        raise InstanceError("gen_star needs an integer n >= 2")
    if not Fraction(1, n - 1) < eps:
        raise InstanceError(f"need 1/(n-1) < epsilon, got n={n}, epsilon={eps}")
    leaf_penalty = 2 * (1 + Fraction(1, n - 1))
    edges = [(1, 2, 1)] + [(2, leaf, 1) for leaf in range(3, n + 2)]
    pen = {v: leaf_penalty for v in range(3, n + 2)}
    pen[2] = 0
    return make_instance(n + 1, edges, 1, pen)


def star_beta(epsilon) -> Fraction:
    """The scaling factor 2(1 + epsilon) that pairs with ``gen_star``."""
    return 2 * (1 + to_rational(epsilon))


def gen_random(n: int, edge_probability, max_weight: int, max_penalty: int, seed: int) -> PcstInstance:
    """Connected random instance: random spanning tree plus independent extra edges.

    Integer weights in [0, max_weight], penalties in [0, max_penalty], random root.
    Deterministic for a fixed seed.
    """
    if not isinstance(n, int) or n < 1:
        raise InstanceError("gen_random needs n >= 1")
    prob = to_rational(edge_probability)
    if not 0 <= prob <= 1:
        raise InstanceError("edge_probability must lie in [0, 1]")
    if max_weight < 0 or max_penalty < 0:
        raise InstanceError("max_weight and max_penalty must be nonnegative")
    rng = random.Random(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    pairs = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) not in pairs and rng.random() < prob:
                pairs.add((u, v))
    edges = [(u, v, rng.randint(0, max_weight)) for u, v in sorted(pairs)]
    root = rng.randint(1, n)
    pen = {v: rng.randint(0, max_penalty) for v in range(1, n + 1)}
    return make_instance(n, edges, root, pen)


def random_corpus(count: int, seed: int, max_n: int = 8, max_weight: int = 10, max_penalty: int = 10,
                  min_n: int = 1) -> list[PcstInstance]:
    """Seeded list of small random instances used by the verification suites."""
    rng = random.Random(seed)
    probs = (Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5))
    out = []
    for _ in range(count):
        n = rng.randint(min_n, max_n)
        out.append(gen_random(n, rng.choice(probs), max_weight, max_penalty, rng.randrange(2**32)))
    return out


# ---------------------------------------------------------------- transforms

def scale_penalties(inst: PcstInstance, beta) -> PcstInstance:
    """Divide every finite penalty by ``beta`` exactly."""
    b = to_rational(beta)
    if b <= 0:
        raise InstanceError(f"beta must be positive, got {b}")
    pen = {v: p if is_infinite(p) else p / b for v, p in inst.penalties.items()}
    return inst.with_penalties(pen)


def zero_penalties(inst: PcstInstance, vertices: Iterable[int]) -> PcstInstance:
    vs = set(vertices)
    pen = {v: (Fraction(0) if v in vs and not is_infinite(p) else p) for v, p in inst.penalties.items()}
    return inst.with_penalties(pen)


def augment_with_root_edges(inst: PcstInstance, targets: Iterable[int]) -> PcstInstance:
    """Append one zero-weight, E0-marked edge root-u for each target u (ascending)."""
    ts = sorted(set(targets))
    if inst.root in ts:
        raise InstanceError("the root cannot be a target of a root edge")
    for u in ts:
        if not 1 <= u <= inst.vertex_count:
            raise InstanceError(f"target {u} out of range")
    extra = tuple(Edge(inst.root, u, Fraction(0), zero_root_edge=True) for u in ts)
    return PcstInstance(inst.vertex_count, inst.edges + extra, inst.root, inst.penalties)


def reroot(inst: PcstInstance, root: int, old_root_penalty=0) -> PcstInstance:
    """Same graph with a different root; the former root gets ``old_root_penalty``."""
    pen = dict(inst.penalties)
    pen[inst.root] = to_rational(old_root_penalty)
    pen[root] = INFINITE
    return PcstInstance(inst.vertex_count, inst.edges, root, pen)


# ---------------------------------------------------------------- solutions

@dataclass(frozen=True)
class Tree:
    """A subtree of the instance graph containing the root (no cost fields)."""

    edges: frozenset
    vertices: frozenset

    @classmethod
    def from_edges(cls, inst: PcstInstance, edge_ids: Iterable[int]) -> "Tree":
        ids = frozenset(edge_ids)
        vs = {inst.root}
        for e in ids:
            vs.add(inst.edges[e].u)
            vs.add(inst.edges[e].v)
        return cls(ids, frozenset(vs))


@dataclass(frozen=True)
class Solution:
    tree_edges: frozenset
    tree_vertices: frozenset
    edge_cost: Fraction
    penalty_cost: Fraction
    total_cost: Fraction

    @property
    def tree(self) -> Tree:
        return Tree(self.tree_edges, self.tree_vertices)

    def edge_pairs(self, inst: PcstInstance) -> list[list[int]]:
        return sorted([sorted((inst.edges[e].u, inst.edges[e].v)) for e in self.tree_edges])


def evaluate_cost(inst: PcstInstance, tree: Tree, penalties: Mapping[int, object] | None = None) -> Solution:
    """Price ``tree``: its edge weights plus the penalties of every vertex it misses."""
    if inst.root not in tree.vertices:
        raise InstanceError("tree does not contain the root")
    pen = inst.penalties if penalties is None else penalties
    edge_cost = inst.edge_cost(tree.edges)
    penalty = Fraction(0)
    for v in inst.vertices:
        if v not in tree.vertices:
            p = pen[v]
            if is_infinite(p):
                raise InstanceError(f"tree misses vertex {v} with infinite penalty")
            penalty += p
    return Solution(tree.edges, tree.vertices, edge_cost, penalty, edge_cost + penalty)


def solution_violations(inst: PcstInstance, sol: Solution) -> list[str]:
    """Structural checks of a Solution against its instance."""
    from ._graph import is_tree

    out = []
    if inst.root not in sol.tree_vertices:
        out.append("root not in tree")
    if not is_tree(inst.edges, sol.tree_edges, set(sol.tree_vertices)):
        out.append("tree_edges do not form a tree on tree_vertices")
    if sol.edge_cost != inst.edge_cost(sol.tree_edges):
        out.append("edge_cost mismatch")
    outside = [v for v in inst.vertices if v not in sol.tree_vertices and v != inst.root]
    if sol.penalty_cost != inst.penalty_sum(outside):
        out.append("penalty_cost mismatch")
    if sol.total_cost != sol.edge_cost + sol.penalty_cost:
        out.append("total_cost mismatch")
    return out
