"""Command-line frontend: solve, verify, oracle, minalpha, generate."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .certify import (
    ORACLE_MAX_VERTICES,
    FingerprintMismatch,
    OracleCapacityError,
    check_lemmas,
    decompose,
    feasible,
    min_alpha,
    oracle_pcst,
    root_edge_violations,
)
from .instance import (
    InstanceError,
    ParseError,
    PcstInstance,
    Solution,
    format_rational,
    gen_random,
    gen_star,
    parse_instance,
    random_corpus,
    reroot,
    scale_penalties,
    serialize_instance,
    solution_violations,
    to_rational,
)
from .iterate import DEFAULT_BETA, BetaRangeError, IterTrace, ipcst, trace_violations
from .moat import replay_check, run_gw
from .steiner import EXACT_DP, SteinerSolver

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_PARSE = 2
EXIT_BETA = 3
EXIT_INTERNAL = 4


class InvariantError(RuntimeError):
    """A solver result failed its own structural checks."""


@dataclass
class RunReport:
    command: str
    instance: str | None
    parameters: dict
    payload: dict
    wall_time_ms: float | None = None

    def to_json(self, timing: bool = False) -> str:
        d = {"command": self.command, "instance": self.instance, "parameters": self.parameters}
        d.update(self.payload)
        if timing and self.wall_time_ms is not None:
            d["wall_time_ms"] = round(self.wall_time_ms, 3)
        return json.dumps(d, sort_keys=True, indent=2)


def _q(x: Fraction) -> str:
    return format_rational(Fraction(x))


def _h(x: Fraction) -> str:
    """Human form: decimal approximation plus the exact value."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.6g} ({x.numerator}/{x.denominator})"


def _read(path: str) -> PcstInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_instance(text)


def _solution_json(inst: PcstInstance, sol: Solution) -> dict:
    return {
        "edges": sol.edge_pairs(inst),
        "vertices": sorted(sol.tree_vertices),
        "edge_cost": _q(sol.edge_cost),
        "penalty_cost": _q(sol.penalty_cost),
        "total_cost": _q(sol.total_cost),
    }


def _trace_json(trace: IterTrace) -> list:
    out = []
    for i, rec in enumerate(trace.levels):
        out.append({
            "level": i,
            "cost_gw": _q(rec.cost_gw),
            "cost_st": _q(rec.cost_st),
            "cost_it": None if rec.cost_it is None else _q(rec.cost_it),
            "dead": sorted(rec.dead),
            "penalty_of_dead": _q(rec.penalty_of_dead),
            "chosen": rec.chosen,
            "steiner": rec.steiner_kind,
        })
    return out


def _solve_checked(inst, beta, solver, allow):
    sol, trace = ipcst(inst, beta, solver, allow_beta_gt_2=allow)
    problems = solution_violations(inst, sol) + trace_violations(inst, trace)
    if problems:
        raise InvariantError("; ".join(problems))
    return sol, trace


# ---------------------------------------------------------------- commands

def cmd_solve(args) -> RunReport:
    inst = _read(args.file)
    beta = to_rational(args.beta)
    solver = SteinerSolver.from_name(args.steiner)
    if args.all_roots:
        best = None
        for r in inst.vertices:
            cand = reroot(inst, r) if r != inst.root else inst
            sol, trace = _solve_checked(cand, beta, solver, args.allow_beta_gt_2)
            if best is None or sol.total_cost < best[1].total_cost:
                best = (cand, sol, trace)
        inst_used, sol, trace = best
    else:
        inst_used = inst
        sol, trace = _solve_checked(inst, beta, solver, args.allow_beta_gt_2)
    payload = {
        "solver": {"beta": _q(beta), "steiner": solver.kind.value, "p": _q(trace.p),
                   "all_roots": bool(args.all_roots)},
        "root": inst_used.root,
        "solution": _solution_json(inst_used, sol),
        "trace": _trace_json(trace),
    }
    return RunReport("solve", inst.fingerprint(), {"beta": _q(beta), "steiner": solver.kind.value}, payload)


def _print_solve(rep: RunReport) -> None:
    s = rep.payload["solution"]
    print(f"instance  {rep.instance[:16]}")
    print(f"root      {rep.payload['root']}")
    print(f"edges     {' '.join(f'{u}-{v}' for u, v in s['edges']) or '(none)'}")
    for key in ("edge_cost", "penalty_cost", "total_cost"):
        print(f"{key:<13} {_h(Fraction(s[key]))}")
    for lv in rep.payload["trace"]:
        it = "-" if lv["cost_it"] is None else _h(Fraction(lv["cost_it"]))
        print(f"  level {lv['level']}: GW={_h(Fraction(lv['cost_gw']))} ST={_h(Fraction(lv['cost_st']))} "
              f"IT={it} -> {lv['chosen']}  dead={lv['dead']}")


def verify_instance(inst: PcstInstance, beta: Fraction, solver: SteinerSolver = EXACT_DP,
                    corrupt: bool = False) -> list[str]:
    """Full lemma suite on one instance; empty list means every check passed."""
    scaled = scale_penalties(inst, beta)
    run = run_gw(scaled)
    out = replay_check(run, scaled)
    opt = oracle_pcst(inst)
    stats = decompose(inst, run, opt)
    if corrupt:
        stats = stats.corrupted(b2=stats.b2 + 1, r_B=stats.r_B + 1, r_Bz=stats.r_Bz + 1)
    out += check_lemmas(inst, run, opt, stats, beta, solver)
    out += root_edge_violations(inst, beta=beta)
    sol, trace = ipcst(inst, beta, solver, allow_beta_gt_2=True)
    out += solution_violations(inst, sol) + trace_violations(inst, trace)
    return out


def cmd_verify(args) -> RunReport:
    beta = to_rational(args.beta)
    if not 0 < beta:
        raise BetaRangeError(f"beta must be positive, got {beta}")
    if beta > 2 and not args.allow_beta_gt_2:
        raise BetaRangeError(f"beta={beta} exceeds 2; pass --allow-beta-gt-2 to override")
    solver = SteinerSolver.from_name(args.steiner)
    if args.file:
        items = [(args.file, _read(args.file))]
        fp = items[0][1].fingerprint()
    elif args.seed_corpus:
        n, count, seed = _corpus_spec(args.seed_corpus)
        items = [(f"corpus[{i}]", inst) for i, inst in enumerate(random_corpus(count, seed, max_n=n))]
        fp = None
    else:
        raise ParseError("verify needs FILE or --seed-corpus")
    for name, inst in items:
        if inst.vertex_count > ORACLE_MAX_VERTICES:
            raise OracleCapacityError(f"{name}: {inst.vertex_count} vertices exceed the oracle cap")
    violations = []
    for name, inst in items:
        for v in verify_instance(inst, beta, solver, corrupt=args.inject_corruption):
            violations.append(f"{name}: {v}")
    params = {"beta": _q(beta), "steiner": solver.kind.value, "seed_corpus": args.seed_corpus}
    return RunReport("verify", fp, params, {"instances": len(items), "violations": violations})


def _corpus_spec(text: str):
    try:
        n, count, seed = (int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"--seed-corpus expects n,count,seed, got {text!r}") from None
    if n < 1 or count < 0:
        raise ParseError("--seed-corpus needs n >= 1 and count >= 0")
    return n, count, seed


def cmd_oracle(args) -> RunReport:
    inst = _read(args.file)
    sol = oracle_pcst(inst)
    return RunReport("oracle", inst.fingerprint(), {}, {"solution": _solution_json(inst, sol)})


def cmd_minalpha(args) -> RunReport:
    wit = min_alpha(args.p, args.tol)
    slacks = feasible(wit.system())
    payload = {
        "alpha": wit.alpha, "beta": wit.beta,
        "weights": {"gw": wit.w_gw, "st": wit.w_st, "it": wit.w_it},
        "slacks": list(slacks),
    }
    return RunReport("minalpha", None, {"p": args.p, "tol": args.tol}, payload)


def cmd_generate(args) -> str:
    if args.kind == "star":
        inst = gen_star(args.n, to_rational(args.epsilon))
    else:
        inst = gen_random(args.n, to_rational(args.edge_probability), args.max_weight,
                          args.max_penalty, args.seed)
    return serialize_instance(inst)


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ipcst", description="Rooted prize-collecting Steiner tree toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
        p.add_argument("--timing", action="store_true", help="include wall time in JSON output")

    p = sub.add_parser("solve", help="run the iterative algorithm on an instance file")
    p.add_argument("file")
    p.add_argument("--beta", default=str(DEFAULT_BETA), help="penalty scaling factor (default 313/250)")
    p.add_argument("--steiner", choices=("exact", "mst2"), default="exact")
    p.add_argument("--all-roots", action="store_true", help="try every vertex as root and keep the best")
    p.add_argument("--allow-beta-gt-2", action="store_true")
    common(p)

    p = sub.add_parser("verify", help="run the lemma suite on a file or a seeded corpus")
    p.add_argument("file", nargs="?")
    p.add_argument("--beta", default=str(DEFAULT_BETA))
    p.add_argument("--steiner", choices=("exact", "mst2"), default="exact")
    p.add_argument("--seed-corpus", metavar="N,COUNT,SEED")
    p.add_argument("--allow-beta-gt-2", action="store_true")
    p.add_argument("--inject-corruption", action="store_true", help=argparse.SUPPRESS)
    common(p)

    p = sub.add_parser("oracle", help="exact optimum by enumeration (small instances)")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("minalpha", help="smallest feasible alpha for a Steiner factor p")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-4)
    common(p)

    p = sub.add_parser("generate", help="write a star or random instance")
    p.add_argument("kind", choices=("star", "random"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", default="1", help="star: epsilon > 1/(n-1)")
    p.add_argument("--edge-probability", default="0.4")
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("--max-penalty", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "generate":
            text = cmd_generate(args)
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        handler = {"solve": cmd_solve, "verify": cmd_verify, "oracle": cmd_oracle,
                   "minalpha": cmd_minalpha}[args.command]
        rep = handler(args)
    except BetaRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BETA
    except (ParseError, InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvariantError, FingerprintMismatch, OracleCapacityError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    rep.wall_time_ms = (time.perf_counter() - t0) * 1000

    if args.json:
        print(rep.to_json(timing=args.timing))
    elif rep.command == "solve":
        _print_solve(rep)
    elif rep.command == "oracle":
        s = rep.payload["solution"]
        print(f"OPT = {_h(Fraction(s['total_cost']))}  edges {s['edges']}")
    elif rep.command == "minalpha":
        d = rep.payload
        w = d["weights"]
        print(f"alpha = {d['alpha']:.6f}  beta = {d['beta']:.4f}")
        print(f"weights gw={w['gw']:.4f} st={w['st']:.4f} it={w['it']:.4f}")
        print("slacks  " + " ".join(f"{s:+.3e}" for s in d["slacks"]))
    elif rep.command == "verify":
        for v in rep.payload["violations"]:
            print(v)
        print(f"{rep.payload['instances']} instance(s), {len(rep.payload['violations'])} violation(s)")
    if not args.json:
        print(f"[{rep.wall_time_ms:.1f} ms]", file=sys.stderr)
    if rep.command == "verify" and rep.payload["violations"]:
        return EXIT_VIOLATIONS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
