"""Command-line interface: ``lsgbp solve|oracle|verify-types|eval``."""
from __future__ import annotations

import argparse
import os
import sys

from .adapters import initial_solution
from .core import UsageError, format_value, target_value
from .driver import run_local_search
from .io import SolutionFile, parse_instance, read_solution
from .oracle import brute_force_best_flip
from .typepart import verify_target_equivalence

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _add_core(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", help="expected problem tag of the instance file")
    p.add_argument("--instance", required=True)
    init = p.add_mutually_exclusive_group()
    init.add_argument("--init", metavar="FILE", help="solution file with the start partition")
    init.add_argument("--init-strategy", choices=["random", "greedy"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-k", type=int, default=1, dest="k", help="search radius")
    p.add_argument("--output", metavar="FILE")
    p.add_argument("--stats", action="store_true", help="print counters to stderr")
    p.add_argument("--expect-improve", action="store_true",
                   help="exit 1 when no improving flip was found")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsgbp", description="k-flip local search for bin problems")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="iterated improving-flip local search")
    _add_core(solve)
    solve.add_argument("--strategy", choices=["best", "first"], default="best")
    solve.add_argument("--max-iters", type=int, default=1000)
    solve.add_argument("--threads", type=int, default=None)

    oracle = sub.add_parser("oracle", help="one brute-force k-flip step")
    _add_core(oracle)

    vt = sub.add_parser("verify-types", help="check the shipped type partition")
    vt.add_argument("--instance", required=True)
    vt.add_argument("--max-context", type=int, default=None)

    ev = sub.add_parser("eval", help="re-verify a solution file")
    ev.add_argument("--instance", required=True)
    ev.add_argument("--solution", required=True)
    return parser


def _load(args):
    problem = parse_instance(args.instance)
    if getattr(args, "problem", None) and args.problem != problem.tag:
        raise UsageError(f"--problem {args.problem} does not match instance tag {problem.tag}")
    return problem


def _start(args, problem):
    if args.init:
        f = read_solution(args.init).partition
        f.validate(problem.n, problem.b)
        return f
    return initial_solution(problem, args.init_strategy, args.seed)


def _emit(sol: SolutionFile, output: str | None) -> None:
    text = sol.dumps()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads(arg: int | None) -> int:
    if arg is not None:
        n = arg
    else:
        try:
            n = int(os.environ.get("LSGBP_THREADS", "1"))
        except ValueError:
            raise UsageError("LSGBP_THREADS must be an integer") from None
    if n < 1:
        raise UsageError(f"thread count must be >= 1, got {n}")
    return n


def _print_stats(stats: dict) -> None:
    for key in ("deltas_enumerated", "table_entries", "ibe_evals"):
        if key in stats:
            print(f"{key}={stats[key]}", file=sys.stderr)
    print(f"wall_ms={stats.get('wall_time', 0.0) * 1000:.3f}", file=sys.stderr)


def cmd_solve(args) -> int:
    if args.k < 1:
        raise UsageError(f"-k must be >= 1, got {args.k}")
    if args.max_iters < 0:
        raise UsageError(f"--max-iters must be >= 0, got {args.max_iters}")
    problem = _load(args)
    inst = problem.build()
    f0 = _start(args, problem)
    trace = run_local_search(inst, f0, args.k, args.strategy, args.max_iters,
                             threads=_threads(args.threads))
    sol = SolutionFile(
        list(trace.final.assign), trace.final_value,
        {"k": args.k, "seed": None if args.init else args.seed, "strategy": args.strategy,
         "iterations": len(trace.steps), "locally_optimal": trace.locally_optimal},
    )
    _emit(sol, args.output)
    if args.stats:
        totals = {key: sum(s[key] for s in trace.searches)
                  for key in ("deltas_enumerated", "table_entries", "wall_time")}
        totals["ibe_evals"] = trace.total_ibe_evals
        _print_stats(totals)
    if args.expect_improve and not trace.steps:
        return EXIT_FAIL
    return EXIT_OK


def cmd_oracle(args) -> int:
    problem = _load(args)
    inst = problem.build()
    f0 = _start(args, problem)
    res = brute_force_best_flip(inst, f0, args.k)
    final = res.partition if res.improved else f0
    sol = SolutionFile(
        list(final.assign), res.value,
        {"k": args.k, "seed": None if args.init else args.seed, "strategy": "oracle",
         "iterations": int(res.improved)},
    )
    _emit(sol, args.output)
    if args.stats:
        _print_stats(res.stats)
    if args.expect_improve and not res.improved:
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify_types(args) -> int:
    problem = parse_instance(args.instance)
    report = verify_target_equivalence(problem.build(), args.max_context)
    if report.holds:
        print(f"holds checks={report.checks_performed}")
        return EXIT_OK
    i, a, x, y = report.witness
    print(f"violated bin={i} context={list(a)} x={x} y={y} checks={report.checks_performed}")
    return EXIT_FAIL


def cmd_eval(args) -> int:
    problem = parse_instance(args.instance)
    sol = read_solution(args.solution)
    f = sol.partition
    f.validate(problem.n, problem.b)
    actual = target_value(problem.build(), f)
    if sol.value is not None and sol.value != actual:
        print(f"mismatch recorded={format_value(sol.value)} computed={format_value(actual)}",
              file=sys.stderr)
        return EXIT_FAIL
    print(f"value={format_value(actual)}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "oracle": cmd_oracle, "verify-types": cmd_verify_types, "eval": cmd_eval}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"lsgbp: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
