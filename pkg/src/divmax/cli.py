"""Command-line interface: ``divmax {solve,gen,verify,compare,bench}``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from divmax.core import Instance, SolveReport, make_report
from divmax.errors import DivmaxError
from divmax.greedy import greedy_solve
from divmax.io import dumps_instance, load_instance
from divmax.localsearch import IMPROVE_MODES, SEED_MODES, local_search_solve
from divmax.matroid import UniformMatroid
from divmax.testkit import (
    CONSTRAINT_KINDS,
    OBJECTIVE_KINDS,
    check_lemma1,
    exact_matroid,
    exact_uniform,
    gen_instance,
    greedy_instances,
    lemma_checks_at_optimum,
    matroid_instances,
    random_disjoint_pair,
    ratio_report,
)

BENCH_FIELDS = [
    "instance", "algorithm", "n", "rank", "alpha", "phi", "exact_phi",
    "ratio", "bound", "satisfied", "seconds", "error",
]


def exact_solve(inst: Instance) -> SolveReport:
    if isinstance(inst.constraint, UniformMatroid):
        s, _ = exact_uniform(inst)
    else:
        s, _ = exact_matroid(inst)
    return make_report(inst, "exact", s, iterations=0, bound=1.0)


def run_algorithm(inst: Instance, algorithm: str, args: argparse.Namespace | None = None) -> SolveReport:
    if algorithm == "greedy":
        return greedy_solve(inst)
    if algorithm == "local":
        kw = {}
        if args is not None:
            kw = dict(
                improve=args.improve,
                max_iters=args.max_iters,
                seed_strategy=args.seed_strategy,
                seed=args.seed,
            )
        return local_search_solve(inst, **kw)
    if algorithm == "exact":
        return exact_solve(inst)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def compare_report(inst: Instance, report: SolveReport):
    ex = exact_solve(inst)
    return ratio_report(report, ex.selected, ex.objective_value, report.bound)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    report = run_algorithm(inst, args.algorithm, args)
    if args.compare:
        report.comparison = compare_report(inst, report).to_dict()
    if not args.trace:
        report.trace = []
    _emit(json.dumps(report.to_dict(inst.labels), indent=2) + "\n", args.out)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    algorithm = args.algorithm
    if algorithm is None:
        algorithm = "greedy" if isinstance(inst.constraint, UniformMatroid) else "local"
    report = run_algorithm(inst, algorithm)
    _emit(json.dumps(compare_report(inst, report).to_dict()) + "\n", args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    rng = np.random.default_rng(args.seed)
    lines = []
    for _ in range(args.trials):
        x, y = random_disjoint_pair(rng, inst.n)
        lines.append(check_lemma1(inst.metric, x, y).to_dict())
    local = local_search_solve(inst)
    exact_set, _ = exact_matroid(inst)
    for rep in lemma_checks_at_optimum(inst, local.selected, exact_set):
        lines.append(rep.to_dict())
    _emit("".join(json.dumps(line) + "\n" for line in lines), args.out)
    return 0 if all(line["holds"] for line in lines) else 1


def _generate(args: argparse.Namespace) -> list[tuple[str, Instance]]:
    if args.suite == "greedy":
        return greedy_instances(args.count, args.seed)
    if args.suite == "matroid":
        return matroid_instances(args.count, args.seed)
    return [
        (
            f"inst-{args.seed + i:06d}",
            gen_instance(
                args.n, args.beta, args.objective, args.constraint, args.lam,
                seed=args.seed + i, rank=args.rank,
            ),
        )
        for i in range(args.count)
    ]


def cmd_gen(args: argparse.Namespace) -> int:
    items = _generate(args)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, inst in items:
            (out_dir / f"{name}.json").write_text(dumps_instance(inst))
        return 0
    if len(items) != 1:
        raise DivmaxError("use --out-dir when generating more than one instance")
    _emit(dumps_instance(items[0][1]), args.out)
    return 0


def _bench_file(path: str) -> list[dict[str, Any]]:
    name = Path(path).stem
    try:
        inst = load_instance(path)
    except (DivmaxError, OSError) as exc:
        return [{"instance": name, "algorithm": "-", "error": str(exc)}]
    algorithms = ["greedy", "local"] if isinstance(inst.constraint, UniformMatroid) else ["local"]
    rows = []
    for alg in algorithms:
        row: dict[str, Any] = {
            "instance": name, "algorithm": alg, "n": inst.n,
            "rank": inst.constraint.rank(), "alpha": inst.alpha,
        }
        t0 = time.perf_counter()
        try:
            report = run_algorithm(inst, alg)
            row["phi"] = report.objective_value
            row["bound"] = report.bound
            rr = compare_report(inst, report)
            row.update(exact_phi=rr.exact_value, ratio=rr.ratio, satisfied=rr.satisfied)
        except DivmaxError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        row["seconds"] = round(time.perf_counter() - t0, 6)
        rows.append(row)
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise DivmaxError(f"{directory} is not a directory")
    files = sorted(str(p) for p in directory.glob("*.json"))
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            batches = list(pool.map(_bench_file, files))
    else:
        batches = [_bench_file(f) for f in files]
    rows = sorted((r for b in batches for r in b), key=lambda r: (r["instance"], r["algorithm"]))

    summary = []
    for alg in sorted({r["algorithm"] for r in rows if "ratio" in r}):
        done = [r for r in rows if r["algorithm"] == alg and "ratio" in r]
        summary.append({
            "instance": "SUMMARY",
            "algorithm": alg,
            "ratio": min(r["ratio"] for r in done),
            "satisfied": all(r["satisfied"] for r in done),
        })

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, restval="")
        writer.writeheader()
        writer.writerows(rows + summary)
    finally:
        if args.out:
            fh.close()
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divmax", description="Max-sum diversification solvers and verification tools."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", choices=["greedy", "local", "exact"], default="greedy")
    p.add_argument("--out")
    p.add_argument("--improve", choices=IMPROVE_MODES, default="first")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--seed-strategy", choices=SEED_MODES, default="pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--compare", action="store_true", help="attach the ratio against the exact optimum")
    p.add_argument("--trace", action="store_true", help="include the per-step trace")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate seeded random instances")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--objective", choices=OBJECTIVE_KINDS, default="modular")
    p.add_argument("--constraint", choices=CONSTRAINT_KINDS, default="uniform")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--rank", type=int, default=None, help="p for uniform, total capacity for partition")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--suite", choices=["greedy", "matroid"], default=None,
                   help="emit the acceptance suite instances instead")
    p.add_argument("--out")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run inequality checks on an instance (JSON lines)")
    p.add_argument("--instance", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="ratio of a heuristic against the exact optimum")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", choices=["greedy", "local"], default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="benchmark every instance in a directory (CSV)")
    p.add_argument("--dir", required=True)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DivmaxError as exc:
        print(f"divmax {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"divmax {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
