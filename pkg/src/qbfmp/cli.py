"""Command-line front end.

Exit codes follow solver conventions: `solve` returns 10/20/0 for
sat/unsat/unknown, `prove-unsat` returns 20 when unsatisfiability was proved
and 0 otherwise, `sat` returns 10/20.  Everything else returns 0 on success.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .bench import load_sweep, run_sweep
from .decimation import UNKNOWN, prove_unsat
from .formula import FormulaError, load_qdimacs, write_qdimacs
from .gen import GeneratorSpec, gen_formula, random_ksat
from .heuristics import make_heuristic, vsids_order
from .kernels import BACKEND, available_backends
from .mp_core import BpParams, FactorGraph, bp_marginals, bp_run
from .qdpll import qdpll_solve
from .sat import sat_solve
from .sp import is_nontrivial, sp_marginals, sp_run


def _bp_params(args) -> BpParams:
    return BpParams(
        t_max=args.tmax,
        epsilon=args.epsilon,
        damping=args.damping,
        seed=args.seed,
    )


def _add_bp_flags(sub) -> None:
    sub.add_argument("--tmax", type=int, default=300, help="max sweeps")
    sub.add_argument("--epsilon", type=float, default=1e-7,
                     help="convergence threshold")
    sub.add_argument("--damping", type=float, default=0.0,
                     help="damping on clause messages")
    sub.add_argument("--seed", type=int, default=0)


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def cmd_generate(args) -> int:
    if args.model == "lk":
        n_exist = args.ne
        fields = dict(l=args.L, k=args.K, n_u=args.nu, n_e=args.ne)
    else:
        n_exist = args.n * (args.t // 2)
        fields = dict(t=args.t, n=args.n, u=args.U, v=args.V)
    if args.M is not None:
        m = args.M
    elif args.alpha is not None:
        m = int(round(args.alpha * n_exist))
    else:
        raise SystemExit("generate: one of --M or --alpha is required")
    spec = GeneratorSpec(model=args.model, m=m, seed=args.seed, **fields)
    spec.validate()
    _emit(write_qdimacs(gen_formula(spec)), args.output)
    return 0


def cmd_solve(args) -> int:
    f = load_qdimacs(args.file)
    result = qdpll_solve(
        f, heuristic=args.heuristic, seed=args.seed,
        bp_params=_bp_params(args), time_limit=args.timeout,
    )
    print(result.status)
    if args.stats == "csv":
        s = result.stats
        print("status,decisions,conflicts,solutions,propagations,wall_time")
        print(f"{result.status},{s.decisions},{s.conflicts},{s.solutions},"
              f"{s.propagations},{s.wall_time:.6f}")
    return {"sat": 10, "unsat": 20, "unknown": 0}[result.status]


def cmd_prove_unsat(args) -> int:
    f = load_qdimacs(args.file)
    attempt = prove_unsat(f, args.method, _bp_params(args))
    print(attempt.outcome)
    if attempt.outcome == UNKNOWN:
        return 0
    lits = [v if attempt.universal_witness[v] else -v
            for v in sorted(attempt.universal_witness)]
    print("v " + " ".join(map(str, lits + [0])))
    return 20


def cmd_sat(args) -> int:
    f = load_qdimacs(args.file)
    result = sat_solve(f.matrix, variables=f.variables(), seed=args.seed)
    if result.status == "sat":
        print("s SATISFIABLE")
        lits = [v if result.model[v] else -v for v in sorted(result.model)]
        print("v " + " ".join(map(str, lits + [0])))
        return 10
    print("s UNSATISFIABLE")
    return 20


def cmd_marginals(args) -> int:
    f = load_qdimacs(args.file)
    graph = FactorGraph(f.matrix, variables=f.variables())
    params = _bp_params(args)
    lines = []
    if args.method == "bp":
        result = bp_run(graph, params)
        marginals = bp_marginals(graph, result.state)
        lines.append("variable,psi_plus,converged")
        for v in sorted(marginals):
            lines.append(f"{v},{marginals[v]!r},{result.converged}")
    else:
        result = sp_run(graph, params, restarts=args.restarts)
        marginals = sp_marginals(graph, result.state)
        nontrivial = is_nontrivial(result.state)
        lines.append("variable,psi_plus,psi_star,psi_minus,converged,nontrivial")
        for v in sorted(marginals):
            plus, star, minus = marginals[v]
            lines.append(
                f"{v},{plus!r},{star!r},{minus!r},{result.converged},{nontrivial}"
            )
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_order(args) -> int:
    f = load_qdimacs(args.file)
    if args.heuristic == "vsids":
        scorer = vsids_order(f)
        entries = []
        for v in f.variables():
            pos, neg = scorer.scores[v], scorer.scores[-v]
            entries.append((-(max(pos, neg)), v, pos >= neg, max(pos, neg)))
        entries.sort()
        order = [(v, sign, score) for _, v, sign, score in entries]
    else:
        order = [
            (e.variable, e.first_sign, e.bias)
            for e in make_heuristic(args.heuristic, f, _bp_params(args))
        ]
    lines = ["rank,variable,first_sign,bias"]
    for rank, (v, sign, bias) in enumerate(order, start=1):
        lines.append(f"{rank},{v},{sign},{bias!r}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_bench(args) -> int:
    spec = load_sweep(args.spec)
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("QBFMP_WORKERS", "1"))

    def progress(finished, total):
        print(f"\r{finished}/{total} cells", end="", file=sys.stderr)

    rows = run_sweep(spec, args.output, workers=workers, progress=progress)
    print(file=sys.stderr)
    print(f"wrote {len(rows)} summary rows to {args.output}/summary.csv")
    return 0


def cmd_kernel_bench(args) -> int:
    """Time the BP sweep kernels (compiled vs pure Python) on random 3-SAT."""
    matrix = random_ksat(args.n, int(round(args.alpha * args.n)), 3, args.seed)
    graph = FactorGraph(matrix)
    print(f"n={args.n} clauses={graph.n_clauses} edges={graph.n_edges} "
          f"sweeps={args.sweeps} (active backend: {BACKEND})")
    results = {}
    for name, backend in available_backends().items():
        rng = np.random.default_rng(args.seed)
        u = rng.uniform(0.01, 0.99, size=graph.n_edges)
        psi = np.full(graph.n_edges, 0.5)
        t0 = time.perf_counter()
        for _ in range(args.sweeps):
            order = rng.permutation(graph.n_edges)
            backend.bp_sweep(
                graph.edge_var, graph.edge_clause, graph.edge_sign,
                graph.var_ptr, graph.var_edge, graph.clause_ptr,
                u, psi, order, 0.0,
            )
        elapsed = time.perf_counter() - t0
        results[name] = (elapsed, u.copy())
        rate = args.sweeps * graph.n_edges / elapsed
        print(f"  {name:>7}: {elapsed:8.3f} s  ({rate:,.0f} edge updates/s)")
    if len(results) == 2:
        gap = float(np.max(np.abs(results["python"][1] - results["c"][1])))
        speedup = results["python"][0] / results["c"][0]
        print(f"  speedup: {speedup:.1f}x   max |u_py - u_c| = {gap:.3g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbfmp",
        description="Message-passing heuristics and solvers for QBF",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random QDIMACS instance")
    p.add_argument("--model", choices=["lk", "model_b"], required=True)
    p.add_argument("--L", type=int, default=1, help="universal literals per clause (lk)")
    p.add_argument("--K", type=int, default=3, help="existential literals per clause (lk)")
    p.add_argument("--nu", type=int, default=0, help="universal variables (lk)")
    p.add_argument("--ne", type=int, default=0, help="existential variables (lk)")
    p.add_argument("--t", type=int, default=4, help="blocks (model_b)")
    p.add_argument("--n", type=int, default=0, help="variables per block (model_b)")
    p.add_argument("--U", type=int, default=1, help="universal literals per clause (model_b)")
    p.add_argument("--V", type=int, default=4, help="existential literals per clause (model_b)")
    p.add_argument("--M", type=int, default=None, help="clause count")
    p.add_argument("--alpha", type=float, default=None,
                   help="clause density; M = round(alpha * existential count)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="decide a QBF with the DPLL solver")
    p.add_argument("--heuristic", choices=["vsids", "bph", "bpdh", "index"],
                   default="vsids")
    p.add_argument("--timeout", type=float, default=None,
                   help="wall-time limit in seconds (status unknown)")
    p.add_argument("--stats", choices=["csv"], default=None)
    _add_bp_flags(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("prove-unsat", help="run a heuristic unsat prover")
    p.add_argument("--method", choices=["bpdu", "bpspdu", "greedy"],
                   default="bpdu")
    _add_bp_flags(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_prove_unsat)

    p = sub.add_parser("sat", help="run the CDCL backend on a DIMACS CNF")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("file")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("marginals", help="dump BP or SP marginals as CSV")
    p.add_argument("--method", choices=["bp", "sp"], default="bp")
    p.add_argument("--restarts", type=int, default=1, help="SP restarts")
    _add_bp_flags(p)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("file")
    p.set_defaults(func=cmd_marginals)

    p = sub.add_parser("order", help="dump a static decision order as CSV")
    p.add_argument("--heuristic", choices=["vsids", "bph", "bpdh", "index"],
                   default="bph")
    _add_bp_flags(p)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("file")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("bench", help="run a sweep described by a TOML spec")
    p.add_argument("--spec", required=True)
    p.add_argument("-o", "--output", required=True, help="results directory")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: QBFMP_WORKERS or 1)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("kernel-bench",
                       help="compare compiled and pure-Python kernels")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--sweeps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kernel_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormulaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
