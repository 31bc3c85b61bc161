"""Command-line interface.

Subcommands:

* ``project`` -- project one matrix file onto an l_inf,1 ball;
* ``bench``   -- run a reproducible benchmark sweep and write a CSV;
* ``mtl``     -- solve a synthetic multi-task LASSO instance.

Exit codes: 0 on success, 2 on invalid arguments or unreadable inputs,
3 when a solver fails to converge.
"""

import argparse
import sys

import numpy as np

from . import matio
from .api import METHODS, get_projector, project
from .bench import (
    BenchConfig,
    DISTRIBUTIONS,
    config_fields,
    gen_mtl_problem,
    metrics,
    run_bench,
    summarize,
)
from .mtl import MtlProblem, PgdOptions, pgd_solve
from .projection import linf1_norm

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="linf1ball",
        description="Projection onto the l_inf,1-norm ball and friends.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project a matrix file onto the ball")
    p.add_argument("--input", required=True, help="input matrix file")
    radius = p.add_mutually_exclusive_group(required=True)
    radius.add_argument("--tau", type=float, help="absolute ball radius")
    radius.add_argument("--alpha", type=float,
                        help="radius as a fraction of the input norm, in (0,1)")
    p.add_argument("--method", choices=METHODS, default="newton")
    p.add_argument("--no-pruning", action="store_true",
                   help="disable row pruning")
    p.add_argument("--no-initial-point", action="store_true",
                   help="start the root search at zero")
    p.add_argument("--output", required=True, help="output matrix file")
    p.add_argument("--format", choices=matio.FORMATS, default="csv",
                   help="matrix file format (default csv)")
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)

    b = sub.add_parser("bench", help="run a benchmark sweep")
    b.add_argument("--config", help="TOML file with BenchConfig keys")
    b.add_argument("--sizes", help="comma list of MxN sizes, e.g. 2000x100")
    b.add_argument("--alphas", help="comma list of alpha values")
    b.add_argument("--trials", type=int)
    b.add_argument("--methods", help="comma list from newton,grf,srf")
    b.add_argument("--distribution", choices=DISTRIBUTIONS)
    b.add_argument("--scale", type=float,
                   help="row-norm scale for laplacian-rows data")
    b.add_argument("--seed", type=int)
    b.add_argument("--no-pruning", action="store_true")
    b.add_argument("--no-initial-point", action="store_true")
    b.add_argument("--no-timing", action="store_true",
                   help="skip wall-clock measurement (required for --parallel)")
    b.add_argument("--parallel", action="store_true",
                   help="run trials concurrently; rejected while timing")
    b.add_argument("--out", required=True, help="output CSV path")

    m = sub.add_parser("mtl", help="solve a synthetic multi-task LASSO")
    m.add_argument("--m", type=int, required=True, help="number of features")
    m.add_argument("--n", type=int, required=True, help="number of samples")
    m.add_argument("--k", type=int, required=True, help="number of tasks")
    m.add_argument("--alpha", type=float, required=True,
                   help="budget as a fraction of the planted coefficients' norm")
    m.add_argument("--method", choices=METHODS, default="newton")
    m.add_argument("--max-iter", type=int, default=500)
    m.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_project(args):
    B = matio.read_matrix(args.input, args.format)
    if args.tau is not None:
        tau = args.tau
        if tau < 0:
            raise ValueError("--tau must be nonnegative")
    else:
        if not 0 < args.alpha < 1:
            raise ValueError("--alpha must lie in (0, 1)")
        tau = args.alpha * linf1_norm(B)
    method = "bisect" if args.oracle else args.method
    result = project(
        B, tau, method=method,
        tolerance=args.tolerance, max_iter=args.max_iter,
        use_pruning=False if args.no_pruning else None,
        use_initial_point=False if args.no_initial_point else None,
    )
    error, sparsity = metrics(result.X, B, tau)
    print(f"method={result.method} tau={tau:.6g} gamma={result.gamma_star:.12g}")
    print(f"iterations={result.iterations} residual={result.residual:.3e} "
          f"elapsed={result.elapsed:.4f}s")
    print(f"error={error:.3e} sparsity={sparsity:.2f}%")
    matio.write_matrix(args.output, result.X, args.format)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def _parse_sizes(text):
    sizes = []
    for item in text.split(","):
        m, _, n = item.strip().lower().partition("x")
        sizes.append((int(m), int(n)))
    return sizes


def _load_toml(path):
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    unknown = set(data) - set(config_fields())
    if unknown:
        raise ValueError(f"unknown bench config keys: {sorted(unknown)}")
    if "sizes" in data:
        data["sizes"] = [tuple(s) if not isinstance(s, str) else
                         _parse_sizes(s)[0] for s in data["sizes"]]
    if "methods" in data:
        data["methods"] = tuple(data["methods"])
    return data


def _cmd_bench(args):
    kwargs = _load_toml(args.config) if args.config else {}
    if args.sizes:
        kwargs["sizes"] = _parse_sizes(args.sizes)
    if args.alphas:
        kwargs["alphas"] = [float(a) for a in args.alphas.split(",")]
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.methods:
        kwargs["methods"] = tuple(args.methods.split(","))
    if args.distribution:
        kwargs["distribution"] = args.distribution
    if args.scale is not None:
        kwargs["scale"] = args.scale
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.no_pruning:
        kwargs["use_pruning"] = False
    if args.no_initial_point:
        kwargs["use_initial_point"] = False
    if args.no_timing:
        kwargs["timed"] = False
    if args.parallel:
        kwargs["parallel"] = True
    kwargs["output_path"] = args.out

    cfg = BenchConfig(**kwargs)
    records = run_bench(cfg)
    print(f"wrote {len(records)} records to {cfg.output_path}")
    for row in summarize(records):
        line = (f"{row['size']} alpha={row['alpha']:g} {row['method']}: "
                f"err={row['mean_error']:.2e} iters={row['mean_iterations']:.1f} "
                f"time={row['mean_elapsed_s']*1e3:.2f}ms "
                f"sparsity={row['mean_sparsity_pct']:.2f}%")
        if "speedup_vs_grf" in row:
            line += f" speedup-vs-grf={row['speedup_vs_grf']:.2f}x (this machine)"
        print(line)
    if any(not rec.converged for rec in records):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_mtl(args):
    for name in ("m", "n", "k"):
        if getattr(args, name) < 1:
            raise ValueError(f"--{name} must be at least 1")
    if not 0 < args.alpha < 1:
        raise ValueError("--alpha must lie in (0, 1)")
    design, targets, true_coef = gen_mtl_problem(
        args.m, args.n, args.k, args.seed
    )
    tau = args.alpha * linf1_norm(true_coef)
    problem = MtlProblem(design=design, targets=targets, radius=tau)
    result = pgd_solve(
        problem, get_projector(args.method),
        PgdOptions(max_iter=args.max_iter),
    )
    support = np.abs(result.coefficients).max(axis=1) > 0
    true_support = np.abs(true_coef).max(axis=1) > 0
    print(f"method={args.method} tau={tau:.6g} iterations={result.iterations} "
          f"converged={result.converged}")
    print(f"objective={result.objective_trace[-1]:.6e} "
          f"selected-rows={int(support.sum())} "
          f"true-rows-recovered={int((support & true_support).sum())}"
          f"/{int(true_support.sum())}")
    print(f"mean-projection-time={result.projector_seconds.mean()*1e3:.3f}ms")
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "project":
            return _cmd_project(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_mtl(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
