"""Data generation, metrics and benchmark orchestration.

Reproducibility notes: all randomness flows through numpy's PCG64
generator seeded from the config, with per-trial streams derived through
``SeedSequence`` so records do not depend on loop order or method
selection.  The ball radius is recomputed per trial as ``alpha`` times
that trial's matrix norm.  Wall time is measured with a monotonic clock
around the projector call only, and the orchestration is single-threaded
unless timing is explicitly disabled.
"""

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .api import METHODS, get_projector
from .projection import linf1_norm

__all__ = [
    "BenchConfig",
    "BenchRecord",
    "CSV_HEADER",
    "gen_uniform",
    "gen_laplacian_rows",
    "gen_mtl_problem",
    "metrics",
    "run_bench",
    "write_records_csv",
]

DISTRIBUTIONS = ("uniform", "laplacian-rows")
CSV_HEADER = (
    "size_m,size_n,alpha,method,trial,error,iterations,elapsed_s,sparsity_pct"
)


def gen_uniform(M, N, seed):
    """M x N matrix with entries uniform on [-0.5, 0.5], seeded."""
    if M < 1 or N < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = np.random.default_rng(seed)
    return rng.uniform(-0.5, 0.5, (M, N))


def gen_laplacian_rows(M, N, seed, scale=1.0):
    """Heavy-tailed rows: uniform directions with exponential l1 norms.

    Each row is drawn uniform on [-0.5, 0.5] and rescaled so its l1 norm
    is an Exponential(scale) draw, giving the row-norm profile where most
    rows fall far below the dual radius and pruning removes them early.
    """
    if M < 1 or N < 1:
        raise ValueError("matrix dimensions must be positive")
    if not scale > 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    norms = rng.exponential(scale, M)
    D = rng.uniform(-0.5, 0.5, (M, N))
    row_l1 = np.abs(D).sum(axis=1)
    # a uniform draw has zero l1 norm with probability zero, but guard it
    row_l1[row_l1 == 0] = 1.0
    return D * (norms / row_l1)[:, None]


def gen_mtl_problem(M, n, K, seed, n_active=5, noise=0.01):
    """Synthetic row-sparse regression instance with known support.

    Returns ``(design, targets, true_coef)`` where ``true_coef`` has
    ``n_active`` nonzero rows.
    """
    rng = np.random.default_rng(seed)
    design = rng.standard_normal((n, M)) / np.sqrt(n)
    true_coef = np.zeros((M, K))
    support = rng.choice(M, size=min(n_active, M), replace=False)
    true_coef[support] = rng.uniform(0.5, 1.5, (support.size, K)) * rng.choice(
        [-1.0, 1.0], (support.size, K)
    )
    targets = design @ true_coef + noise * rng.standard_normal((n, K))
    return design, targets, true_coef


def metrics(X, B, tau):
    """Feasibility error and row sparsity of a projection output.

    Error is ``| ||X||_inf,1 - tau |``; sparsity is the percentage of rows
    whose max magnitude is nonzero (pruned rows come out exactly zero).
    """
    X = np.asarray(X, dtype=np.float64)
    error = abs(linf1_norm(X) - tau)
    sparsity = 100.0 * np.count_nonzero(np.abs(X).max(axis=1) > 0) / X.shape[0]
    return error, sparsity


@dataclass
class BenchRecord:
    """One benchmark measurement row."""

    size_m: int
    size_n: int
    alpha: float
    method: str
    trial: int
    error: float
    iterations: int
    elapsed_s: float
    sparsity_pct: float
    converged: bool = True


@dataclass
class BenchConfig:
    """Benchmark sweep definition.

    ``timed=False`` records NaN elapsed times; it is the only mode in
    which ``parallel=True`` is accepted, since concurrent trials would
    contaminate wall-clock measurements.
    """

    sizes: list = field(default_factory=lambda: [(2000, 100)])
    alphas: list = field(default_factory=lambda: [1e-4])
    trials: int = 1
    seed: int = 0
    methods: tuple = ("newton",)
    distribution: str = "uniform"
    scale: float = 1.0
    output_path: str | None = None
    tolerance: float = 1e-12
    max_iter: int = 100
    use_pruning: bool | None = None
    use_initial_point: bool | None = None
    timed: bool = True
    parallel: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.sizes:
            raise ValueError("at least one matrix size is required")
        for alpha in self.alphas:
            if not 0 < alpha < 1:
                raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        for method in self.methods:
            if method not in METHODS + ("bisect",):
                raise ValueError(f"unknown method {method!r}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(
                f"unknown distribution {self.distribution!r}; "
                f"expected one of {DISTRIBUTIONS}"
            )
        if self.parallel and self.timed:
            raise ValueError(
                "parallel trials would corrupt the timing; "
                "disable timing to run in parallel"
            )


def _trial_seed(cfg, size_index, trial):
    ss = np.random.SeedSequence([cfg.seed, size_index, trial])
    return int(ss.generate_state(1)[0])


def _generate(cfg, M, N, seed):
    if cfg.distribution == "uniform":
        return gen_uniform(M, N, seed)
    return gen_laplacian_rows(M, N, seed, cfg.scale)


def _run_trial(cfg, size_index, trial, projectors):
    M, N = cfg.sizes[size_index]
    B = _generate(cfg, M, N, _trial_seed(cfg, size_index, trial))
    norm = linf1_norm(B)
    records = []
    for alpha in cfg.alphas:
        tau = alpha * norm
        if not norm > tau:
            raise RuntimeError(
                f"generated matrix is not outside the ball (alpha={alpha})"
            )
        for method in cfg.methods:
            t0 = time.perf_counter()
            result = projectors[method](B, tau)
            elapsed = time.perf_counter() - t0
            error, sparsity = metrics(result.X, B, tau)
            records.append(BenchRecord(
                size_m=M,
                size_n=N,
                alpha=alpha,
                method=method,
                trial=trial,
                error=error,
                iterations=result.iterations,
                elapsed_s=elapsed if cfg.timed else float("nan"),
                sparsity_pct=sparsity,
                converged=result.converged,
            ))
    return records


def run_bench(cfg):
    """Run the configured sweep and return the records in a stable order.

    One matrix is generated per (size, trial) pair and shared across all
    alphas and methods of that trial, so per-trial comparisons (speedups
    against a baseline, iteration deltas) see identical inputs.
    """
    projectors = {
        method: get_projector(
            method,
            tolerance=cfg.tolerance,
            max_iter=cfg.max_iter,
            use_pruning=cfg.use_pruning,
            use_initial_point=cfg.use_initial_point,
        )
        for method in cfg.methods
    }
    keys = [(s, t) for s in range(len(cfg.sizes)) for t in range(cfg.trials)]
    if cfg.parallel:
        with ThreadPoolExecutor() as pool:
            chunks = list(pool.map(
                lambda key: _run_trial(cfg, key[0], key[1], projectors), keys
            ))
    else:
        chunks = [_run_trial(cfg, s, t, projectors) for s, t in keys]
    records = [rec for chunk in chunks for rec in chunk]
    if cfg.output_path:
        write_records_csv(cfg.output_path, records)
    return records


def write_records_csv(path, records):
    """Write benchmark records with the stable CSV schema."""
    try:
        fh = open(path, "w", newline="", encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot write benchmark CSV to {path}: {exc}") from exc
    cols = CSV_HEADER.split(",")
    with fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for rec in records:
            writer.writerow([getattr(rec, c) for c in cols])


def summarize(records):
    """Group records by (size, alpha, method) and average the metrics.

    Returns a list of dicts including the mean and median elapsed time and
    the speedup against the ``grf`` rows of the same group, when present.
    Speedups are relative to this machine and run only.
    """
    groups = {}
    for rec in records:
        key = (rec.size_m, rec.size_n, rec.alpha, rec.method)
        groups.setdefault(key, []).append(rec)
    grf_time = {}
    for (m, n, alpha, method), recs in groups.items():
        if method == "grf":
            grf_time[(m, n, alpha)] = float(
                np.mean([r.elapsed_s for r in recs])
            )
    rows = []
    for (m, n, alpha, method), recs in sorted(groups.items()):
        mean_t = float(np.mean([r.elapsed_s for r in recs]))
        row = {
            "size": f"{m}x{n}",
            "alpha": alpha,
            "method": method,
            "mean_error": float(np.mean([r.error for r in recs])),
            "mean_iterations": float(np.mean([r.iterations for r in recs])),
            "mean_elapsed_s": mean_t,
            "median_elapsed_s": float(np.median([r.elapsed_s for r in recs])),
            "mean_sparsity_pct": float(np.mean([r.sparsity_pct for r in recs])),
        }
        base = grf_time.get((m, n, alpha))
        if base and method != "grf" and mean_t > 0:
            row["speedup_vs_grf"] = base / mean_t
        rows.append(row)
    return rows


def config_fields():
    """Names of the BenchConfig fields, for TOML parsing."""
    return [f.name for f in fields(BenchConfig)]
