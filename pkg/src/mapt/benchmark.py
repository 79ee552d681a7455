"""Simulation benchmark: L1 risk of density estimators across scenarios.

Runs replicated fits over a grid of scenarios and sample sizes, scoring
each fit by the L1 distance between the predictive density and the truth
(midpoint Riemann sum on a fine dyadic grid, so grid cells nest inside the
estimators' leaves).  Everything is deterministic given the seed,
regardless of how many worker processes are used.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .engine import fit
from .polya_tree import PTSpec, pt_fit
from .priors import DEFAULT_DEPTH, HyperParams
from .scenarios import DOMAIN, scenario_pdf, scenario_sample
from .tuning import empirical_bayes

__all__ = [
    "METHODS",
    "DEFAULT_SIZES",
    "LossRecord",
    "BenchResult",
    "l1_loss",
    "run_benchmark",
    "default_workers",
]

METHODS = ("markov_apt", "pt")
DEFAULT_SIZES = (125, 250, 500, 750, 1000, 1250)
DEFAULT_GRID_CELLS = 1 << 17


def default_workers() -> int:
    """Worker processes to use: the MAPT_THREADS variable, else CPU count."""
    env = os.environ.get("MAPT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"MAPT_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def l1_loss(density_fn, scenario_id: int, n_cells: int = DEFAULT_GRID_CELLS) -> float:
    """L1 distance between a density and the scenario truth on [0, 1].

    Midpoint Riemann sum over `n_cells` equal cells; `density_fn` must
    accept a vector of points.
    """
    if n_cells < 1:
        raise ValueError(f"need at least one cell, got {n_cells}")
    mids = (np.arange(n_cells) + 0.5) / n_cells
    f_hat = np.asarray(density_fn(mids), dtype=float)
    f_true = scenario_pdf(scenario_id, mids)
    return float(np.mean(np.abs(f_hat - f_true)))


class LossRecord(NamedTuple):
    scenario: int
    n: int
    replicate: int
    method: str
    l1_loss: float


def _bench_job(args) -> list[LossRecord]:
    (sid, n, rep, seed, methods, depth, n_cells, state_grid, beta_grid) = args
    data = scenario_sample(sid, n, seed)
    rows = []
    for method in methods:
        if method == "markov_apt":
            eb = empirical_bayes(
                data, DOMAIN, depth, n_states_grid=state_grid, beta_grid=beta_grid
            )
            est = fit(data, eb.hyperparams(DOMAIN, max_depth=depth))
            loss = l1_loss(est.ppd_many, sid, n_cells)
        elif method == "pt":
            fitted = pt_fit(data, PTSpec(max_depth=depth), DOMAIN)
            loss = l1_loss(fitted.ppd_many, sid, n_cells)
        else:
            raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
        rows.append(LossRecord(sid, n, rep, method, loss))
    return rows


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


@dataclass
class BenchResult:
    """All per-replicate losses plus aggregate risk summaries."""

    records: list[LossRecord]
    scenario_ids: tuple[int, ...]
    sizes: tuple[int, ...]
    replicates: int
    methods: tuple[str, ...]

    def losses(self, scenario: int, n: int, method: str) -> np.ndarray:
        """Per-replicate losses for one cell of the experiment, in replicate order."""
        got = sorted(
            (r.replicate, r.l1_loss)
            for r in self.records
            if r.scenario == scenario and r.n == n and r.method == method
        )
        return np.array([v for _, v in got])

    def risk(self, scenario: int, n: int, method: str) -> float:
        """Mean L1 loss over replicates."""
        return float(self.losses(scenario, n, method).mean())

    def pct_increase(self, scenario: int, n: int, method: str) -> np.ndarray:
        """Per-replicate percent increase of a method's loss over markov_apt."""
        ref = self.losses(scenario, n, "markov_apt")
        other = self.losses(scenario, n, method)
        return (other - ref) / ref * 100.0

    def losses_csv(self) -> str:
        lines = ["scenario,n,replicate,method,l1_loss"]
        for r in self.records:
            lines.append(f"{r.scenario},{r.n},{r.replicate},{r.method},{_fmt(r.l1_loss)}")
        return "\n".join(lines) + "\n"

    def summary_csv(self) -> str:
        lines = ["scenario,n,method,mean_l1_risk,pct_increase_mean,pct_increase_sd"]
        has_ref = "markov_apt" in self.methods
        for sid in self.scenario_ids:
            for n in self.sizes:
                for method in self.methods:
                    risk = self.risk(sid, n, method)
                    if method != "markov_apt" and has_ref:
                        pct = self.pct_increase(sid, n, method)
                        mean = _fmt(pct.mean())
                        sd = _fmt(pct.std(ddof=1)) if pct.size > 1 else ""
                    else:
                        mean = sd = ""
                    lines.append(f"{sid},{n},{method},{_fmt(risk)},{mean},{sd}")
        return "\n".join(lines) + "\n"


def run_benchmark(
    scenario_ids=(1, 2, 3, 4, 5),
    sizes=DEFAULT_SIZES,
    replicates: int = 50,
    methods=METHODS,
    seed: int = 0,
    workers: int | None = None,
    depth: int = DEFAULT_DEPTH,
    n_cells: int = DEFAULT_GRID_CELLS,
    n_states_grid=None,
    beta_grid=None,
) -> BenchResult:
    """Run the full experiment grid.

    Per-replicate data seeds derive from `seed` in a fixed order, so
    results (including CSV bytes) do not depend on `workers`.
    """
    scenario_ids = tuple(int(s) for s in scenario_ids)
    sizes = tuple(int(n) for n in sizes)
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
    if replicates < 1:
        raise ValueError(f"need at least one replicate, got {replicates}")
    rng = np.random.default_rng(seed)
    jobs = []
    for sid in scenario_ids:
        for n in sizes:
            for rep in range(replicates):
                data_seed = int(rng.integers(0, 2**63 - 1))
                jobs.append(
                    (sid, n, rep, data_seed, methods, depth, n_cells, n_states_grid, beta_grid)
                )
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            all_rows = list(pool.map(_bench_job, jobs, chunksize=1))
    else:
        all_rows = [_bench_job(job) for job in jobs]
    records = [row for rows in all_rows for row in rows]
    return BenchResult(records, scenario_ids, sizes, replicates, methods)
