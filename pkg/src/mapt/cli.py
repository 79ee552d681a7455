"""Command-line interface.

Commands:

    fit       fit a model to a data file, write it as JSON
    density   evaluate a fitted model's predictive density on a grid
    sample    draw exact posterior samples from a fitted model
    tune      grid-search the state count and decay rate
    simulate  draw data from a built-in scenario
    bench     run the L1 simulation benchmark

Data files hold one number per line; blank lines and lines starting with
'#' are ignored.  All numeric CSV output uses 17 significant digits, so
values survive a text round trip exactly.  Every command is deterministic
given its flags (and seed); MAPT_THREADS caps worker processes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .benchmark import (
    DEFAULT_SIZES,
    METHODS,
    default_workers,
    run_benchmark,
)
from .engine import DensityEstimate, fit
from .partition import Domain
from .priors import (
    DEFAULT_BETA,
    DEFAULT_DEPTH,
    DEFAULT_I,
    HyperParams,
    config_from_dict,
)
from .scenarios import SCENARIOS, scenario_sample
from .tuning import empirical_bayes

__all__ = ["main"]


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def read_data_file(path) -> np.ndarray:
    """Parse a one-number-per-line data file (#-comments and blanks skipped)."""
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: not a number: {line!r}"
                ) from None
    return np.array(values)


def _parse_domain(text: str) -> Domain:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--domain expects 'lo,hi', got {text!r}")
    return Domain(float(parts[0]), float(parts[1])).validate()


def _parse_int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p]


def _hyperparams_from_args(args) -> tuple[HyperParams, int | None]:
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
    if args.domain is not None:
        dom = _parse_domain(args.domain)
        cfg["domain"] = {"lo": dom.lo, "hi": dom.hi}
    if args.depth is not None:
        cfg["depth"] = args.depth
    if getattr(args, "n_states", None) is not None:
        cfg["n_states"] = args.n_states
    if getattr(args, "beta", None) is not None:
        cfg["beta"] = args.beta
    seed = cfg.get("seed")
    if getattr(args, "seed", None) is not None:
        seed = args.seed
    if "domain" not in cfg:
        raise ValueError("a domain is required: pass --domain lo,hi or a config file")
    return config_from_dict(cfg), None if seed is None else int(seed)


def cmd_fit(args) -> int:
    hp, _ = _hyperparams_from_args(args)
    data = read_data_file(args.data)
    tuned = None
    if args.tune:
        eb = empirical_bayes(
            data,
            hp.domain,
            max_depth=hp.max_depth,
            log10_lo=hp.log10_lo,
            log10_hi=hp.log10_hi,
            n_quad=hp.n_quad,
            base=hp.base,
            workers=default_workers(),
        )
        tuned = (eb.n_states_hat, eb.beta_hat)
        hp = eb.hyperparams(
            hp.domain,
            max_depth=hp.max_depth,
            log10_lo=hp.log10_lo,
            log10_hi=hp.log10_hi,
            n_quad=hp.n_quad,
            base=hp.base,
            kernel=hp.kernel,
        )
    est = fit(data, hp)
    if args.out:
        doc = est.to_dict()
        if tuned is not None:
            doc["tuned"] = {"n_states": tuned[0], "beta": tuned[1]}
        with open(args.out, "w") as fh:
            json.dump(doc, fh)
    print(f"n {est.tree.n_total}")
    print(f"log_marginal {_fmt(est.log_marginal)}")
    if tuned is not None:
        print(f"n_states_hat {tuned[0]}")
        print(f"beta_hat {_fmt(tuned[1])}")
    if args.out:
        print(f"model {args.out}")
    return 0


def cmd_density(args) -> int:
    est = DensityEstimate.load(args.model)
    dom = est.hp.domain
    if args.points:
        xs = read_data_file(args.points)
    else:
        step = dom.width / args.grid
        xs = dom.lo + step * (np.arange(args.grid) + 0.5)
    dens = est.ppd_many(xs)
    out = sys.stdout
    out.write("x,ppd\n")
    for x, d in zip(xs, dens):
        out.write(f"{_fmt(x)},{_fmt(d)}\n")
    return 0


def cmd_sample(args) -> int:
    est = DensityEstimate.load(args.model)
    draws = est.sample(args.seed, args.draws)
    out = sys.stdout
    out.write("draw,level,index,state,nu,theta\n")
    for d, draw in enumerate(draws):
        for node in sorted(draw.states):
            out.write(
                f"{d},{node.level},{node.index},{draw.states[node]},"
                f"{_fmt(draw.precisions[node])},{_fmt(draw.pacs[node])}\n"
            )
    return 0


def cmd_tune(args) -> int:
    hp, _ = _hyperparams_from_args(args)
    data = read_data_file(args.data)
    eb = empirical_bayes(
        data,
        hp.domain,
        max_depth=hp.max_depth,
        log10_lo=hp.log10_lo,
        log10_hi=hp.log10_hi,
        n_quad=hp.n_quad,
        base=hp.base,
        workers=default_workers(),
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("n_states,beta,log_marginal\n")
            for i, I in enumerate(eb.n_states_grid):
                for j, b in enumerate(eb.beta_grid):
                    fh.write(f"{I},{_fmt(b)},{_fmt(eb.surface[i, j])}\n")
    best = eb.surface[
        eb.n_states_grid.index(eb.n_states_hat),
        eb.beta_grid.index(eb.beta_hat),
    ]
    print(f"n_states_hat {eb.n_states_hat}")
    print(f"beta_hat {_fmt(eb.beta_hat)}")
    print(f"log_marginal {_fmt(best)}")
    if args.out:
        print(f"surface {args.out}")
    return 0


def cmd_simulate(args) -> int:
    if args.scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {args.scenario}; choose from {sorted(SCENARIOS)}")
    xs = scenario_sample(args.scenario, args.n, args.seed)
    out = sys.stdout
    out.write(f"# scenario {args.scenario} n {args.n} seed {args.seed}\n")
    for x in xs:
        out.write(f"{_fmt(x)}\n")
    return 0


def cmd_bench(args) -> int:
    sizes = _parse_int_list(args.sizes) if args.sizes else list(DEFAULT_SIZES)
    scenarios = _parse_int_list(args.scenario) if args.scenario else sorted(SCENARIOS)
    methods = tuple(args.methods.split(",")) if args.methods else METHODS
    result = run_benchmark(
        scenario_ids=scenarios,
        sizes=sizes,
        replicates=args.replicates,
        methods=methods,
        seed=args.seed,
        workers=default_workers(),
    )
    os.makedirs(args.out, exist_ok=True)
    losses_path = os.path.join(args.out, "losses.csv")
    summary_path = os.path.join(args.out, "summary.csv")
    with open(losses_path, "w") as fh:
        fh.write(result.losses_csv())
    with open(summary_path, "w") as fh:
        fh.write(result.summary_csv())
    print(f"losses {losses_path}")
    print(f"summary {summary_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mapt",
        description="Adaptive multi-resolution density estimation with exact posterior inference.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_model_opts(sp, with_states=True):
        sp.add_argument("--config", help="JSON config file (flags override it)")
        sp.add_argument("--domain", help="sample space as 'lo,hi'")
        sp.add_argument("--depth", type=int, help=f"partition depth (default {DEFAULT_DEPTH})")
        if with_states:
            sp.add_argument(
                "--n-states", type=int, dest="n_states",
                help=f"number of shrinkage states (default {DEFAULT_I})",
            )
            sp.add_argument(
                "--beta", type=float, help=f"transition decay rate (default {DEFAULT_BETA})"
            )

    sp = sub.add_parser("fit", help="fit a model to a data file")
    sp.add_argument("--data", required=True, help="input data file, one number per line")
    add_model_opts(sp)
    sp.add_argument("--tune", action="store_true", help="select states/beta by marginal likelihood")
    sp.add_argument("--seed", type=int, help="seed recorded for downstream sampling")
    sp.add_argument("--out", help="write the fitted model JSON here")
    sp.set_defaults(fn=cmd_fit)

    sp = sub.add_parser("density", help="evaluate a fitted model's predictive density")
    sp.add_argument("--model", required=True, help="model JSON produced by fit")
    sp.add_argument("--grid", type=int, default=4096, help="number of equal cells (midpoints)")
    sp.add_argument("--points", help="evaluate at the points in this file instead")
    sp.set_defaults(fn=cmd_density)

    sp = sub.add_parser("sample", help="draw exact posterior samples from a fitted model")
    sp.add_argument("--model", required=True, help="model JSON produced by fit")
    sp.add_argument("--draws", type=int, default=1, help="number of joint draws")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("tune", help="grid-search the state count and decay rate")
    sp.add_argument("--data", required=True)
    add_model_opts(sp, with_states=False)
    sp.add_argument("--seed", type=int, help="unused; accepted for config compatibility")
    sp.add_argument("--out", help="write the full log-marginal surface CSV here")
    sp.set_defaults(fn=cmd_tune)

    sp = sub.add_parser("simulate", help="draw data from a built-in scenario")
    sp.add_argument("--scenario", type=int, required=True, help="scenario id (1-5)")
    sp.add_argument("--n", type=int, required=True, help="sample size")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("bench", help="run the L1 simulation benchmark")
    sp.add_argument("--scenario", help="comma-separated scenario ids (default: all)")
    sp.add_argument("--sizes", help=f"comma-separated sample sizes (default {','.join(map(str, DEFAULT_SIZES))})")
    sp.add_argument("--replicates", type=int, default=50)
    sp.add_argument("--methods", help=f"comma-separated methods (default {','.join(METHODS)})")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="output directory for losses.csv and summary.csv")
    sp.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
