"""Time the compiled kernels against the numpy reference implementation.

Two layers:

  * microbenchmarks of the two hot kernels on synthetic inputs shaped like
    a real fit (many nodes, a handful of states, ten quadrature points)
  * an end-to-end forward sweep in fresh subprocesses, one per backend,
    since the backend is chosen once at import time

Usage:

    python benchmarks/compare_backends.py
    python benchmarks/compare_backends.py --nodes 4096 --states 11 --repeat 7
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from mapt._kernels import _ref

try:
    from mapt._kernels import _core
except ImportError:
    _core = None


def time_fn(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def table_inputs(n_nodes, n_states, n_quad, rng):
    theta0 = rng.uniform(0.2, 0.8, n_nodes)
    nl = rng.integers(0, 50, n_nodes).astype(float)
    nr = rng.integers(0, 50, n_nodes).astype(float)
    sizes = [n_quad] * (n_states - 1) + [0]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.intp)
    nu_flat = 10.0 ** rng.uniform(-1, 4, int(offsets[-1]))
    return theta0, nl, nr, nu_flat, offsets


def combine_inputs(n_nodes, n_states, rng):
    log_rows = rng.normal(size=(n_states, n_states))
    log_rows[np.tril_indices(n_states, -1)] = -np.inf
    payload = rng.normal(size=(n_nodes, n_states))
    return log_rows, payload


def end_to_end(pure_python):
    code = (
        "import json, time\n"
        "import numpy as np\n"
        "from mapt._kernels import BACKEND\n"
        "from mapt.engine import forward\n"
        "from mapt.partition import build_tree\n"
        "from mapt.priors import HyperParams\n"
        "data = np.random.default_rng(0).random(1250)\n"
        "hp = HyperParams.default((0.0, 1.0), max_depth=12, n_states=11, n_quad=10)\n"
        "tree = build_tree(data, hp.domain, 12)\n"
        "forward(tree, hp)\n"
        "best = min(\n"
        "    (lambda t0: (forward(tree, hp), time.perf_counter() - t0)[1])(time.perf_counter())\n"
        "    for _ in range(5)\n"
        ")\n"
        "print(json.dumps({'backend': BACKEND, 'seconds': best}))\n"
    )
    env = dict(os.environ)
    if pure_python:
        env["MAPT_PURE_PYTHON"] = "1"
    else:
        env.pop("MAPT_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--nodes", type=int, default=2048, help="rows per kernel call")
    ap.add_argument("--states", type=int, default=11, help="shrinkage states")
    ap.add_argument("--quad", type=int, default=10, help="quadrature points per state")
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions (best-of)")
    args = ap.parse_args(argv)

    if _core is None:
        print("compiled backend is not built; showing the numpy reference only")
    rng = np.random.default_rng(12345)

    rows = []
    tin = table_inputs(args.nodes, args.states, args.quad, rng)
    ref_t = time_fn(_ref.log_m_table, tin, args.repeat)
    rows.append(("log_m_table", "python", ref_t, 1.0))
    if _core is not None:
        core_t = time_fn(_core.log_m_table, tin, args.repeat)
        rows.append(("log_m_table", "compiled", core_t, ref_t / core_t))

    cin = combine_inputs(args.nodes, args.states, rng)
    ref_t = time_fn(_ref.forward_combine, cin, args.repeat)
    rows.append(("forward_combine", "python", ref_t, 1.0))
    if _core is not None:
        core_t = time_fn(_core.forward_combine, cin, args.repeat)
        rows.append(("forward_combine", "compiled", core_t, ref_t / core_t))

    print(f"{'kernel':<16} {'backend':<9} {'best (ms)':>10} {'speedup':>8}")
    for name, backend, secs, speedup in rows:
        print(f"{name:<16} {backend:<9} {secs * 1e3:>10.3f} {speedup:>7.2f}x")

    print()
    print("end-to-end forward sweep (n=1250, depth 12, 11 states, 10 points):")
    results = [end_to_end(pure_python=True)]
    if _core is not None:
        results.append(end_to_end(pure_python=False))
    base = results[0]["seconds"]
    for r in results:
        print(
            f"  {r['backend']:<9} {r['seconds'] * 1e3:>10.3f} ms"
            f"  ({base / r['seconds']:.2f}x vs python)"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
