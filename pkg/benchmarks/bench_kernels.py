"""Benchmark: compiled Cython kernels vs the pure-Python/numpy fallback.

Times the two hot kernels on realistic workloads:
  * eval_sys_jac       (float values + Jacobian; drives homotopy tracking)
  * eval_sys_jac_box   (interval enclosures; drives Krawczyk certification)
plus an end-to-end total-degree solve of a 16-line instance.

The fallback is selected by re-running this script with
FANO_FORCE_PYTHON_KERNELS=1; run without arguments to do both and print a
comparison table.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def time_call(fn, min_time=0.5):
    """Best-of mean: repeat until min_time elapsed, return seconds/call."""
    fn()  # warm up
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        elapsed = time.perf_counter() - t0
        if elapsed >= min_time:
            return elapsed / n
        n *= 2


def run_benchmarks():
    from fano._backend import backend_name
    from fano.floatsys import compile_system
    from fano.forge import constrained_form_system, default_double_point, random_form_system
    from fano.intervals import ComplexBox
    from fano.problems import FanoType
    from fano.systems import build_square_system
    from fano.track import solve_total_degree

    results = {"backend": backend_name()}

    # 12-variable quadric system (the stretch problem's shape)
    t = FanoType(1, 7, (2, 2, 2, 2))
    ell, v = default_double_point(t)
    S = compile_system(build_square_system(constrained_form_system(t, ell, v, 0)))
    rng = np.random.default_rng(0)
    z = rng.normal(size=S.nvars) + 1j * rng.normal(size=S.nvars)
    results["eval_sys_jac_12var"] = time_call(lambda: S.value_jac(z))
    box = ComplexBox.around(z, 1e-8)
    results["eval_sys_jac_box_12var"] = time_call(
        lambda: S.value_jac_box(box, want_jac=True)
    )

    # end-to-end: 64-path total-degree solve of a 16-line instance
    t2 = FanoType(1, 4, (2, 2))
    S2 = compile_system(build_square_system(random_form_system(t2, 0)))
    results["solve_16_lines"] = time_call(
        lambda: solve_total_degree(S2, seed=0), min_time=2.0
    )
    return results


def main():
    if len(sys.argv) > 1 and sys.argv[1] == "--one":
        print(json.dumps(run_benchmarks()))
        return

    rows = []
    for force in (False, True):
        env = dict(os.environ)
        env.pop("FANO_FORCE_PYTHON_KERNELS", None)
        if force:
            env["FANO_FORCE_PYTHON_KERNELS"] = "1"
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--one"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        rows.append(json.loads(out.stdout))

    keys = [k for k in rows[0] if k != "backend"]
    name_w = max(len(k) for k in keys) + 2
    print(f"{'kernel':<{name_w}} {rows[0]['backend']:>12} {rows[1]['backend']:>12} {'speedup':>9}")
    for k in keys:
        a, b = rows[0][k], rows[1][k]
        print(f"{k:<{name_w}} {a * 1e3:>10.3f}ms {b * 1e3:>10.3f}ms {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
