"""Compare the GMP tableau kernel with the pure-Python fallback.

    python benchmarks/bench_kernel.py            # default suite
    python benchmarks/bench_kernel.py --repeat 5

Each case is solved cold (no float warm start) so that both kernels run the
identical pivot sequence; the script checks that they agree exactly.
"""

from __future__ import annotations

import argparse
import statistics
import time

from kwise.extremal import build_full_lp, build_orbit_lp
from kwise.simplex import IMPLEMENTATION, solve_lp

CASES = [
    ("orbit N=200 p=6 k=3", lambda: build_orbit_lp(200, 6, 3)),
    ("orbit N=400 p=4 k=4", lambda: build_orbit_lp(400, 4, 4)),
    ("full N=6 p=4 k=3", lambda: build_full_lp(6, 4, 3)),
    ("full N=7 p=4 k=2", lambda: build_full_lp(7, 4, 2)),
    ("full N=7 p=4 k=4", lambda: build_full_lp(7, 4, 4)),
]


def timed(prob, pure: bool, repeat: int):
    times = []
    sol = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        sol = solve_lp(prob, pure_python=pure)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), sol


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if IMPLEMENTATION != "gmp":
        print("GMP kernel not built; only the fallback is available")
    print(f"{'case':<24}{'pivots':>8}{'python s':>11}{'gmp s':>10}{'speedup':>9}")
    for name, build in CASES:
        prob = build()
        t_py, s_py = timed(prob, True, args.repeat)
        t_fast, s_fast = timed(prob, False, args.repeat)
        assert (s_py.value, s_py.primal, s_py.duals) == (s_fast.value, s_fast.primal, s_fast.duals)
        print(f"{name:<24}{s_py.pivots:>8}{t_py:>11.3f}{t_fast:>10.3f}{t_py / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
