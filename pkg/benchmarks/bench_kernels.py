"""Time the kernels with numba enabled and with the plain-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each mode runs in its own interpreter because ``SLUCAS_DISABLE_NUMBA`` is
read at import time.  Kernels run once before timing, so compilation (or
loading the on-disk cache) is not counted.
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _cases():
    from slucas import kernels
    from slucas.census import spf_for

    spf = spf_for(1 << 14)

    def lucas_batch(n=1_000_003):
        inv4 = pow(4, -1, n)
        for P in range(2000):
            Q = (P * P - 5) * inv4 % n
            if Q:
                kernels.strong_lucas_i64(n, P, Q, 5)

    return [
        ("brute_force_sl_i64 n=5189", lambda: kernels.brute_force_sl_i64(5189, 5)),
        ("strong_lucas_i64 x2000", lucas_batch),
        ("census_range [2^13, 2^14)", lambda: kernels.census_range(1 << 13, 1 << 14, 5, spf)),
        ("count_primes_segmented 2^18", lambda: kernels.count_primes_segmented(1 << 18, 1 << 12)),
    ]


def _measure(repeat):
    out = {}
    for name, fn in _cases():
        fn()
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        out[name] = best
    return out


def _child(disable, repeat):
    env = dict(os.environ, SLUCAS_DISABLE_NUMBA="1" if disable else "0")
    cmd = [sys.executable, __file__, "--child", "--repeat", str(repeat)]
    return json.loads(subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(_measure(args.repeat)))
        return
    fast = _child(False, args.repeat)
    slow = _child(True, 1)
    print(f"{'kernel':30s} {'numba s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name in fast:
        print(f"{name:30s} {fast[name]:10.4f} {slow[name]:10.4f} {slow[name] / fast[name]:7.0f}x")


if __name__ == "__main__":
    main()
