"""Compare the compiled and pure Python term-map kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time
from fractions import Fraction

from liebialg import scalar_field
from liebialg import _kernels_py
from liebialg.bialgebroid import check_master, verify_transitive
from liebialg.cli import load_instance

try:
    from liebialg import _kernels as _compiled
except ImportError:
    _compiled = None


def random_terms(rng, dim, size):
    out = {}
    for _ in range(size):
        lam = tuple(rng.randint(-2, 2) for _ in range(dim))
        m = tuple(rng.randint(0, 3) for _ in range(dim))
        out[lam + m] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 4))
    return out


def bench_mul(mod, pairs, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        for a, b in pairs:
            mod.mul_terms(a, b)
    return time.perf_counter() - t0


def bench_instances(backend, names, repeat):
    scalar_field.set_backend(backend)
    cases = [load_instance(n)[0] for n in names]
    t0 = time.perf_counter()
    for _ in range(repeat):
        for q in cases:
            # fresh contexts would reuse memo tables; clear them for a fair comparison
            q.ctx._memo.clear()
            verify_transitive(q)
            check_master(q)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    pairs = [(random_terms(rng, 3, 12), random_terms(rng, 3, 12)) for _ in range(200)]
    backends = [("python", _kernels_py)] + ([("cython", _compiled)] if _compiled else [])
    print(f"{'benchmark':<28}{'backend':<10}{'seconds':>10}")
    base = {}
    for name, mod in backends:
        t = bench_mul(mod, pairs, args.repeat)
        base.setdefault("mul", t)
        print(f"{'mul_terms 200x(12x12)':<28}{name:<10}{t:>10.3f}  x{base['mul'] / t:.2f}")
    names = ["sl2_plane", "sl2_plane_b2", "felder_rational", "matched_pair_line", "broken"]
    for name, _ in backends:
        t = bench_instances(name, names, args.repeat)
        base.setdefault("inst", t)
        print(f"{'verify+oracle, 5 instances':<28}{name:<10}{t:>10.3f}  x{base['inst'] / t:.2f}")
    scalar_field.set_backend(None)
    if _compiled is None:
        print("compiled kernel not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
