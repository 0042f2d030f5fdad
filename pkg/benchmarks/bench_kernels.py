"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""
import argparse
import json
import random
import sys
import timeit

from galprod import _pykernels
from galprod.arith import primes_upto
from galprod.groups import build_delta_group

try:
    from galprod import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    primes = [p for p in primes_upto(3000) if p > 3]
    delta = build_delta_group(1, 2, 3)
    rng = random.Random(0)
    gen_sets = [[rng.randrange(delta.order) for _ in range(2)] for _ in range(200)]

    def traces(mod):
        return lambda: [mod.legendre_sum(7, 11, p) for p in primes]

    def torsion(mod):
        return lambda: [mod.torsion_counts(7, 11, p) for p in primes]

    def closures(mod):
        args = (delta.table, delta.elem_factors, delta.pos)
        return lambda: [mod.closure(*args, g, delta.id_index) for g in gen_sets]

    return [
        ("legendre_sum, 428 primes < 3000", traces),
        ("torsion_counts, 428 primes < 3000", torsion),
        ("closure, 200 subgroups of Delta_2(F_3)", closures),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the Python timings are shown", file=sys.stderr)
    rows = []
    for name, make in workloads():
        py = min(timeit.repeat(make(_pykernels), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(make(_ckernels), number=1, repeat=args.repeat)) if _ckernels else None
        rows.append({"kernel": name, "python_s": py, "cython_s": cy, "speedup": py / cy if cy else None})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':<42}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for r in rows:
        cy = f"{r['cython_s']:.4f}" if r["cython_s"] else "-"
        sp = f"{r['speedup']:.1f}x" if r["speedup"] else "-"
        print(f"{r['kernel']:<42}{r['python_s']:>12.4f}{cy:>12}{sp:>10}")


if __name__ == "__main__":
    main()
