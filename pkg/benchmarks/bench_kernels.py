"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--no-end-to-end]

Each kernel is timed on the inputs the pipeline actually feeds it; outputs of
the two backends are compared before timing. The end-to-end section runs
``perpsys pipeline`` in a subprocess per backend.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from perpsys import geometries as geo, pipeline as pl
from perpsys._kernels import _fallback
from perpsys.projective import AmbientSpace

try:
    from perpsys._kernels import _core
except ImportError:
    _core = None


def workloads():
    space = AmbientSpace(5, 3)
    c = pl.construct(0, space=space)
    rng = np.random.default_rng(0)
    lines = space.line_array()
    g = c.group.generators[1].array.astype(np.int64)
    images = ((lines.astype(np.int64) @ g) % 3).astype(np.uint8)
    small = [rng.integers(0, 3, (6, 6)).astype(np.uint8) for _ in range(200)]
    lr = geo.linear_representation(c.M21)
    adj = lr.collinearity()
    line_pts = np.array(lr.lines, dtype=np.int64)
    bases = np.stack([l.basis.array for l in c.M21])
    grams = np.stack([c.M15.gram.array] * 64 + [c.M0.gram.array] * 64)
    return {
        "rref x200 (6x6)": lambda k: [k.rref(a, 3) for a in small],
        "rank x200 (6x6)": lambda k: [k.rank(a, 3) for a in small],
        "rref_batch (11011 lines)": lambda k: k.rref_batch(images, 3),
        "pairs_opposite (128 forms, 21 lines)": lambda k: k.pairs_opposite(bases, grams, 3),
        "antiflag_counts (729 x 1701)": lambda k: k.antiflag_counts(adj, line_pts),
        "common_neighbours (729)": lambda k: k.common_neighbours(adj),
    }


def same(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def end_to_end(repeat):
    cmd = [sys.executable, "-m", "perpsys", "pipeline", "--format", "json", "--quiet"]
    out = {}
    for name, flag in (("cython", "0"), ("python", "1")):
        env = dict(os.environ, PERPSYS_PURE_PYTHON=flag)
        t = min(timeit.repeat(lambda: subprocess.run(cmd, env=env, check=False),
                              number=1, repeat=repeat))
        out[name] = t
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled core not built; only the fallback can be timed")
    print(f"{'kernel':40s} {'cython ms':>10s} {'python ms':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        tp = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        if _core is None:
            print(f"{name:40s} {'-':>10s} {tp:10.2f} {'-':>8s}")
            continue
        if not same(fn(_core), fn(_fallback)):
            raise SystemExit(f"backends disagree on {name}")
        tc = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:40s} {tc:10.2f} {tp:10.2f} {tp / tc:7.1f}x")
    if not args.no_end_to_end and _core is not None:
        t = end_to_end(max(1, args.repeat // 2))
        print(f"{'perpsys pipeline (subprocess)':40s} {t['cython'] * 1e3:10.0f} "
              f"{t['python'] * 1e3:10.0f} {t['python'] / t['cython']:7.1f}x")


if __name__ == "__main__":
    main()
