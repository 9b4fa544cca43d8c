"""Time operator mapping, reconstruction and full kernel families against N.

    python scripts/kernel_scaling.py --dims 11,21,41,81 --family-max 21

The round-trip column degrades as the largest weight |K^-s| grows; for
large N the smallest overlaps sink below roundoff and fractional orders
are refused.
"""

import argparse
import time

import numpy as np

from dphase.errors import BranchError
from dphase.kernel import kernel_family, map_operator, reconstruct, weight_range
from dphase.schwinger import make_space


def timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", default="11,21,41,81,161")
    ap.add_argument("--family-max", type=int, default=21, help="largest N for O(N^4) kernel families")
    ap.add_argument("--s", type=float, default=0.5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'N':>5} {'map [ms]':>9} {'recon [ms]':>10} {'family [ms]':>11} {'roundtrip':>10} {'max|K^-s|':>10}")
    for n in (int(d) for d in args.dims.split(",")):
        ctx = make_space(n)
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        op = (g + g.conj().T) / 2
        try:
            t_map, grid = timed(lambda: map_operator(ctx, op, -args.s))
        except BranchError as exc:
            # far-corner overlaps fall below roundoff and lose their sign
            print(f"{n:>5} stopped: {exc}")
            continue
        t_rec, back = timed(lambda: reconstruct(ctx, grid, args.s))
        fam = "-"
        if n <= args.family_max:
            t0 = time.perf_counter()
            kernel_family(ctx, args.s).kernels
            fam = f"{1e3 * (time.perf_counter() - t0):.1f}"
        err = np.abs(back - op).max()
        print(f"{n:>5} {1e3 * t_map:9.2f} {1e3 * t_rec:10.2f} {fam:>11} {err:10.1e} {weight_range(ctx, args.s)[1]:10.2e}")


if __name__ == "__main__":
    main()
