"""Walk a random density matrix through the P -> Wigner -> Husimi chain and back.

    python scripts/hierarchy_demo.py --n 7 --seed 1
"""

import argparse

import numpy as np

from dphase.kernel import antismooth, husimi, pfunction, smooth, wigner
from dphase.schwinger import make_space


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ctx = make_space(args.n)
    rng = np.random.default_rng(args.seed)
    g = rng.normal(size=(ctx.N, ctx.N)) + 1j * rng.normal(size=(ctx.N, ctx.N))
    rho = g.conj().T @ g
    rho /= np.trace(rho).real

    p, w, h = pfunction(ctx, rho), wigner(ctx, rho), husimi(ctx, rho)
    for grid in (p, w, h):
        vals = grid.values.real
        print(f"{grid.label:>7}: min {vals.min():+.4f}  max {vals.max():+.4f}  sum/N {grid.total().real:.12f}")

    steps = [
        ("P -> W (smooth)", smooth(ctx, p), w),
        ("W -> H (smooth)", smooth(ctx, w), h),
        ("H -> W (antismooth)", antismooth(ctx, h), w),
        ("W -> P (antismooth)", antismooth(ctx, w), p),
    ]
    for name, got, want in steps:
        print(f"{name:>20}: max error {np.abs(got.values - want.values).max():.2e}")


if __name__ == "__main__":
    main()
