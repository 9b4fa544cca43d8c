"""Print how fast the vacuum overlap approaches its Gaussian limit.

    python scripts/convergence_table.py --dims 5,11,21,41,81,161 --window 2

Shows the extended-precision error next to the double-precision one, which
stops improving once it reaches roundoff.
"""

import argparse

from dphase.continuum import ScalingFrame, convergence_sweep, vacuum_commutator, vacuum_husimi_error
from dphase.schwinger import make_space


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", default="5,11,21,41,81,161")
    ap.add_argument("--window", type=float, default=2.0)
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args()
    dims = [int(d) for d in args.dims.split(",")]

    fine = convergence_sweep(dims, args.window, check=False, max_workers=args.jobs)
    coarse = convergence_sweep(dims, args.window, extended=False, check=False, max_workers=args.jobs)
    print(f"{'N':>5} {'eps':>8} {'overlap err':>12} {'(double)':>10} {'husimi err':>12} {'<[Q,P]> - i':>12}")
    for a, b in zip(fine.rows, coarse.rows):
        ctx, frame = make_space(a.N), ScalingFrame(a.N)
        husimi = vacuum_husimi_error(ctx, frame, args.window)
        comm = abs(vacuum_commutator(ctx, frame) - 1j)
        print(f"{a.N:>5} {a.epsilon:8.4f} {a.max_error:12.3e} {b.max_error:10.2e} {husimi:12.3e} {comm:12.3e}")
    print("strictly decreasing:", fine.strictly_decreasing)


if __name__ == "__main__":
    main()
