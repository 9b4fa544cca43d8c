"""Command-line front end.

Subcommands::

    dphase gen KIND --n N [--labels MU,NU] [--seed S] [--projector]
    dphase map FILE --s S
    dphase reconstruct FILE [--s S] [--n N]
    dphase verify --n N [--s S ...] [--format text|json]
    dphase converge --n N1,N2,... [--window W] [--p0 P] [--double]

``--s`` takes ``re,im``, a plain real, or one of the aliases ``wigner``,
``husimi``, ``p``.  Write negative values as ``--s=-1`` so argparse does
not read them as flags.  Every command writes to ``--out`` or stdout.

Exit codes: 0 success, 1 check failure, 2 usage or parse error,
3 semantic validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coherent import coherent_state, vacuum
from .config import load_tolerances
from .continuum import convergence_sweep
from .errors import ConvergenceError, DomainError, DphaseError, ValidationError
from .formats import FormatError, dump_grid, dump_ket, dump_operator, load_grid, load_state_file
from .kernel import check_order, map_operator, reconstruct, validate_density
from .schwinger import make_space
from .verify import DEFAULT_ORDERS, run_verification

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
VERIFY_MAX_N = 21

ALIASES = {"wigner": 0.0, "husimi": -1.0, "p": 1.0}
GEN_KINDS = ("basis-u", "basis-v", "coherent", "vacuum", "random-density", "maxmixed")
LABELLED_KINDS = ("basis-u", "basis-v", "coherent")


class UsageError(DphaseError):
    """Bad command-line input detected after argparse."""


def parse_order(text: str) -> tuple[complex, str]:
    """``"re,im"``, a real number, or an alias; returns ``(s, label)``."""
    key = text.strip().lower()
    if key in ALIASES:
        return complex(ALIASES[key]), key
    parts = key.split(",")
    try:
        if len(parts) == 1:
            s = complex(float(parts[0]), 0.0)
        elif len(parts) == 2:
            s = complex(float(parts[0]), float(parts[1]))
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"cannot parse order parameter {text!r}; use re,im, a real, or wigner/husimi/p")
    try:
        return check_order(s), ""
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def parse_labels(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        if len(parts) != 2:
            raise ValueError
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"labels must be two integers 'mu,nu', got {text!r}")


def parse_basis_label(text: str) -> int:
    """A basis label: ``"g"``, or ``"g,_"`` where only the first entry is used."""
    first = text.split(",")[0]
    try:
        return int(first)
    except ValueError:
        raise UsageError(f"basis label must be an integer, got {text!r}")


def parse_dims(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"dimension list must be comma-separated integers, got {text!r}")


def _space(n: int):
    try:
        return make_space(n)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


# --- commands --------------------------------------------------------------


def cmd_gen(args) -> int:
    ctx = _space(args.n)
    kind = args.kind
    if kind in LABELLED_KINDS and args.labels is None:
        raise UsageError(f"gen {kind} needs --labels")
    if kind == "random-density" and args.seed is None:
        raise UsageError("gen random-density needs --seed")

    if kind == "maxmixed":
        _emit(dump_operator(np.eye(ctx.N) / ctx.N, "maxmixed"), args.out)
        return EXIT_OK
    if kind == "random-density":
        rng = np.random.default_rng(args.seed)
        g = rng.normal(size=(ctx.N, ctx.N)) + 1j * rng.normal(size=(ctx.N, ctx.N))
        rho = g.conj().T @ g
        rho = (rho + rho.conj().T) / 2
        rho /= np.trace(rho).real
        _emit(dump_operator(rho, f"random-density seed={args.seed}"), args.out)
        return EXIT_OK

    if kind == "vacuum":
        ket, name = vacuum(ctx), "vacuum"
    elif kind == "coherent":
        mu, nu = parse_labels(args.labels)
        ket, name = coherent_state(ctx, mu, nu), f"coherent {mu},{nu}"
    else:
        gamma = parse_basis_label(args.labels)
        basis = ctx.u_basis if kind == "basis-u" else ctx.v_basis
        ket, name = basis[:, ctx.index(gamma)], f"{kind} {gamma}"
    if args.projector:
        _emit(dump_operator(np.outer(ket, ket.conj()), name), args.out)
    else:
        _emit(dump_ket(ket, name), args.out)
    return EXIT_OK


def _load_operator(path: str) -> np.ndarray:
    kind, data, _ = load_state_file(_read(path))
    if kind == "ket":
        return np.outer(data, data.conj())
    return data


def cmd_map(args) -> int:
    s, label = parse_order(args.s)
    op = _load_operator(args.input)
    ctx = _space(op.shape[0])
    if label:
        op = validate_density(ctx, op)
    grid = map_operator(ctx, op, s, label)
    _emit(dump_grid(grid), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    grid = load_grid(_read(args.input))
    if args.n is not None and args.n != grid.N:
        raise ValidationError(f"grid has N={grid.N}, but --n {args.n} was given")
    ctx = _space(grid.N)
    if args.s is None:
        s = check_order(-grid.s)
    else:
        s, _ = parse_order(args.s)
    op = reconstruct(ctx, grid, s)
    back = map_operator(ctx, op, -s).values
    err = float(np.abs(back - grid.values).max())
    print(f"round-trip max error: {err:.3e}", file=sys.stderr)
    _emit(dump_operator(op, f"reconstructed s={s.real!r},{s.imag!r}"), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.n > VERIFY_MAX_N:
        raise UsageError(f"verify runs full O(N^4) suites; N must be <= {VERIFY_MAX_N}")
    ctx = _space(args.n)
    orders = [parse_order(t)[0] for t in args.s] if args.s else list(DEFAULT_ORDERS)
    tol = load_tolerances(args.config)
    report = run_verification(ctx, orders, tolerances=tol, seed=args.seed)
    _emit(report.to_json() if args.format == "json" else report.to_text(), args.out)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_converge(args) -> int:
    dims = parse_dims(args.n)
    for n in dims:
        _space(n)
    try:
        report = convergence_sweep(
            dims, args.window, p0=args.p0, extended=not args.double, check=False, max_workers=args.jobs
        )
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    _emit(report.to_csv(), args.out)
    if len(report.rows) > 1 and not report.monotone:
        print("error does not decrease with N", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dphase", description="Discrete s-ordered phase-space toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--config", help="JSON tolerance overrides (default: $DPHASE_CONFIG)")

    p = sub.add_parser("gen", help="generate a state or density operator")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--labels", help="'mu,nu' for coherent states, 'gamma' for basis states")
    p.add_argument("--seed", type=int)
    p.add_argument("--projector", action="store_true", help="write |psi><psi| instead of the ket")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("map", help="map an operator or ket file to a phase-space grid")
    p.add_argument("input", help="operator or ket JSON file ('-' for stdin)")
    p.add_argument("--s", required=True, help="order parameter: re,im | real | wigner | husimi | p")
    common(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("reconstruct", help="rebuild an operator from a grid file")
    p.add_argument("input", help="grid CSV file ('-' for stdin)")
    p.add_argument("--s", help="kernel order (default: minus the grid's order)")
    p.add_argument("--n", type=int, help="expected dimension")
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", action="append", help="order parameter to check (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("converge", help="overlap-to-Gaussian convergence table (CSV)")
    p.add_argument("--n", required=True, help="ascending odd dimensions, e.g. 11,21,41")
    p.add_argument("--window", type=float, default=2.0)
    p.add_argument("--p0", type=float, default=1.0)
    p.add_argument("--double", action="store_true", help="double precision only (saturates near 1e-16)")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command != "verify":
            load_tolerances(args.config)
        return args.func(args)
    except (UsageError, FormatError, DomainError) as exc:
        print(f"dphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"dphase: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"dphase: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
