"""Large-N diagnostics: scaled position/momentum and Gaussian convergence.

With ``eps = sqrt(2 pi / N)`` the label ``eta`` corresponds to ``p = p0 eps eta``
and ``xi`` to ``q = q0 eps xi``.  The vacuum overlap ``K(eta, xi)`` then
approaches the Gaussian ``exp(-(p^2 + q^2) / 4)``.

The discrepancy falls roughly like ``exp(-pi N / 2)`` inside a fixed window,
so double precision bottoms out near 1e-16 by N = 41.  The default path
therefore evaluates the overlap with mpmath at a working precision that
grows with N; ``extended=False`` uses the cached double-precision table.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .coherent import overlap_table, vacuum
from .errors import ConvergenceError, DomainError
from .schwinger import SpaceContext, make_space

__all__ = [
    "ScalingFrame",
    "position_momentum",
    "window_labels",
    "gaussian_overlap_error",
    "vacuum_husimi_error",
    "vacuum_commutator",
    "SweepRow",
    "SweepReport",
    "convergence_sweep",
]


@dataclass(frozen=True)
class ScalingFrame:
    """Scale factors for dimension ``N``; ``p0 * q0`` must equal 1."""

    N: int
    p0: float = 1.0
    q0: float = 1.0

    def __post_init__(self):
        if not (self.p0 > 0 and self.q0 > 0):
            raise DomainError(f"scale factors must be positive, got p0={self.p0}, q0={self.q0}")
        if abs(self.p0 * self.q0 - 1.0) > 1e-12:
            raise DomainError(f"p0 * q0 must be 1, got {self.p0 * self.q0}")

    @classmethod
    def from_p0(cls, N: int, p0: float = 1.0) -> "ScalingFrame":
        return cls(N, p0, 1.0 / p0)

    @property
    def epsilon(self) -> float:
        return math.sqrt(2 * math.pi / self.N)


def position_momentum(ctx: SpaceContext, frame: ScalingFrame) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian ``Q`` (diagonal in the u-basis) and ``P`` (diagonal in the v-basis).

    ``exp(i eps Q / q0) = U`` and ``exp(i eps P / p0) = V``.
    """
    eps = frame.epsilon
    Q = np.diag(ctx.labels * eps * frame.q0).astype(complex)
    vb = ctx.v_basis
    P = (vb * (ctx.labels * eps * frame.p0)) @ vb.conj().T
    return Q, P


def window_labels(ctx: SpaceContext, frame: ScalingFrame, window: float):
    """Labels ``eta`` with ``|p0 eps eta| <= window`` and ``xi`` with ``|q0 eps xi| <= window``."""
    if not window > 0:
        raise DomainError(f"window must be positive, got {window}")
    eps = frame.epsilon
    etas = ctx.labels[np.abs(frame.p0 * eps * ctx.labels) <= window]
    xis = ctx.labels[np.abs(frame.q0 * eps * ctx.labels) <= window]
    if etas.size == 0 or xis.size == 0:
        raise DomainError(f"no grid point lies inside window {window} at N={ctx.N}")
    return etas, xis


def _overlap_window_mp(mp, N: int, etas, xis) -> list[list]:
    """Closed-form ``K`` on the window, evaluated in the mpmath context ``mp``."""
    a = mp.mpf(1) / (2 * N)
    q1 = mp.exp(-mp.pi * a)
    q4 = mp.exp(-4 * mp.pi * a)
    norm2 = (
        mp.jtheta(3, 0, q1) * mp.jtheta(3, 0, q4) + mp.jtheta(4, 0, q1) * mp.jtheta(2, 0, q4)
    ) / (2 * mp.sqrt(a))
    # mpmath's jtheta(n, z, q) has z scaled by pi relative to theta(z | tau)
    labels = sorted(set(int(e) for e in etas) | set(int(x) for x in xis))
    t3 = {g: mp.jtheta(3, mp.pi * a * g, q1) for g in labels}
    t4 = {g: mp.jtheta(4, mp.pi * a * g, q1) for g in labels}
    scale = 4 * mp.sqrt(a) * norm2
    parity = -1 if N % 2 else 1
    rows = []
    for e in etas:
        e = int(e)
        se = -1 if e % 2 else 1
        row = []
        for x in xis:
            x = int(x)
            sx = -1 if x % 2 else 1
            total = (
                t3[e] * t3[x]
                + t3[e] * t4[x] * se
                + t4[e] * t3[x] * sx
                + t4[e] * t4[x] * se * sx * parity
            )
            row.append(total / scale)
        rows.append(row)
    return rows


def _working_digits(N: int) -> int:
    # the discrepancy is about 10**(-0.6 N); keep headroom beyond it
    return 30 + N


def _window_error(ctx, frame, window, extended: bool, power: int) -> float:
    etas, xis = window_labels(ctx, frame, window)
    if not extended:
        eps = frame.epsilon
        p = frame.p0 * eps * etas
        q = frame.q0 * eps * xis
        K = overlap_table(ctx).values[np.ix_(etas + ctx.ell, xis + ctx.ell)]
        gauss = np.exp(-power * np.add.outer(p**2, q**2) / 4)
        return float(np.abs(K**power - gauss).max())
    # private context: mpmath's global precision is shared between threads
    mp = mpmath.MPContext()
    mp.dps = _working_digits(ctx.N)
    K = _overlap_window_mp(mp, ctx.N, etas, xis)
    eps = mp.sqrt(2 * mp.pi / ctx.N)
    worst = mp.mpf(0)
    for i, e in enumerate(etas):
        for j, x in enumerate(xis):
            p = frame.p0 * eps * int(e)
            q = frame.q0 * eps * int(x)
            gauss = mp.exp(-power * (p**2 + q**2) / 4)
            worst = max(worst, abs(K[i][j] ** power - gauss))
    return float(worst)


def gaussian_overlap_error(
    ctx: SpaceContext, frame: ScalingFrame, window: float, *, extended: bool = True
) -> float:
    """Max ``|K(eta, xi) - exp(-(p^2 + q^2) / 4)|`` over grid points inside ``window``.

    Raises
    ------
    DomainError
        If no grid point falls inside the window.
    """
    return _window_error(ctx, frame, window, extended, 1)


def vacuum_husimi_error(
    ctx: SpaceContext, frame: ScalingFrame, window: float, *, extended: bool = True
) -> float:
    """Same as :func:`gaussian_overlap_error` for the vacuum Husimi function ``K^2``."""
    return _window_error(ctx, frame, window, extended, 2)


def vacuum_commutator(ctx: SpaceContext, frame: ScalingFrame) -> complex:
    """``<0,0| [Q, P] |0,0>``, which tends to ``i`` as N grows."""
    Q, P = position_momentum(ctx, frame)
    vac = vacuum(ctx)
    return complex(np.vdot(vac, (Q @ P - P @ Q) @ vac))


@dataclass(frozen=True)
class SweepRow:
    N: int
    epsilon: float
    max_error: float


@dataclass
class SweepReport:
    window: float
    rows: list[SweepRow] = field(default_factory=list)
    band: float = 0.05

    @property
    def monotone(self) -> bool:
        """Non-increasing errors, allowing each step to rise by ``band`` relative."""
        errs = [r.max_error for r in self.rows]
        return all(b <= a * (1 + self.band) for a, b in zip(errs, errs[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        errs = [r.max_error for r in self.rows]
        return all(b < a for a, b in zip(errs, errs[1:]))

    def to_csv(self) -> str:
        lines = ["N,epsilon,max_error"]
        lines += [f"{r.N},{r.epsilon!r},{r.max_error!r}" for r in self.rows]
        return "\n".join(lines) + "\n"


def convergence_sweep(
    Ns,
    window: float,
    *,
    p0: float = 1.0,
    extended: bool = True,
    check: bool = True,
    max_workers: int = 1,
) -> SweepReport:
    """Per-N maximum overlap error, with a monotonicity check.

    ``Ns`` must be ascending odd integers.  With ``check`` set, a sweep of
    two or more rows that rises by more than 5% between consecutive N raises
    :class:`ConvergenceError`.
    """
    Ns = [int(n) for n in Ns]
    if not Ns:
        raise DomainError("convergence sweep needs at least one dimension")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise DomainError(f"dimensions must be strictly ascending, got {Ns}")

    def one(n: int) -> SweepRow:
        ctx = make_space(n)
        frame = ScalingFrame.from_p0(n, p0)
        err = gaussian_overlap_error(ctx, frame, window, extended=extended)
        return SweepRow(n, frame.epsilon, err)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, Ns))
    else:
        rows = [one(n) for n in Ns]
    report = SweepReport(window, rows)
    if check and len(rows) > 1 and not report.monotone:
        raise ConvergenceError(f"overlap error does not decrease with N: {[r.max_error for r in rows]}")
    return report
