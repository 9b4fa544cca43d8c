"""s-parametrized mapping kernels and the phase-space functions they produce.

The kernel for order parameter ``s`` at phase-space point ``(mu, nu)`` is

    T_s(mu, nu) = 1/N sum_{eta, xi} U^eta V^xi exp(-2 pi i (eta nu + xi mu) / N)
                  * exp(i pi eta xi / N) * K(eta, xi) ** (-s)

and an operator ``O`` maps to ``F_s(mu, nu) = Tr[T_s(mu, nu) O]``.  The grid
of order ``-s`` is inverted with the kernels of order ``s``.  ``s = 0, -1, +1``
give the Wigner, Husimi and Glauber-Sudarshan functions.

The Fourier phase pairs the U exponent with ``nu`` and the V exponent with
``mu``.  This is the pairing for which ``T_{-1}(mu, nu)`` is exactly the
projector on the coherent state ``|mu, nu>`` of :mod:`dphase.coherent`;
the opposite pairing gives the projector on ``|nu, mu>``.

Because ``K`` is even, every kernel is a double Fourier transform of the
weighted monomial traces, so mapping and inversion cost O(N^3).  Full kernel
families (N^2 operators of size N x N, O(N^4) memory) are built only on
request and memoized per (context, s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coherent import overlap_table
from .errors import DomainError, ValidationError
from .schwinger import SpaceContext, fold, monomial_sum, monomial_traces

__all__ = [
    "check_order",
    "PhaseGrid",
    "KernelFamily",
    "kernel_family",
    "kernel_weights",
    "mapping_kernel",
    "map_operator",
    "reconstruct",
    "wigner",
    "husimi",
    "pfunction",
    "validate_density",
    "trace_product",
    "difference_table",
    "smoothing_weight",
    "antismoothing_weight",
    "convolve",
    "smooth",
    "antismooth",
    "trace_pair",
    "weight_range",
]

ORDER_SLACK = 1e-12
DENSITY_TOL = 1e-10


def check_order(s) -> complex:
    """Return ``s`` as a complex number, rejecting ``|s| > 1``."""
    try:
        s = complex(s)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"order parameter must be a number, got {s!r}") from exc
    if not np.isfinite(s) or abs(s) > 1 + ORDER_SLACK:
        raise DomainError(f"order parameter must satisfy |s| <= 1, got {s}")
    return s


@dataclass(frozen=True)
class PhaseGrid:
    """Values ``F(mu, nu)`` on the N x N torus, tagged with the order parameter."""

    values: np.ndarray
    s: complex
    label: str = ""

    @property
    def N(self) -> int:
        return self.values.shape[0]

    def at(self, mu: int, nu: int) -> complex:
        ell = (self.N - 1) // 2
        return complex(self.values[fold(mu, self.N) + ell, fold(nu, self.N) + ell])

    def total(self) -> complex:
        """``1/N sum F``, equal to the trace of the source operator."""
        return complex(self.values.sum() / self.N)


def kernel_weights(ctx: SpaceContext, s) -> np.ndarray:
    """``exp(i pi eta xi / N) K(eta, xi) ** (-s)`` over the label grid."""
    s = check_order(s)
    g = ctx.labels
    return np.exp(1j * np.pi * np.outer(g, g) / ctx.N) * overlap_table(ctx).power(-s)


def weight_range(ctx: SpaceContext, s) -> tuple[float, float]:
    """Smallest and largest ``|K ** (-s)|``; a conditioning indicator."""
    mags = np.abs(overlap_table(ctx).power(-check_order(s)))
    return float(mags.min()), float(mags.max())


def mapping_kernel(ctx: SpaceContext, s, mu: int, nu: int) -> np.ndarray:
    """The single kernel operator ``T_s(mu, nu)``."""
    mu, nu = fold(mu, ctx.N), fold(nu, ctx.N)
    shift = np.outer(ctx.phase[:, ctx.index(nu)], ctx.phase[:, ctx.index(mu)]).conj()
    return monomial_sum(ctx, kernel_weights(ctx, s) * shift) / ctx.N


@dataclass(frozen=True)
class KernelFamily:
    """All N^2 kernels for one order parameter, materialized on first use."""

    ctx: SpaceContext
    s: complex

    @property
    def kernels(self) -> np.ndarray:
        """Array ``[mu, nu, row, col]`` with label axes in [-ell, ell] order."""
        return self.ctx.memo(("kernels", self.s), self._build)

    def _build(self) -> np.ndarray:
        ctx = self.ctx
        N = ctx.N
        # entry [row k, col k'] of T(mu, nu) needs the eta-transform at
        # k - nu and xi = k' - k, which carries the phase exp(-2 pi i xi mu / N)
        hat = ctx.phase @ kernel_weights(ctx, self.s)
        d = ctx.diff_index
        by_nu = hat[d[:, :, None], d[None, :, :]]
        by_mu = ctx.phase.conj()[:, d]
        out = by_mu[:, None, :, :] * by_nu[None, :, :, :] / N
        out.flags.writeable = False
        return out

    def __call__(self, mu: int, nu: int) -> np.ndarray:
        return self.kernels[self.ctx.index(mu), self.ctx.index(nu)]


def kernel_family(ctx: SpaceContext, s) -> KernelFamily:
    return KernelFamily(ctx, check_order(s))


def _check_operator(ctx: SpaceContext, op) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    if op.shape != (ctx.N, ctx.N):
        raise DomainError(f"expected a {ctx.N}x{ctx.N} operator, got shape {op.shape}")
    return op


def map_operator(ctx: SpaceContext, op, s, label: str = "") -> PhaseGrid:
    """Phase-space function ``F(mu, nu) = Tr[T_s(mu, nu) op]``."""
    s = check_order(s)
    op = _check_operator(ctx, op)
    spectrum = kernel_weights(ctx, s) * monomial_traces(ctx, op)
    conj = ctx.phase.conj()
    return PhaseGrid((conj @ spectrum @ conj).T / ctx.N, s, label)


def reconstruct(ctx: SpaceContext, grid, s) -> np.ndarray:
    """Operator ``1/N sum F(mu, nu) T_s(mu, nu)``.

    ``grid`` should hold values of order ``-s``; a mismatched pairing is
    not detected here.
    """
    s = check_order(s)
    values = np.asarray(grid.values if isinstance(grid, PhaseGrid) else grid, dtype=complex)
    if values.shape != (ctx.N, ctx.N):
        raise DomainError(f"expected a {ctx.N}x{ctx.N} grid, got shape {values.shape}")
    conj = ctx.phase.conj()
    spectrum = conj @ values.T @ conj
    return monomial_sum(ctx, kernel_weights(ctx, s) * spectrum) / ctx.N**2


def validate_density(ctx: SpaceContext, rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check that ``rho`` is Hermitian with unit trace; positivity is not checked."""
    try:
        rho = _check_operator(ctx, rho)
    except DomainError as exc:
        raise ValidationError(str(exc)) from exc
    herm = float(np.abs(rho - rho.conj().T).max())
    if herm > tol:
        raise ValidationError(f"density operator is not Hermitian (deviation {herm:.2e})")
    tr = complex(np.trace(rho))
    if abs(tr - 1) > tol:
        raise ValidationError(f"density operator has trace {tr:.12g}, expected 1")
    return rho


def wigner(ctx: SpaceContext, rho) -> PhaseGrid:
    return map_operator(ctx, validate_density(ctx, rho), 0, "wigner")


def husimi(ctx: SpaceContext, rho) -> PhaseGrid:
    return map_operator(ctx, validate_density(ctx, rho), -1, "husimi")


def pfunction(ctx: SpaceContext, rho) -> PhaseGrid:
    return map_operator(ctx, validate_density(ctx, rho), 1, "p")


def difference_table(ctx: SpaceContext, exponent) -> np.ndarray:
    """``D[dmu, dnu] = 1/N sum exp(2 pi i (eta dmu + xi dnu) / N) K(eta, xi) ** exponent``."""
    kpow = overlap_table(ctx).power(exponent)
    return ctx.phase @ kpow @ ctx.phase / ctx.N


def trace_product(ctx: SpaceContext, s, t, p1, p2) -> complex:
    """``Tr[T_s(mu, nu) T_t(mu', nu')]`` for label pairs ``p1 = (mu, nu)``, ``p2 = (mu', nu')``.

    Finite for every ``s, t`` in the unit disc, since ``K`` never vanishes.
    """
    s, t = check_order(s), check_order(t)
    (mu, nu), (mu2, nu2) = p1, p2
    table = difference_table(ctx, -(s + t))
    return complex(table[ctx.index(mu2 - mu), ctx.index(nu2 - nu)])


def smoothing_weight(ctx: SpaceContext, p1, p2) -> float:
    """Weight ``<mu,nu| G(sigma,lambda) |mu,nu>`` carrying Wigner to Husimi (and P to Wigner)."""
    table = ctx.memo("smoothing", lambda: _real_table(ctx, 1))
    return float(table[ctx.index(p1[0] - p2[0]), ctx.index(p1[1] - p2[1])])


def antismoothing_weight(ctx: SpaceContext, dmu: int, dnu: int) -> float:
    """Fourier transform of ``1 / K``; undoes one smoothing step."""
    table = ctx.memo("antismoothing", lambda: _real_table(ctx, -1))
    return float(table[ctx.index(dmu), ctx.index(dnu)])


def _real_table(ctx: SpaceContext, exponent: int) -> np.ndarray:
    table = difference_table(ctx, exponent)
    # K is real and even, so the transform is real
    out = np.ascontiguousarray(table.real)
    out.flags.writeable = False
    return out


def convolve(ctx: SpaceContext, table, values) -> np.ndarray:
    """``G(mu, nu) = 1/N sum table(mu - sigma, nu - lambda) F(sigma, lambda)``."""
    table = np.asarray(table)
    values = np.asarray(values)
    d = ctx.diff_index.T  # d[mu, sigma] -> position of mu - sigma
    weights = table[d[:, None, :, None], d[None, :, None, :]]
    return np.einsum("abcd,cd->ab", weights, values) / ctx.N


def smooth(ctx: SpaceContext, grid: PhaseGrid) -> PhaseGrid:
    """One smoothing step: order ``s`` to ``s - 1`` (P to Wigner, Wigner to Husimi)."""
    table = ctx.memo("smoothing", lambda: _real_table(ctx, 1))
    return PhaseGrid(convolve(ctx, table, grid.values), grid.s - 1)


def antismooth(ctx: SpaceContext, grid: PhaseGrid) -> PhaseGrid:
    """One inverse smoothing step: order ``s`` to ``s + 1`` (Husimi to Wigner, Wigner to P)."""
    table = ctx.memo("antismoothing", lambda: _real_table(ctx, -1))
    return PhaseGrid(convolve(ctx, table, grid.values), grid.s + 1)


def trace_pair(ctx: SpaceContext, A, B, s) -> complex:
    """``Tr(AB)`` from the order ``s`` function of A and the order ``-s`` function of B."""
    s = check_order(s)
    fa = map_operator(ctx, A, s).values
    fb = map_operator(ctx, B, -s).values
    return complex(np.sum(fa * fb) / ctx.N)
