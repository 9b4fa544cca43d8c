"""Discrete coherent states built on a theta3 vacuum, and their overlaps.

The vacuum has u-amplitudes ``theta3(2 a gamma | 2 i a) / norm`` with
``a = 1 / (2N)``; displaced states are ``|eta, xi> = sqrt(N) S(eta, -xi) |0,0>``.
The vacuum overlap ``K(eta, xi) = <0,0|eta,xi>`` is real, even and (for
every dimension checked) strictly positive.  It is evaluated through a
closed form of four theta3/theta4 products and cached per context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, PrecisionError
from .schwinger import SpaceContext, fold
from .theta import theta2, theta3, theta4

__all__ = [
    "OverlapTable",
    "vacuum_norm_squared",
    "vacuum",
    "coherent_state",
    "theta_product_sum",
    "theta_product_sum_closed",
    "vacuum_overlap",
    "coherent_overlap",
    "overlap_table",
]

IMAG_RESIDUE_TOL = 1e-11


def vacuum_norm_squared(ctx: SpaceContext) -> float:
    """Closed form of the squared vacuum normalization."""
    a = ctx.a
    value = (
        theta3(0, 1j * a) * theta3(0, 4j * a) + theta4(0, 1j * a) * theta2(0, 4j * a)
    ) / (2 * math.sqrt(a))
    return value.real


def _vacuum_profile(ctx: SpaceContext) -> np.ndarray:
    a = ctx.a
    return np.array([theta3(2 * a * g, 2j * a).real for g in ctx.labels])


def vacuum(ctx: SpaceContext) -> np.ndarray:
    """Normalized vacuum ket ``|0,0>`` in the u-basis."""

    def build():
        ket = _vacuum_profile(ctx) / math.sqrt(vacuum_norm_squared(ctx))
        ket = ket.astype(complex)
        ket.flags.writeable = False
        return ket

    return ctx.memo("vacuum", build)


def coherent_state(ctx: SpaceContext, mu: int, nu: int) -> np.ndarray:
    """``|mu, nu> = U^mu V^-nu exp(-i pi mu nu / N) |0,0>`` with folded labels."""
    mu, nu = fold(mu, ctx.N), fold(-nu, ctx.N)
    vac = vacuum(ctx)
    # (V^nu psi)[k] = psi[k + nu], then multiply by the U^mu diagonal
    shifted = vac[ctx.shift_index[:, ctx.index(nu)]]
    return ctx.phase[:, ctx.index(mu)] * shifted * np.exp(1j * np.pi * mu * nu / ctx.N)


def theta_product_sum(ctx: SpaceContext, mu: int, nu: int) -> complex:
    """Direct finite sum behind the overlap closed form.

    ``sum_k theta3(2ak | 2ia) theta3(2a(k + mu) | 2ia) exp(-4 pi i a k nu)``,
    an O(N) reference for :func:`theta_product_sum_closed`.
    """
    a = ctx.a
    profile = _vacuum_profile(ctx)
    k = ctx.labels
    shifted = np.array([theta3(2 * a * (kk + mu), 2j * a).real for kk in k])
    return complex(np.sum(profile * shifted * np.exp(-4j * np.pi * a * k * nu)))


def _theta_pair(ctx: SpaceContext, x) -> tuple[complex, complex]:
    a = ctx.a
    return theta3(a * x, 1j * a), theta4(a * x, 1j * a)


def theta_product_sum_closed(ctx: SpaceContext, mu: int, nu: int) -> complex:
    """Closed form of :func:`theta_product_sum` in theta3/theta4 at ``tau = i a``."""
    a, N = ctx.a, ctx.N
    t3m, t4m = _theta_pair(ctx, mu)
    t3n, t4n = _theta_pair(ctx, nu)
    bracket = (
        t3m * t3n
        + t3m * t4n * (-1) ** (mu % 2)
        + t4m * t3n * (-1) ** (nu % 2)
        + t4m * t4n * (-1) ** ((mu + nu + N) % 2)
    )
    return complex(np.exp(2j * np.pi * a * mu * nu) * bracket / (4 * math.sqrt(a)))


def vacuum_overlap(ctx: SpaceContext, eta: int, xi: int) -> complex:
    """``K(eta, xi) = <0,0|eta,xi>`` from the closed form (labels folded)."""
    eta, xi = fold(eta, ctx.N), fold(xi, ctx.N)
    value = np.exp(-2j * np.pi * ctx.a * eta * xi) * theta_product_sum_closed(ctx, eta, xi)
    return complex(value / vacuum_norm_squared(ctx))


def coherent_overlap(ctx: SpaceContext, eta: int, xi: int, mu: int, nu: int) -> complex:
    """``<eta, xi | mu, nu>`` in closed form."""
    eta, xi, mu, nu = (fold(v, ctx.N) for v in (eta, xi, mu, nu))
    a = ctx.a
    phase = np.exp(2j * np.pi * a * (-mu * nu + eta * xi + 2 * xi * (mu - eta)))
    return complex(phase * theta_product_sum_closed(ctx, mu - eta, nu - xi) / vacuum_norm_squared(ctx))


@dataclass(frozen=True)
class OverlapTable:
    """Real grid ``values[eta + ell, xi + ell] = K(eta, xi)``."""

    N: int
    values: np.ndarray

    def __call__(self, eta: int, xi: int) -> float:
        ell = (self.N - 1) // 2
        return float(self.values[fold(eta, self.N) + ell, fold(xi, self.N) + ell])

    @property
    def positive(self) -> bool:
        return bool(np.all(self.values > 0))

    def power(self, exponent: complex) -> np.ndarray:
        """Elementwise ``K ** exponent`` on the principal branch.

        Integer exponents are taken as real powers; anything else requires
        every entry to be strictly positive.
        """
        exponent = complex(exponent)
        if exponent.imag == 0 and float(exponent.real).is_integer():
            return self.values.astype(complex) ** int(exponent.real)
        if not self.positive:
            bad = np.argwhere(self.values <= 0)[0] - (self.N - 1) // 2
            raise BranchError(
                f"overlap K{tuple(int(b) for b in bad)} = {self(*bad):.3e} is not positive; "
                f"the fractional power {exponent} is undefined"
            )
        return np.exp(exponent * np.log(self.values))


def overlap_table(ctx: SpaceContext) -> OverlapTable:
    """Cached table of ``K(eta, xi)`` over the whole label grid."""

    def build():
        a, N = ctx.a, ctx.N
        g = ctx.labels
        t3 = np.array([theta3(a * x, 1j * a) for x in g])
        t4 = np.array([theta4(a * x, 1j * a) for x in g])
        sign = (-1.0) ** np.abs(g)
        grid = (
            np.outer(t3, t3)
            + np.outer(t3 * sign, t4)
            + np.outer(t4, t3 * sign)
            + (-1) ** N * np.outer(t4 * sign, t4 * sign)
        ) / (4 * math.sqrt(a) * vacuum_norm_squared(ctx))
        residue = float(np.abs(grid.imag).max())
        if residue > IMAG_RESIDUE_TOL:
            raise PrecisionError(f"vacuum overlap has imaginary residue {residue:.2e}")
        values = np.ascontiguousarray(grid.real)
        values.flags.writeable = False
        return OverlapTable(N, values)

    return ctx.memo("overlap", build)
