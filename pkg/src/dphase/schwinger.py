"""Operator algebra on an odd N-dimensional state space.

Conventions: the u-basis is the computational basis, rows and columns of
every operator are indexed by labels gamma in [-ell, ell] stored at array
position ``gamma + ell``.

* ``U = diag(exp(2 pi i gamma / N))``
* ``<u_mu | v_gamma> = exp(2 pi i mu gamma / N) / sqrt(N)``
* ``V = sum_gamma exp(2 pi i gamma / N) |v_gamma><v_gamma|``, so that
  ``V |u_mu> = |u_{mu-1}>`` and ``U^a V^b = exp(-2 pi i a b / N) V^b U^a``.

Integer powers of U and V are never formed by matrix multiplication: a
monomial ``U^eta V^xi`` has the single nonzero entry
``exp(2 pi i eta k / N)`` in row ``k``, column ``k + xi`` (mod N).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "MAX_DIMENSION",
    "SpaceContext",
    "make_space",
    "fold",
    "weyl_monomial",
    "schwinger_element",
    "monomial_traces",
    "monomial_sum",
    "decompose",
    "recompose",
]

MAX_DIMENSION = 2001


def fold(label, n: int):
    """Fold integer label(s) mod ``n`` into the symmetric interval [-ell, ell]."""
    ell = (n - 1) // 2
    return (np.asarray(label) + ell) % n - ell if np.ndim(label) else (int(label) + ell) % n - ell


@dataclass(frozen=True)
class SpaceContext:
    """Immutable bundle of the basic operators for odd dimension ``N``.

    Derived arrays are built on first access and then shared; the context
    can be handed to any number of threads.
    """

    N: int
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: Any = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    @property
    def ell(self) -> int:
        return (self.N - 1) // 2

    @property
    def a(self) -> float:
        return 1.0 / (2 * self.N)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.arange(-self.ell, self.ell + 1)

    def index(self, label):
        """Array position of a label (folded first)."""
        return fold(label, self.N) + self.ell

    @cached_property
    def phase(self) -> np.ndarray:
        """``phase[j, k] = exp(2 pi i j k / N)`` over label pairs."""
        g = self.labels
        return np.exp(2j * np.pi * (np.outer(g, g) % self.N) / self.N)

    @cached_property
    def shift_index(self) -> np.ndarray:
        """``shift_index[j, k]`` is the array position of ``fold(j + k)``."""
        g = self.labels
        return self.index(np.add.outer(g, g))

    @cached_property
    def diff_index(self) -> np.ndarray:
        """``diff_index[j, k]`` is the array position of ``fold(k - j)``."""
        g = self.labels
        return self.index(np.subtract.outer(g, g).T)

    @cached_property
    def U(self) -> np.ndarray:
        return np.diag(np.exp(2j * np.pi * self.labels / self.N))

    @cached_property
    def v_basis(self) -> np.ndarray:
        """Columns are the V eigenvectors ``|v_gamma>`` in u-components."""
        return self.phase / np.sqrt(self.N)

    @cached_property
    def u_basis(self) -> np.ndarray:
        return np.eye(self.N, dtype=complex)

    @cached_property
    def V(self) -> np.ndarray:
        return weyl_monomial(self, 0, 1)

    @cached_property
    def fourier(self) -> np.ndarray:
        """``sum_gamma |v_gamma><u_gamma|``; maps each u-basis vector to its v partner."""
        return self.v_basis @ self.u_basis.conj().T

    def memo(self, key, factory: Callable[[], Any]) -> Any:
        """Return the cached value for ``key``.

        The factory runs outside the lock (factories may themselves call
        ``memo``); concurrent first calls may both build, the first stored
        value wins and is what every caller gets.
        """
        try:
            return self._memo[key]
        except KeyError:
            pass
        value = factory()
        with self._lock:
            return self._memo.setdefault(key, value)


def make_space(N: int, max_dim: int = MAX_DIMENSION) -> SpaceContext:
    """Build the context for odd dimension ``N`` (``1 <= N <= max_dim``)."""
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise DomainError(f"dimension must be an integer, got {N!r}")
    N = int(N)
    if N < 1 or N % 2 == 0:
        raise DomainError(f"dimension must be a positive odd integer, got {N}")
    if N > max_dim:
        raise DomainError(f"dimension {N} exceeds the configured maximum {max_dim}")
    return SpaceContext(N)


def _check_operator(ctx: SpaceContext, op) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    if op.shape != (ctx.N, ctx.N):
        raise DomainError(f"expected a {ctx.N}x{ctx.N} operator, got shape {op.shape}")
    return op


def weyl_monomial(ctx: SpaceContext, eta: int, xi: int) -> np.ndarray:
    """``U^eta V^xi`` built by index arithmetic."""
    N = ctx.N
    out = np.zeros((N, N), dtype=complex)
    rows = np.arange(N)
    cols = ctx.shift_index[:, ctx.index(xi)]
    out[rows, cols] = ctx.phase[:, ctx.index(eta)]
    return out


def schwinger_element(ctx: SpaceContext, eta: int, xi: int) -> np.ndarray:
    """``S(eta, xi) = U^eta V^xi exp(i pi eta xi / N) / sqrt(N)`` with folded labels."""
    eta, xi = fold(eta, ctx.N), fold(xi, ctx.N)
    return weyl_monomial(ctx, eta, xi) * np.exp(1j * np.pi * eta * xi / ctx.N) / np.sqrt(ctx.N)


def monomial_traces(ctx: SpaceContext, op) -> np.ndarray:
    """``t[eta, xi] = Tr[U^eta V^xi op]`` for all folded labels, in O(N^3)."""
    op = _check_operator(ctx, op)
    # Tr[U^eta V^xi op] = sum_k exp(2 pi i eta k / N) op[k + xi, k]
    offdiag = op[ctx.shift_index, np.arange(ctx.N)[:, None]]
    return ctx.phase @ offdiag


def monomial_sum(ctx: SpaceContext, weights) -> np.ndarray:
    """``sum_{eta, xi} weights[eta, xi] U^eta V^xi``."""
    weights = np.asarray(weights, dtype=complex)
    # entry [k, k'] collects xi = k' - k
    transformed = ctx.phase @ weights
    return transformed[np.arange(ctx.N)[:, None], ctx.diff_index]


def _schwinger_phase(ctx: SpaceContext) -> np.ndarray:
    g = ctx.labels
    return np.exp(1j * np.pi * np.outer(g, g) / ctx.N)


def decompose(ctx: SpaceContext, op) -> np.ndarray:
    """Coefficients ``c[eta, xi] = Tr[S(eta, xi)^dagger op]``.

    Uses ``S(eta, xi)^dagger = S(-eta, -xi)``, so the grid is a relabelled
    monomial trace table.
    """
    op = _check_operator(ctx, op)
    t = monomial_traces(ctx, op)
    # reverse both label axes: position of -gamma is N-1-position of gamma
    return t[::-1, ::-1] * _schwinger_phase(ctx) / np.sqrt(ctx.N)


def recompose(ctx: SpaceContext, coeffs) -> np.ndarray:
    """Inverse of :func:`decompose`: ``sum c[eta, xi] S(eta, xi)``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (ctx.N, ctx.N):
        raise DomainError(f"expected a {ctx.N}x{ctx.N} coefficient grid, got {coeffs.shape}")
    return monomial_sum(ctx, coeffs * _schwinger_phase(ctx) / np.sqrt(ctx.N))
