"""Jacobi theta functions for complex argument and lattice parameter.

Convention::

    theta3(z | tau) = sum_a exp(i pi tau a^2 + 2 pi i z a)
    theta2(z | tau) = sum_a exp(i pi tau (a + 1/2)^2 + 2 pi i z (a + 1/2))
    theta4(z | tau) = theta3(z + 1/2 | tau)

The series is summed outward from the index whose term has the largest
modulus, so arguments with a large imaginary part (e.g. ``theta3(i*mu | 2iN)``)
keep full accuracy.  Everything is double precision; the accuracy floor is
about 1e-13 relative.
"""

from __future__ import annotations

import math
import cmath

import numpy as np

from .errors import DomainError, PrecisionError

__all__ = ["theta2", "theta3", "theta4", "MAX_TERMS"]

MAX_TERMS = 10**6
DEFAULT_TOL = 1e-15
# stop after this many consecutive negligible terms on each side
_QUIET_RUN = 3
_LOG_MAX = 700.0


def _series(z: complex, tau: complex, tol: float, offset: float) -> complex:
    z = complex(z)
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"theta series needs Im(tau) > 0, got tau={tau!r}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if not (cmath.isfinite(z) and cmath.isfinite(tau)):
        raise DomainError("theta arguments must be finite")

    # the real part of z only enters through exp(2 pi i Re(z) n); shift it
    # into [-1/2, 1/2) and restore the phase picked up by the offset
    shift = math.floor(z.real + 0.5)
    z_red = complex(z.real - shift, z.imag)
    phase = cmath.exp(2j * math.pi * shift * offset) if offset else 1.0

    t, y = tau.imag, z_red.imag

    def log_mod(n: int) -> float:
        m = n + offset
        return -math.pi * t * m * m - 2.0 * math.pi * y * m

    centre = round(-y / t - offset)
    peak = log_mod(centre)
    if peak > _LOG_MAX:
        raise PrecisionError(f"theta series overflows double precision (log|term| = {peak:.1f})")
    # negligible relative to max(1, dominant term)
    threshold = math.log(tol) - math.log(100.0) + max(0.0, peak)

    lo = hi = centre
    quiet_lo = quiet_hi = 0
    while quiet_lo < _QUIET_RUN or quiet_hi < _QUIET_RUN:
        if hi - lo > 2 * MAX_TERMS:
            raise PrecisionError(
                f"theta series needs more than {MAX_TERMS} terms each side (tau={tau!r})"
            )
        if quiet_hi < _QUIET_RUN:
            hi += 1
            quiet_hi = quiet_hi + 1 if log_mod(hi) < threshold else 0
        if quiet_lo < _QUIET_RUN:
            lo -= 1
            quiet_lo = quiet_lo + 1 if log_mod(lo) < threshold else 0

    m = np.arange(lo, hi + 1, dtype=float) + offset
    terms = np.exp(1j * math.pi * tau * m * m + 2j * math.pi * z_red * m)
    # add the small terms first
    order = np.argsort(np.abs(terms))
    return complex(np.sum(terms[order])) * phase


def theta3(z: complex, tau: complex, tol: float = DEFAULT_TOL) -> complex:
    """Jacobi theta3(z | tau).

    Parameters
    ----------
    z : complex
        First argument.
    tau : complex
        Lattice parameter, ``Im(tau) > 0``.
    tol : float
        Truncation tolerance. Absolute for results of order one; for larger
        values it is taken relative to the dominant term.

    Raises
    ------
    DomainError
        If ``Im(tau) <= 0`` or ``tol <= 0``.
    PrecisionError
        If more than ``MAX_TERMS`` terms per side would be needed, or the
        dominant term overflows.
    """
    return _series(z, tau, tol, 0.0)


def theta2(z: complex, tau: complex, tol: float = DEFAULT_TOL) -> complex:
    """Jacobi theta2(z | tau), the half-integer shifted series."""
    return _series(z, tau, tol, 0.5)


def theta4(z: complex, tau: complex, tol: float = DEFAULT_TOL) -> complex:
    """Jacobi theta4(z | tau) = theta3(z + 1/2 | tau)."""
    return _series(complex(z) + 0.5, tau, tol, 0.0)
