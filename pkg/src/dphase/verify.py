"""Self-check suites over theta, operator algebra, coherent states and kernels.

Each check computes a maximum residual and compares it with a tolerance from
:class:`~dphase.config.Tolerances`.  Random inputs come from a seeded
generator, so a report is reproducible for a given ``(N, s_list, seed)``.
Full kernel families are materialized, so suites are meant for N <= 21.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .coherent import (
    coherent_overlap,
    coherent_state,
    overlap_table,
    theta_product_sum,
    theta_product_sum_closed,
    vacuum,
    vacuum_norm_squared,
    _vacuum_profile,
)
from .config import Tolerances
from .kernel import (
    antismooth,
    check_order,
    kernel_family,
    map_operator,
    reconstruct,
    smooth,
    weight_range,
)
from .schwinger import SpaceContext, decompose, recompose, schwinger_element, weyl_monomial
from .theta import theta2, theta3, theta4

__all__ = ["Check", "VerifyReport", "DEFAULT_ORDERS", "run_verification"]

DEFAULT_ORDERS = (0, 1, -1, 0.5, -0.5, 0.4 + 0.3j)
THETA_DRAWS = 25
RANDOM_TRIALS = 5


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tolerance: float
    # checks that pass through K ** (-s) weights are judged relative to the
    # largest weight, since roundoff is amplified by exactly that factor
    scale: float = 1.0

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance * self.scale)


@dataclass
class VerifyReport:
    N: int
    orders: list[complex]
    checks: list[Check] = field(default_factory=list)
    conditioning: dict[str, tuple[float, float]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "orders": [[s.real, s.imag] for s in self.orders],
            "passed": self.passed,
            "checks": [
                {
                    "suite": c.suite,
                    "name": c.name,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "scale": c.scale,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
            "conditioning": {k: {"min": lo, "max": hi} for k, (lo, hi) in self.conditioning.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def to_text(self) -> str:
        lines = [f"dphase verify N={self.N}"]
        width = max(len(f"{c.suite}.{c.name}") for c in self.checks)
        for c in self.checks:
            tag = "ok  " if c.passed else "FAIL"
            bound = f"{c.tolerance:.0e}" if c.scale == 1 else f"{c.tolerance:.0e} x {c.scale:.3g}"
            lines.append(f"{tag} {f'{c.suite}.{c.name}':<{width}}  {c.residual:.3e} < {bound}")
        for key, (lo, hi) in self.conditioning.items():
            lines.append(f"conditioning s={key}: |K^-s| in [{lo:.3e}, {hi:.3e}]")
        bad = len(self.failures())
        lines.append("all checks passed" if not bad else f"{bad} check(s) failed")
        return "\n".join(lines) + "\n"


def _order_key(s: complex) -> str:
    return f"{s.real!r},{s.imag!r}"


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _weight_scale(ctx, *orders) -> float:
    return max(1.0, *(weight_range(ctx, s)[1] for s in orders))


def _random_hermitian(rng, N):
    g = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    return (g + g.conj().T) / 2


def _random_density(rng, N):
    g = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    rho = g.conj().T @ g
    return rho / np.trace(rho).real


# --- theta -----------------------------------------------------------------


def _spread(z, tau, half: bool = False) -> float:
    # sum of term moduli; residuals near a zero of theta are measured against it
    fn = theta2 if half else theta3
    return fn(1j * complex(z).imag, 1j * complex(tau).imag).real


def _theta_checks(rng, tol: Tolerances):
    out = []
    half, jacobi, landen, quasi, parity = [], [], [], [], []
    for _ in range(THETA_DRAWS):
        tau = complex(rng.uniform(-1, 1), rng.uniform(0.05, 5))
        z = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5) * tau.imag)
        lhs = theta3(z + tau / 2, tau) * np.exp(1j * np.pi * tau / 4 + 1j * np.pi * z)
        half.append(abs(lhs - theta2(z, tau)) / _spread(z, tau, half=True))

        t = rng.uniform(0.2, 5)
        x = rng.uniform(-2, 2)
        lhs = theta3(x / (1j * t), 1j / t)
        rhs = math.sqrt(t) * math.exp(math.pi * x * x / t) * theta3(x, 1j * t)
        jacobi.append(_rel(lhs, rhs))

        rhs = 0.5 * (theta3(z / 2, tau / 4) + theta4(z / 2, tau / 4))
        landen.append(abs(theta3(z, tau) - rhs) / _spread(z / 2, tau / 4))

        m = int(rng.integers(-2, 3))
        factor = np.exp(-1j * np.pi * tau * m * m - 2j * np.pi * m * z)
        scale = _spread(z, tau)
        quasi.append(abs(theta3(z + m * tau, tau) / factor - theta3(z, tau)) / scale)
        quasi.append(abs(theta4(z + m * tau, tau) / factor - (-1) ** m * theta4(z, tau)) / scale)

        parity.append(abs(theta3(-z, tau) - theta3(z, tau)) / scale)
    out.append(Check("theta", "half_period", max(half), tol.theta_identity))
    out.append(Check("theta", "jacobi_transform", max(jacobi), tol.theta_identity))
    out.append(Check("theta", "landen_split", max(landen), tol.theta_identity))
    out.append(Check("theta", "quasi_periodicity", max(quasi), tol.theta_identity))
    out.append(Check("theta", "parity", max(parity), tol.theta_identity))
    return out


# --- schwinger -------------------------------------------------------------


def _schwinger_checks(ctx: SpaceContext, rng, tol: Tolerances):
    N = ctx.N
    eye = np.eye(N)
    out = []
    unit = max(
        np.abs(m.conj().T @ m - eye).max() for m in (ctx.U, ctx.V, ctx.fourier)
    )
    out.append(Check("schwinger", "unitarity", float(unit), tol.unitarity))
    period = max(
        np.abs(np.linalg.matrix_power(m, N) - eye).max() for m in (ctx.U, ctx.V)
    )
    out.append(Check("schwinger", "period_N", float(period), tol.weyl))
    weyl = 0.0
    for al in ctx.labels:
        for be in ctx.labels:
            lhs = weyl_monomial(ctx, al, 0) @ weyl_monomial(ctx, 0, be)
            rhs = np.exp(-2j * np.pi * al * be / N) * weyl_monomial(ctx, 0, be) @ weyl_monomial(ctx, al, 0)
            weyl = max(weyl, float(np.abs(lhs - rhs).max()))
    out.append(Check("schwinger", "weyl_relation", weyl, tol.weyl))
    # Tr[S^dagger(mu, nu) S(eta, xi)] for all N^4 pairs
    gram = np.array(
        [decompose(ctx, schwinger_element(ctx, e, x)) for e in ctx.labels for x in ctx.labels]
    ).reshape(N * N, N * N)
    out.append(Check("schwinger", "orthonormality", float(np.abs(gram - np.eye(N * N)).max()), tol.orthonormality))
    fmap = float(np.abs(ctx.fourier @ ctx.u_basis - ctx.v_basis).max())
    out.append(Check("schwinger", "fourier_maps_bases", fmap, tol.unitarity))
    trip = 0.0
    for _ in range(RANDOM_TRIALS):
        op = _random_hermitian(rng, N)
        trip = max(trip, float(np.abs(recompose(ctx, decompose(ctx, op)) - op).max()))
    out.append(Check("schwinger", "decomposition_roundtrip", trip, tol.decomposition))
    return out


# --- coherent --------------------------------------------------------------


def _coherent_checks(ctx: SpaceContext, rng, tol: Tolerances):
    N = ctx.N
    out = []
    vac = vacuum(ctx)
    out.append(Check("coherent", "vacuum_norm", abs(np.linalg.norm(vac) - 1), tol.vacuum))
    out.append(Check("coherent", "vacuum_fourier", float(np.linalg.norm(ctx.fourier @ vac - vac)), tol.vacuum))
    out.append(Check("coherent", "vacuum_parity", float(np.abs(vac - vac[::-1]).max()), tol.vacuum))
    direct = float(np.sum(_vacuum_profile(ctx) ** 2))
    out.append(Check("coherent", "vacuum_norm_closed_form", _rel(vacuum_norm_squared(ctx), direct), tol.vacuum))

    states = np.array([[coherent_state(ctx, m, n) for n in ctx.labels] for m in ctx.labels])
    table = overlap_table(ctx)
    brute = np.einsum("k,abk->ab", vac.conj(), states)
    out.append(Check("coherent", "overlap_vs_inner_product", float(np.abs(brute - table.values).max()), tol.overlap))
    out.append(Check("coherent", "overlap_even", float(np.abs(table.values - table.values[::-1, ::-1]).max()), tol.overlap))
    out.append(Check("coherent", "overlap_origin", abs(table(0, 0) - 1), tol.overlap))
    out.append(Check("coherent", "overlap_positive", max(0.0, -float(table.values.min())), tol.positivity))

    series = np.array([[theta_product_sum(ctx, m, n) for n in ctx.labels] for m in ctx.labels])
    closed = np.array([[theta_product_sum_closed(ctx, m, n) for n in ctx.labels] for m in ctx.labels])
    out.append(Check("coherent", "closed_form_sum", _rel(closed, series), tol.closed_form))

    pairs = rng.integers(-ctx.ell, ctx.ell + 1, size=(50, 4))
    worst = 0.0
    for e, x, m, n in pairs:
        direct = np.vdot(coherent_state(ctx, e, x), coherent_state(ctx, m, n))
        worst = max(worst, abs(coherent_overlap(ctx, e, x, m, n) - direct))
    out.append(Check("coherent", "coherent_overlap", worst, tol.overlap))

    flat = states.reshape(N * N, N)
    resolution = flat.T @ flat.conj() / N
    out.append(Check("coherent", "resolution_of_identity", float(np.abs(resolution - np.eye(N)).max()), tol.overlap))
    return out


# --- kernel ----------------------------------------------------------------


def _kernel_order_checks(ctx: SpaceContext, s: complex, rng, tol: Tolerances):
    N = ctx.N
    eye = np.eye(N)
    fam = kernel_family(ctx, s).kernels
    dual = kernel_family(ctx, -s).kernels
    conj = kernel_family(ctx, s.conjugate()).kernels
    tag = f"[s={_order_key(s)}]"
    scale = _weight_scale(ctx, s)
    out = []
    herm = float(np.abs(fam.conj().swapaxes(-1, -2) - conj).max())
    out.append(Check("kernel", f"hermitian_conjugate{tag}", herm, tol.kernel_identity, scale))
    total = float(np.abs(fam.sum(axis=(0, 1)) / N - eye).max())
    out.append(Check("kernel", f"completeness{tag}", total, tol.kernel_identity, scale))
    trace = float(np.abs(np.trace(fam, axis1=-2, axis2=-1) - 1).max())
    out.append(Check("kernel", f"unit_trace{tag}", trace, tol.kernel_identity, scale))
    pair = np.einsum("abij,cdji->abcd", fam, dual).reshape(N * N, N * N)
    pair_res = float(np.abs(pair - N * np.eye(N * N)).max())
    out.append(Check("kernel", f"dual_pairing{tag}", pair_res, tol.kernel_pairing, _weight_scale(ctx, s, -s)))
    trip = 0.0
    for _ in range(RANDOM_TRIALS):
        op = _random_hermitian(rng, N)
        back = reconstruct(ctx, map_operator(ctx, op, -s), s)
        trip = max(trip, float(np.abs(back - op).max()))
    out.append(Check("kernel", f"roundtrip{tag}", trip, tol.roundtrip, _weight_scale(ctx, s, -s)))
    return out


def _kernel_checks(ctx: SpaceContext, rng, tol: Tolerances):
    N = ctx.N
    out = []
    husimi_kernels = kernel_family(ctx, -1).kernels
    states = np.array([[coherent_state(ctx, m, n) for n in ctx.labels] for m in ctx.labels])
    projectors = np.einsum("abi,abj->abij", states, states.conj())
    out.append(Check("kernel", "coherent_projector", float(np.abs(husimi_kernels - projectors).max()), tol.coherent_projector))

    hier = anti = pos = 0.0
    for _ in range(RANDOM_TRIALS):
        rho = _random_density(rng, N)
        h = map_operator(ctx, rho, -1)
        w = map_operator(ctx, rho, 0)
        p = map_operator(ctx, rho, 1)
        hier = max(hier, float(np.abs(smooth(ctx, w).values - h.values).max()))
        hier = max(hier, float(np.abs(smooth(ctx, p).values - w.values).max()))
        anti = max(anti, float(np.abs(antismooth(ctx, h).values - w.values).max()))
        anti = max(anti, float(np.abs(antismooth(ctx, w).values - p.values).max()))
        pos = max(pos, -float(h.values.real.min()))
    inverse = _weight_scale(ctx, 1)
    out.append(Check("kernel", "smoothing_hierarchy", hier, tol.hierarchy, inverse))
    out.append(Check("kernel", "antismoothing_hierarchy", anti, tol.antihierarchy, inverse))
    out.append(Check("kernel", "husimi_nonnegative", max(pos, 0.0), tol.positivity))

    # T_{-1}(mu, nu) = 1/N sum |<mu,nu|sigma,lambda>|^2 T_{+1}(sigma, lambda)
    weights = np.abs(np.einsum("abi,cdi->abcd", states.conj(), states)) ** 2
    glauber = kernel_family(ctx, 1).kernels
    folded = np.einsum("abcd,cdij->abij", weights, glauber) / N
    out.append(Check("kernel", "fold_projector_from_p_kernels", float(np.abs(folded - husimi_kernels).max()), tol.fold, inverse))
    return out


def run_verification(
    ctx: SpaceContext,
    orders=DEFAULT_ORDERS,
    *,
    tolerances: Tolerances | None = None,
    seed: int = 0,
) -> VerifyReport:
    """Run every suite at dimension ``ctx.N`` and collect the residuals."""
    tol = tolerances or Tolerances()
    orders = [check_order(s) for s in orders]
    rng = np.random.default_rng(seed)
    report = VerifyReport(ctx.N, orders)
    report.checks += _theta_checks(rng, tol)
    report.checks += _schwinger_checks(ctx, rng, tol)
    report.checks += _coherent_checks(ctx, rng, tol)
    for s in orders:
        report.checks += _kernel_order_checks(ctx, s, rng, tol)
        report.conditioning[_order_key(s)] = weight_range(ctx, s)
    report.checks += _kernel_checks(ctx, rng, tol)
    return report
