import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dphase.coherent import (
    OverlapTable,
    coherent_overlap,
    coherent_state,
    overlap_table,
    theta_product_sum,
    theta_product_sum_closed,
    vacuum,
    vacuum_norm_squared,
    vacuum_overlap,
    _vacuum_profile,
)
from dphase.errors import BranchError
from dphase.kernel import trace_product
from dphase.schwinger import make_space
from dphase.theta import theta3


@pytest.mark.parametrize("N", [3, 7, 15, 21])
def test_vacuum_matches_oracle(N):
    ctx = make_space(N)
    assert np.abs(vacuum(ctx) - oracles.vacuum_ket(N)).max() < 1e-13


def test_vacuum_is_read_only_and_cached():
    ctx = make_space(5)
    vac = vacuum(ctx)
    assert vacuum(ctx) is vac
    with pytest.raises(ValueError):
        vac[0] = 0


def test_vacuum_parity():
    ctx = make_space(7)
    vac = vacuum(ctx)
    for k in ctx.labels:
        assert vac[ctx.index(k)] == vac[ctx.index(-k)]


@pytest.mark.parametrize("N", [1, 3, 9])
def test_vacuum_norm_closed_form(N):
    ctx = make_space(N)
    direct = np.sum(_vacuum_profile(ctx) ** 2)
    assert abs(vacuum_norm_squared(ctx) / direct - 1) < 1e-11


def test_origin_state_is_vacuum():
    ctx = make_space(7)
    assert np.abs(coherent_state(ctx, 0, 0) - vacuum(ctx)).max() < 1e-15


def test_states_match_oracle_and_are_normalized():
    ctx = make_space(5)
    for m in ctx.labels:
        for n in ctx.labels:
            ket = coherent_state(ctx, m, n)
            assert abs(np.linalg.norm(ket) - 1) < 1e-12
            assert np.abs(ket - oracles.coherent_ket(5, m, n)).max() < 1e-13


@given(m=st.integers(-20, 20), n=st.integers(-20, 20))
def test_state_labels_periodic(m, n):
    ctx = make_space(5)
    assert np.abs(coherent_state(ctx, m, n) - coherent_state(ctx, m + 5, n - 10)).max() < 1e-13


def test_overlap_matches_inner_product():
    ctx = make_space(5)
    brute = oracles.overlap_grid(5)
    assert np.abs(overlap_table(ctx).values - brute).max() < 1e-10
    assert abs(vacuum_overlap(ctx, 1, 2) - brute[3, 4]) < 1e-10


def test_overlap_single_point():
    ctx = make_space(7)
    direct = np.vdot(vacuum(ctx), coherent_state(ctx, 1, 2))
    assert abs(vacuum_overlap(ctx, 1, 2) - direct) < 1e-10


def test_overlap_table_invariants():
    ctx = make_space(7)
    K = overlap_table(ctx)
    assert abs(K(0, 0) - 1) < 1e-12
    assert np.array_equal(K.values, K.values[::-1, ::-1])
    assert np.abs(K.values).max() <= 1 + 1e-12
    assert np.abs(K.values - K.values.T).max() < 1e-14


@pytest.mark.parametrize("N", range(3, 22, 2))
def test_overlap_positive(N):
    assert overlap_table(make_space(N)).positive


def test_overlap_table_cached():
    ctx = make_space(9)
    assert overlap_table(ctx) is overlap_table(ctx)


def test_series_matches_oracle():
    ctx = make_space(5)
    for m in ctx.labels:
        for n in ctx.labels:
            assert abs(theta_product_sum(ctx, m, n) - oracles.product_sum_series(5, m, n)) < 1e-12


def test_series_symmetric_and_periodic():
    ctx = make_space(5)
    for m in ctx.labels:
        for n in ctx.labels:
            a = theta_product_sum(ctx, m, n)
            assert abs(a - theta_product_sum(ctx, n, m)) < 1e-12
            assert abs(a - theta_product_sum(ctx, m + 5, n)) < 1e-12
            assert abs(a - theta_product_sum(ctx, m, n - 5)) < 1e-12


def test_series_at_origin():
    ctx = make_space(3)
    expected = sum(theta3(2 * ctx.a * k, 2j * ctx.a).real ** 2 for k in ctx.labels)
    value = theta_product_sum(ctx, 0, 0)
    assert abs(value.imag) < 1e-15 and value.real > 0
    assert abs(value.real - expected) < 1e-13


def test_printed_series_phase_disagrees():
    # a phase exp(-pi i a k nu) in the series does not reproduce the closed
    # form; exp(-4 pi i a k nu) does (see test_series_matches_oracle)
    ctx = make_space(5)
    a = ctx.a
    k = ctx.labels
    prof = _vacuum_profile(ctx)
    shifted = np.array([theta3(2 * a * (kk + 1), 2j * a).real for kk in k])
    naive = np.sum(prof * shifted * np.exp(-1j * np.pi * a * k * 2))
    assert abs(naive - theta_product_sum_closed(ctx, 1, 2)) > 1e-3


@pytest.mark.parametrize("N", [3, 5, 7, 9, 11])
def test_closed_form_matches_series(N):
    ctx = make_space(N)
    for m in ctx.labels:
        for n in ctx.labels:
            s = theta_product_sum(ctx, m, n)
            assert abs(theta_product_sum_closed(ctx, m, n) - s) / abs(s) < 1e-10


def test_even_odd_split_at_one_one():
    ctx = make_space(5)
    split = oracles.product_sum_even(5, 1, 1) + oracles.product_sum_odd(5, 1, 1)
    assert abs(split - theta_product_sum_closed(ctx, 1, 1)) < 1e-10


def test_closed_form_symmetric_and_periodic():
    ctx = make_space(5)
    for m in range(-4, 5):
        for n in range(-4, 5):
            a = theta_product_sum_closed(ctx, m, n)
            assert abs(a - theta_product_sum_closed(ctx, n, m)) < 1e-12
            assert abs(a - theta_product_sum_closed(ctx, m + 5, n)) < 1e-12


def test_coherent_overlap_against_inner_products():
    ctx = make_space(7)
    rng = np.random.default_rng(3)
    for e, x, m, n in rng.integers(-3, 4, size=(50, 4)):
        direct = np.vdot(coherent_state(ctx, e, x), coherent_state(ctx, m, n))
        assert abs(coherent_overlap(ctx, e, x, m, n) - direct) < 1e-10


def test_coherent_overlap_special_cases():
    ctx = make_space(7)
    for m, n in [(0, 0), (1, 2), (-3, 3)]:
        assert abs(coherent_overlap(ctx, m, n, m, n) - 1) < 1e-12
        assert abs(coherent_overlap(ctx, 0, 0, m, n) - vacuum_overlap(ctx, m, n)) < 1e-12


def test_resolution_of_identity():
    ctx = make_space(7)
    states = np.array([coherent_state(ctx, m, n) for m in ctx.labels for n in ctx.labels])
    assert np.abs(states.T @ states.conj() / 7 - np.eye(7)).max() < 1e-11


def test_overlap_squared_is_smoothing_weight():
    ctx = make_space(5)
    for p1 in [(0, 0), (1, -2)]:
        for p2 in [(2, 1), (-1, -1), (0, 0)]:
            w = abs(coherent_overlap(ctx, *p1, *p2)) ** 2
            assert abs(trace_product(ctx, -1, -1, p1, p2) - w) < 1e-12


def test_fractional_power_needs_positive_overlap():
    table = OverlapTable(3, np.array([[0.5, 0.2, 0.5], [0.2, 1.0, 0.2], [0.5, -0.1, 0.5]]))
    assert not table.positive
    assert np.allclose(table.power(-1), 1 / table.values)
    with pytest.raises(BranchError):
        table.power(0.5)
    with pytest.raises(BranchError):
        table.power(-0.4 + 0.3j)


def test_complex_power_principal_branch():
    ctx = make_space(5)
    K = overlap_table(ctx)
    s = 0.4 + 0.3j
    assert np.allclose(K.power(-s), K.values ** (-s), rtol=1e-13)
