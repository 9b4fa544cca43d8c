from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dphase.errors import DomainError
from dphase.schwinger import (
    decompose,
    fold,
    make_space,
    monomial_sum,
    monomial_traces,
    recompose,
    schwinger_element,
    weyl_monomial,
)

odd_dims = st.sampled_from([1, 3, 5, 7, 9])


@pytest.mark.parametrize("N", [0, -3, 4, 10, 2003])
def test_bad_dimension(N):
    with pytest.raises(DomainError):
        make_space(N)


@pytest.mark.parametrize("N", [3.0, "5", True])
def test_non_integer_dimension(N):
    with pytest.raises(DomainError):
        make_space(N)


def test_configurable_maximum():
    with pytest.raises(DomainError):
        make_space(11, max_dim=9)
    assert make_space(np.int64(9), max_dim=9).N == 9


def test_degenerate_dimension_one():
    ctx = make_space(1)
    assert ctx.ell == 0
    for m in (ctx.U, ctx.V, ctx.fourier):
        assert m.shape == (1, 1) and abs(m[0, 0] - 1) < 1e-15


def test_context_scalars():
    ctx = make_space(7)
    assert ctx.ell == 3 and ctx.a == 1 / 14
    assert list(ctx.labels) == [-3, -2, -1, 0, 1, 2, 3]


@given(label=st.integers(-1000, 1000), N=odd_dims)
def test_fold_range_and_congruence(label, N):
    f = fold(label, N)
    ell = (N - 1) // 2
    assert -ell <= f <= ell
    assert (f - label) % N == 0


def test_fold_vectorized():
    assert list(fold(np.array([-4, -3, 3, 4, 10]), 7)) == [3, -3, 3, -3, 3]


def test_shift_acts_downward():
    ctx = make_space(3)
    for mu in ctx.labels:
        out = ctx.V @ ctx.u_basis[:, ctx.index(mu)]
        assert np.allclose(out, ctx.u_basis[:, ctx.index(mu - 1)], atol=1e-15)


@pytest.mark.parametrize("N", [3, 5, 7])
def test_operators_match_definitions(N):
    ctx = make_space(N)
    U, V = oracles.clock_shift(N)
    assert np.abs(ctx.U - U).max() < 1e-14
    assert np.abs(ctx.V - V).max() < 1e-14


@pytest.mark.parametrize("N", [3, 5, 7])
def test_unitarity_and_period(N):
    ctx = make_space(N)
    eye = np.eye(N)
    for m in (ctx.U, ctx.V, ctx.fourier):
        assert np.abs(m.conj().T @ m - eye).max() < 1e-13
    for m in (ctx.U, ctx.V):
        assert np.abs(np.linalg.matrix_power(m, N) - eye).max() < 1e-12


def test_weyl_relation():
    ctx = make_space(5)
    worst = 0.0
    for a in ctx.labels:
        for b in ctx.labels:
            lhs = weyl_monomial(ctx, a, 0) @ weyl_monomial(ctx, 0, b)
            rhs = np.exp(-2j * np.pi * a * b / 5) * weyl_monomial(ctx, 0, b) @ weyl_monomial(ctx, a, 0)
            worst = max(worst, np.abs(lhs - rhs).max())
    assert worst < 1e-14


@given(N=odd_dims, eta=st.integers(-12, 12), xi=st.integers(-12, 12))
def test_monomial_matches_matrix_powers(N, eta, xi):
    ctx = make_space(N)
    assert np.abs(weyl_monomial(ctx, eta, xi) - oracles.monomial(N, eta, xi)).max() < 1e-12


def test_identity_element():
    ctx = make_space(5)
    assert np.abs(schwinger_element(ctx, 0, 0) - np.eye(5) / np.sqrt(5)).max() < 1e-15


def test_adjoint_flips_labels():
    ctx = make_space(7)
    assert np.abs(schwinger_element(ctx, 1, 2).conj().T - schwinger_element(ctx, -1, -2)).max() < 1e-14


@given(N=odd_dims, eta=st.integers(-10, 10), xi=st.integers(-10, 10))
def test_element_matches_oracle(N, eta, xi):
    ctx = make_space(N)
    assert np.abs(schwinger_element(ctx, eta, xi) - oracles.schwinger(N, eta, xi)).max() < 1e-12


def test_orthonormality():
    ctx = make_space(5)
    basis = np.array([schwinger_element(ctx, e, x) for e in ctx.labels for x in ctx.labels])
    gram = np.einsum("aji,bji->ab", basis.conj(), basis)
    assert np.abs(gram - np.eye(25)).max() < 1e-13


@pytest.mark.parametrize("shift", [(5, 0), (0, 5), (-5, 10)])
def test_labels_congruent_mod_n(shift):
    ctx = make_space(5)
    for e in ctx.labels:
        for x in ctx.labels:
            a = decompose(ctx, schwinger_element(ctx, e, x))
            b = decompose(ctx, schwinger_element(ctx, e + shift[0], x + shift[1]))
            assert np.abs(a - b).max() < 1e-13


def test_fourier_maps_bases():
    ctx = make_space(7)
    assert np.abs(ctx.fourier @ ctx.u_basis - ctx.v_basis).max() < 1e-15
    # v-basis diagonalizes V with the clock eigenvalues
    diag = ctx.v_basis.conj().T @ ctx.V @ ctx.v_basis
    assert np.abs(diag - np.diag(np.exp(2j * np.pi * ctx.labels / 7))).max() < 1e-13


def test_basis_overlap_normalized():
    ctx = make_space(5)
    assert np.allclose(np.abs(ctx.v_basis), 1 / np.sqrt(5))


def test_decompose_identity():
    ctx = make_space(5)
    c = decompose(ctx, np.eye(5))
    expected = np.zeros((5, 5))
    expected[ctx.index(0), ctx.index(0)] = np.sqrt(5)
    assert np.abs(c - expected).max() < 1e-13


def test_decompose_basis_element():
    ctx = make_space(5)
    c = decompose(ctx, schwinger_element(ctx, 2, 1))
    expected = np.zeros((5, 5))
    expected[ctx.index(2), ctx.index(1)] = 1
    assert np.abs(c - expected).max() < 1e-13


@given(N=odd_dims, seed=st.integers(0, 2**32 - 1))
def test_decompose_roundtrip(N, seed):
    ctx = make_space(N)
    op = oracles.random_hermitian(np.random.default_rng(seed), N)
    assert np.abs(recompose(ctx, decompose(ctx, op)) - op).max() < 1e-12


@given(N=odd_dims, seed=st.integers(0, 2**32 - 1))
def test_monomial_traces_and_sum(N, seed):
    ctx = make_space(N)
    rng = np.random.default_rng(seed)
    op = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    t = monomial_traces(ctx, op)
    for i, e in enumerate(ctx.labels):
        for j, x in enumerate(ctx.labels):
            assert abs(t[i, j] - np.trace(oracles.monomial(N, e, x) @ op)) < 1e-11
    w = rng.normal(size=(N, N))
    direct = sum(
        w[i, j] * oracles.monomial(N, e, x) for i, e in enumerate(ctx.labels) for j, x in enumerate(ctx.labels)
    )
    assert np.abs(monomial_sum(ctx, w) - direct).max() < 1e-11


def test_dimension_mismatch():
    ctx = make_space(5)
    with pytest.raises(DomainError):
        decompose(ctx, np.eye(3))
    with pytest.raises(DomainError):
        recompose(ctx, np.eye(3))


def test_memo_is_shared_across_threads():
    ctx = make_space(9)
    calls = []

    def factory():
        calls.append(1)
        return object()

    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda _: ctx.memo("probe", factory), range(32)))
    assert all(g is got[0] for g in got)
    assert ctx.memo("probe", factory) is got[0]
