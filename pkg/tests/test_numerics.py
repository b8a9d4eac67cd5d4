import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secbeam.errors import InvalidInput
from secbeam.numerics import (as_hermitian, hermitian_eig, psd_check, real_embed, real_unembed,
                              trace_inner)


def random_hermitian(rng, m):
    a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return (a + a.conj().T) / 2


seeds = st.integers(0, 2 ** 32 - 1)
dims = st.integers(1, 8)


def test_identity_eigenvalues():
    lam, _ = hermitian_eig(np.eye(2))
    np.testing.assert_allclose(lam, [1.0, 1.0])


def test_diagonal_eigenpairs():
    lam, V = hermitian_eig(np.diag([4.0, 0.0]))
    np.testing.assert_allclose(lam, [4.0, 0.0])
    np.testing.assert_allclose(np.abs(V), np.eye(2), atol=1e-12)


def test_pauli_y():
    lam, _ = hermitian_eig(np.array([[0, -1j], [1j, 0]]))
    np.testing.assert_allclose(lam, [1.0, -1.0], atol=1e-12)


def test_non_finite_rejected():
    with pytest.raises(InvalidInput):
        hermitian_eig(np.array([[np.nan, 0], [0, 1]]))


def test_too_large_rejected():
    with pytest.raises(InvalidInput):
        hermitian_eig(np.eye(65))


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_eig_reconstruction(seed, m):
    A = random_hermitian(np.random.default_rng(seed), m)
    lam, V = hermitian_eig(A)
    scale = np.linalg.norm(A)
    assert np.all(np.diff(lam) <= 0)
    assert np.linalg.norm(A @ V - V * lam) <= 1e-10 * scale
    assert np.linalg.norm(V.conj().T @ V - np.eye(m)) <= 1e-10
    assert np.linalg.norm((V * lam) @ V.conj().T - A) <= 1e-9 * scale
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(A)[::-1], atol=1e-10 * max(1, scale))


def test_eig_dimension_64():
    A = random_hermitian(np.random.default_rng(0), 64)
    lam, V = hermitian_eig(A)
    assert np.linalg.norm(A @ V - V * lam) <= 1e-10 * np.linalg.norm(A)


def test_storage_convention_uses_upper_triangle():
    a = np.array([[1 + 5j, 2 + 1j], [99.0, 3]])
    H = as_hermitian(a)
    np.testing.assert_array_equal(H, np.array([[1, 2 + 1j], [2 - 1j, 3]]))


def test_trace_inner_examples():
    assert trace_inner(np.eye(2), np.eye(2)) == 2
    assert trace_inner(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])) == 11
    h = np.array([1, 1j])
    assert trace_inner(np.outer(h, h.conj()), np.eye(2)) == pytest.approx(2)
    with pytest.raises(InvalidInput):
        trace_inner(np.eye(2), np.eye(3))


@settings(max_examples=40, deadline=None)
@given(seeds, dims, st.floats(-3, 3), st.floats(-3, 3))
def test_trace_inner_symmetric_bilinear(seed, m, a, b):
    rng = np.random.default_rng(seed)
    A, B, C = (random_hermitian(rng, m) for _ in range(3))
    assert trace_inner(A, B) == pytest.approx(trace_inner(B, A), abs=1e-9)
    lhs = trace_inner(a * A + b * C, B)
    assert lhs == pytest.approx(a * trace_inner(A, B) + b * trace_inner(C, B), abs=1e-9)
    P = A @ A.conj().T
    assert trace_inner(P, P) >= 0


def test_psd_examples():
    assert psd_check(np.eye(2), 0)
    assert not psd_check(np.diag([1.0, -1.0]), 1e-9)
    assert psd_check(np.zeros((2, 2)), 0)


def test_embed_examples():
    np.testing.assert_array_equal(real_embed(np.array([[3.0]])), 3 * np.eye(2))
    np.testing.assert_array_equal(real_embed(np.eye(2)), np.eye(4))
    A = np.array([[0, -1j], [1j, 0]])
    E = real_embed(A)
    assert np.trace(E @ E) == pytest.approx(4)
    assert np.trace(E @ E) == pytest.approx(2 * trace_inner(A, A))


@settings(max_examples=50, deadline=None)
@given(seeds, dims, st.booleans())
def test_embed_properties(seed, m, positive):
    rng = np.random.default_rng(seed)
    A, B = random_hermitian(rng, m), random_hermitian(rng, m)
    E = real_embed(A)
    np.testing.assert_array_equal(E, E.T)
    np.testing.assert_allclose(real_embed(2 * A - B), 2 * E - real_embed(B), atol=1e-12)
    assert np.sum(E * real_embed(B)) == pytest.approx(2 * trace_inner(A, B), abs=1e-9)
    np.testing.assert_allclose(real_unembed(E), A, atol=1e-9)
    lam = np.linalg.eigvalsh(A)
    np.testing.assert_allclose(np.linalg.eigvalsh(E), np.sort(np.repeat(lam, 2)), atol=1e-9)
    # definite matrices of either sign classify identically at both levels
    P = A @ A.conj().T + 0.1 * np.eye(m)
    P = P if positive else -P
    assert psd_check(P, 1e-9) == psd_check(real_embed(P), 1e-9) == positive
