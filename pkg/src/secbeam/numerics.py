"""Dense Hermitian linear algebra used throughout the package.

Hermitian matrices are plain complex ``ndarray`` objects. :func:`as_hermitian`
rebuilds a matrix from its upper triangle and the real part of its diagonal,
so downstream code never sees symmetry drift.
"""
import numpy as np

from .errors import InvalidInput

MAX_EIG_DIM = 64


def _finite(a, name="matrix"):
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def as_hermitian(a):
    """Return the Hermitian matrix whose upper triangle is that of ``a``."""
    a = _finite(np.atleast_2d(np.asarray(a, dtype=complex)))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {a.shape}")
    upper = np.triu(a, 1)
    return upper + upper.conj().T + np.diag(a.diagonal().real).astype(complex)


def _jacobi_sweeps(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                r = abs(b)
                if r <= 1e-300:
                    continue
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                phase = b / r
                # unitary rotation D @ J acting on coordinates (p, q)
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    return a.diagonal().real.copy(), v


def hermitian_eig(a, tol=1e-15, max_sweeps=60):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order and eigenvectors stored as columns.
    """
    a = as_hermitian(a)
    if a.shape[0] > MAX_EIG_DIM:
        raise InvalidInput(f"dimension {a.shape[0]} exceeds {MAX_EIG_DIM}")
    w, v = _jacobi_sweeps(a.copy(), tol, max_sweeps)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def trace_inner(a, b):
    """Tr(A B) for Hermitian A and B (always real)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise InvalidInput(f"dimension mismatch: {a.shape} vs {b.shape}")
    # Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B
    return float(np.real(np.vdot(b, a)))


def psd_check(a, tol=0.0):
    """True iff the smallest eigenvalue is >= -tol * max(1, ||A||_F)."""
    a = as_hermitian(a)
    lam, _ = hermitian_eig(a)
    return bool(lam[-1] >= -tol * max(1.0, np.linalg.norm(a)))


def real_embed(a):
    """Real symmetric embedding [[Re A, -Im A], [Im A, Re A]] of a Hermitian A."""
    a = as_hermitian(a)
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def real_unembed(y):
    """Hermitian matrix represented by a (not necessarily structured) 2m real block.

    Averages the two copies, i.e. projects onto the image of :func:`real_embed`
    before reading it back. PSD inputs give PSD outputs.
    """
    y = np.asarray(y, dtype=float)
    m = y.shape[0] // 2
    re = 0.5 * (y[:m, :m] + y[m:, m:])
    im = 0.5 * (y[m:, :m] - y[:m, m:])
    return as_hermitian(re + 1j * im)
