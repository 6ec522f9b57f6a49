"""Symmetric-matrix primitives.

Matrices are plain ``numpy`` arrays. Every function here accepts a single
``(n, n)`` matrix or a stack ``(..., n, n)`` and works along the last two axes,
so membership tests over thousands of random samples stay vectorized.
"""

from typing import NamedTuple

import numpy as np

from .errors import InputError

JACOBI_TOL = 1e-12
MAX_SWEEPS = 60


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues with paired orthonormal eigenvectors.

    ``vectors[..., :, k]`` is the eigenvector for ``values[..., k]``.
    """

    values: np.ndarray
    vectors: np.ndarray


def sym(M):
    """Validate and symmetrize a matrix (or stack), returning ``(M + M^T) / 2``."""
    M = np.asarray(M, dtype=float)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2] or M.shape[-1] < 1:
        raise InputError(f"expected square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def _jacobi(A):
    """Cyclic Jacobi on a stack of symmetric matrices of shape (m, n, n).

    Rotations are masked per matrix once it has converged, so the result for a
    given matrix does not depend on what else is in the batch. The rotation
    angle only depends on ratios of entries, hence ``_jacobi(-A)`` returns
    exactly the negated spectrum of ``_jacobi(A)``.
    """
    A = A.copy()
    m, n, _ = A.shape
    V = np.broadcast_to(np.eye(n), (m, n, n)).copy()
    if n == 1:
        return A[:, 0, :].copy(), V
    scale = np.sqrt(np.sum(A * A, axis=(1, 2)))
    iu = np.triu_indices(n, 1)
    for _ in range(MAX_SWEEPS):
        off = np.sqrt(2.0 * np.sum(A[:, iu[0], iu[1]] ** 2, axis=1))
        active = off > JACOBI_TOL * scale
        if not np.any(active):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                rot = active & (apq != 0.0)
                if not np.any(rot):
                    continue
                safe = np.where(rot, apq, 1.0)
                with np.errstate(over="ignore"):  # tiny apq: theta = ±inf gives t = 0
                    theta = (A[:, q, q] - A[:, p, p]) / (2.0 * safe)
                big = np.abs(theta) > 1e150  # theta² would overflow; t ≈ 1/(2θ)
                tb = np.where(big, 1.0, theta)
                t = np.where(big, 0.5 / np.where(big, theta, 1.0),
                             np.sign(tb) / (np.abs(tb) + np.sqrt(tb * tb + 1.0)))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c3 = c[:, None]
                s3 = s[:, None]
                Ap = A[:, :, p].copy()
                Aq = A[:, :, q].copy()
                A[:, :, p] = c3 * Ap - s3 * Aq
                A[:, :, q] = s3 * Ap + c3 * Aq
                Ap = A[:, p, :].copy()
                Aq = A[:, q, :].copy()
                A[:, p, :] = c3 * Ap - s3 * Aq
                A[:, q, :] = s3 * Ap + c3 * Aq
                A[rot, p, q] = 0.0
                A[rot, q, p] = 0.0
                Vp = V[:, :, p].copy()
                Vq = V[:, :, q].copy()
                V[:, :, p] = c3 * Vp - s3 * Vq
                V[:, :, q] = s3 * Vp + c3 * Vq
    return np.diagonal(A, axis1=1, axis2=2).copy(), V


def eigen_sorted(A):
    """Ordered eigenvalues ``λ_1 <= ... <= λ_n`` and eigenvectors of ``A``.

    Uses cyclic Jacobi rotations until the off-diagonal Frobenius norm is at
    most ``1e-12 * ||A||``. Deterministic for a fixed input.
    """
    A = sym(A)
    shape = A.shape
    n = shape[-1]
    vals, vecs = _jacobi(A.reshape(-1, n, n))
    order = np.argsort(vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    return EigenDecomposition(vals.reshape(shape[:-1]), vecs.reshape(shape))


def eigvals(A):
    """Ascending eigenvalues only; see :func:`eigen_sorted`."""
    return eigen_sorted(A).values


def lambda_min(A):
    return eigvals(A)[..., 0]


def lambda_max(A):
    return eigvals(A)[..., -1]


def projector(e):
    """Return ``(P_e, P_perp)`` for a nonzero vector ``e``."""
    e = np.asarray(e, dtype=float)
    if e.ndim != 1 or not np.all(np.isfinite(e)):
        raise InputError("projector expects a finite 1-d vector")
    nrm2 = float(e @ e)
    if nrm2 == 0.0:
        raise InputError("projector of the zero vector is undefined")
    P = np.outer(e, e) / nrm2
    P = 0.5 * (P + P.T)
    return P, np.eye(e.size) - P


def radial_hessian(x, psi1, psi2):
    """Hessian of ``u(x) = ψ(|x|)`` given ``ψ'(|x|)`` and ``ψ''(|x|)``.

    ``D²u = (ψ'/|x|) P_{x⊥} + ψ'' P_x``; undefined at the origin.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise InputError("radial Hessian is singular at x = 0")
    P, Q = projector(x)
    return (psi1 / r) * Q + psi2 * P


def radial_matrix(lam, mu, e):
    """``λ P_{e⊥} + μ P_e`` for scalar or broadcastable arrays ``lam``, ``mu``.

    ``e`` may be a single vector ``(n,)`` or a stack of unit vectors ``(..., n)``.
    """
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e, axis=-1, keepdims=True)
    P = e[..., :, None] * e[..., None, :]
    Q = np.eye(e.shape[-1]) - P
    lam = np.asarray(lam, dtype=float)[..., None, None]
    mu = np.asarray(mu, dtype=float)[..., None, None]
    return lam * Q + mu * P


# -- random sampling ---------------------------------------------------------

def _batch(size):
    if size is None:
        return ()
    return tuple(int(s) for s in np.atleast_1d(size))


def random_symmetric(rng, n, size=None, scale=1.0):
    """Symmetric matrices with i.i.d. Gaussian upper triangle (GOE-like)."""
    G = rng.standard_normal(_batch(size) + (n, n))
    return scale * 0.5 * (G + np.swapaxes(G, -1, -2))


def random_psd(rng, n, size=None, scale=1.0, rank=None):
    """Positive semidefinite ``G^T G`` with Gaussian ``G`` of ``rank`` rows."""
    k = n if rank is None else rank
    shape = _batch(size) + (k, n)
    G = rng.standard_normal(shape)
    P = np.swapaxes(G, -1, -2) @ G
    return scale * 0.5 * (P + np.swapaxes(P, -1, -2))


def haar_orthogonal(rng, n, size=None):
    """Haar-distributed orthogonal matrices via QR of Gaussian matrices."""
    shape = _batch(size) + (n, n)
    Z = rng.standard_normal(shape)
    Q, R = np.linalg.qr(Z)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    return Q * d[..., None, :]


def random_unit_vectors(rng, n, count):
    v = rng.standard_normal((count, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def with_spectrum(Q, values):
    """``Q diag(values) Q^T`` for stacks of orthogonal ``Q`` and spectra."""
    values = np.asarray(values, dtype=float)
    M = (Q * values[..., None, :]) @ np.swapaxes(Q, -1, -2)
    return 0.5 * (M + np.swapaxes(M, -1, -2))
