"""Shared dense linear-algebra helpers (SVD rank decisions, bases, norms).

All rank/kernel decisions in this package go through these functions so that
one tolerance policy applies everywhere: singular values at or below
``tol * largest_singular_value`` count as zero.  Singular-vector signs are
fixed deterministically (largest-magnitude entry positive) so repeated runs
return bit-identical bases.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-9


def fix_signs(basis: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    basis = np.array(basis, dtype=float, copy=True)
    for j in range(basis.shape[1]):
        col = basis[:, j]
        if col.shape[0] == 0:
            continue
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            basis[:, j] = -col
    return basis


def numerical_rank(mat: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol * sigma_max``."""
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] <= 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def null_basis(mat: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space of ``mat``."""
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[1]
    if mat.size == 0 or not np.any(mat):
        return np.eye(n)
    _, sv, vt = np.linalg.svd(mat)
    rank = int(np.sum(sv > tol * sv[0])) if sv.size else 0
    return fix_signs(vt[rank:].T)


def orth_basis(mat: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of ``mat``."""
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0 or not np.any(mat):
        return np.zeros((mat.shape[0], 0))
    u, sv, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(sv > tol * sv[0])) if sv.size else 0
    return fix_signs(u[:, :rank])


def spectral_norm(mat: np.ndarray) -> float:
    """Largest singular value."""
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def spectral_norms(mats: np.ndarray) -> np.ndarray:
    """Largest singular value of each matrix in a stacked ``(..., n, n)`` array."""
    mats = np.asarray(mats, dtype=float)
    if mats.shape[-1] == 0:
        return np.zeros(mats.shape[:-2])
    sv = np.linalg.svd(mats, compute_uv=False)
    return sv[..., 0]


def spectral_radius(mat: np.ndarray) -> float:
    """Largest eigenvalue modulus."""
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(mat))))


def spectral_radii(mats: np.ndarray) -> np.ndarray:
    """Largest eigenvalue modulus of each matrix in a stacked array."""
    mats = np.asarray(mats, dtype=float)
    if mats.shape[-1] == 0:
        return np.zeros(mats.shape[:-2])
    return np.max(np.abs(np.linalg.eigvals(mats)), axis=-1)
