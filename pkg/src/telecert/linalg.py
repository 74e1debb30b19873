"""Dense complex linear algebra for small Hilbert-space dimensions.

Vectors are 1-D complex numpy arrays, operators are square 2-D complex
numpy arrays.  The Hermitian eigensolver is a cyclic Jacobi iteration
written out explicitly: for the dimensions this package cares about
(2 and 3, extensible to any small d) it is exact to roundoff, fully
deterministic, and easy to audit against the closed 2x2 formulas.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PreconditionError

#: Entrywise tolerance for accepting a matrix as Hermitian.
HERMITIAN_TOL = 1e-12

#: Default eigenvalue cutoff below which inv_sqrt treats a mode as null.
NULL_TOL = 1e-10


def inner_product(u, v) -> complex:
    """Inner product with conjugation on the first argument."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("inner_product expects 1-D vectors")
    if u.shape != v.shape:
        raise ValueError(
            f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}"
        )
    return complex(np.vdot(u, v))


def projector(v) -> np.ndarray:
    """Rank-1 projector onto the (assumed normalized) vector ``v``."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def _assert_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    # Symmetrize so downstream arithmetic sees an exactly Hermitian operand.
    return (m + m.conj().T) / 2.0


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero a[p, q] by a unitary similarity, accumulating the rotation in v."""
    g = a[p, q]
    mag = abs(g)
    phase = g / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    ap = a[:, p].copy()
    aq = a[:, q].copy()
    a[:, p] = c * ap - s * np.conj(phase) * aq
    a[:, q] = s * phase * ap + c * aq
    rp = a[p, :].copy()
    rq = a[q, :].copy()
    a[p, :] = c * rp - s * phase * rq
    a[q, :] = s * np.conj(phase) * rp + c * rq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * np.conj(phase) * vq
    v[:, q] = s * phase * vp + c * vq


def eigh(h, tol: float = 1e-14, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` in ascending order and a
    unitary ``v`` whose columns are the matching eigenvectors, so that
    ``h == v @ diag(w) @ v.conj().T`` up to roundoff.
    """
    a = _assert_hermitian(h)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a))))
    skip = tol * scale / max(1, n * n)
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a)))
        if float(off.max(initial=0.0)) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > skip:
                    _jacobi_rotate(a, v, p, q)
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def inv_sqrt(h, null_tol: float = NULL_TOL) -> np.ndarray:
    """Pseudo-inverse square root of a positive semidefinite matrix.

    Eigenvalues above ``null_tol`` map to ``1/sqrt(eigenvalue)``; the rest
    map to zero.  Raises if any eigenvalue falls below ``-null_tol``.
    """
    w, v = eigh(h)
    if float(w[0]) < -null_tol:
        raise PreconditionError(
            f"not positive semidefinite: smallest eigenvalue {w[0]:.3e} "
            f"is below -null_tol ({-null_tol:.1e})"
        )
    f = np.where(w > null_tol, 1.0 / np.sqrt(np.maximum(w, null_tol)), 0.0)
    m = (v * f) @ v.conj().T
    return (m + m.conj().T) / 2.0
