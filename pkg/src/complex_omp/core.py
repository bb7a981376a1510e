"""Dense complex linear-algebra kernels shared by the solver and certificates.

All functions take array-likes, never modify their inputs, and return fresh
numpy arrays. Heavy lifting is delegated to the active kernel backend
(compiled when available, see ``complex_omp._backend``).
"""

import numpy as np

from . import _backend
from .errors import DimensionError

RESIDUAL_FLOOR = 16 * np.finfo(np.float64).eps
RANK_RTOL = 1e-12


def as_cvector(v, name="vector"):
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1 or a.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return np.ascontiguousarray(a)


def as_cmatrix(M, name="matrix"):
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim != 2 or a.size < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return np.ascontiguousarray(a)


def hermitian_inner(a, b):
    """Return sum(conj(a) * b)."""
    a = as_cvector(a, "a")
    b = as_cvector(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def _check_ls(A, y):
    A = as_cmatrix(A, "A")
    y = as_cvector(y, "y")
    m, n = A.shape
    if m != y.size:
        raise DimensionError(f"A has {m} rows but y has length {y.size}")
    if n > m:
        raise DimensionError(f"A has more columns ({n}) than rows ({m})")
    return A, y


def lstsq(A, y):
    """Least-squares fit of ``y`` by the columns of ``A``.

    Uses Householder QR with column-norm pivoting. A column whose remaining
    pivot is below ``1e-12`` times the first pivot raises
    :class:`~complex_omp.errors.SingularMatrixError` carrying that column's
    index.

    Returns
    -------
    coeffs : ndarray, shape (n,)
    residual : ndarray, shape (m,)
        ``y - A @ coeffs``, orthogonal to every column of ``A``. A residual
        at the rounding level of ``y`` (norm below ``16 m eps ||y||``) is
        returned as exact zeros, so ``y`` in the span of ``A`` meets a
        zero-tolerance stopping rule.
    """
    A, y = _check_ls(A, y)
    coeffs, res = _backend.kernels.qr_lstsq(A, y, RANK_RTOL)
    if np.linalg.norm(res) <= RESIDUAL_FLOOR * y.size * np.linalg.norm(y):
        res = np.zeros_like(res)
    return coeffs, res


def project_off(A, y):
    """Component of ``y`` orthogonal to the column span of ``A``, i.e. (I - P) y."""
    return lstsq(A, y)[1]


def min_eigen_hermitian(G):
    """Smallest eigenvalue of a Hermitian matrix (symmetrized first)."""
    G = as_cmatrix(G, "G")
    if G.shape[0] != G.shape[1]:
        raise DimensionError(f"matrix must be square, got {G.shape}")
    G = 0.5 * (G + G.conj().T)
    return _backend.kernels.jacobi_min_eig(np.ascontiguousarray(G))


def argmax_abs_correlation(D, r):
    """Index and value of the column of ``D`` best correlated with ``r``.

    Ties resolve to the smallest index.
    """
    return _backend.kernels.argmax_abs_corr(D, r)
