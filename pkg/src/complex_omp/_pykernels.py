"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module. Inputs
are assumed to be validated by the caller (``complex_omp.core``): complex128
arrays with matching shapes.
"""

import numpy as np

from .errors import SingularMatrixError

NAME = "python"

RANK_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def argmax_abs_corr(D, r):
    """Index and value of max_j |d_j^H r|, first index on ties."""
    corr = np.abs(D.conj().T @ r)
    j = int(np.argmax(corr))
    return j, float(corr[j])


def _householder(x):
    """Reflector (I - tau w w^H) mapping x to alpha e_1, with w[0] = 1 and real tau.

    Returns ``(None, 0, x[0])`` when x is already a multiple of e_1.
    """
    x0 = x[0]
    tail = x[1:]
    tail2 = np.sum(tail.real**2 + tail.imag**2)
    if tail2 == 0.0:
        return None, 0.0, x0
    ax0 = abs(x0)
    norm = np.sqrt(ax0 * ax0 + tail2)
    phase = x0 / ax0 if ax0 != 0 else 1.0 + 0.0j
    alpha = -phase * norm
    w = x / (x0 - alpha)
    w[0] = 1.0
    return w, (norm + ax0) / norm, alpha


def qr_lstsq(A, y, rtol=RANK_RTOL):
    """Least squares via Householder QR with column-norm pivoting.

    Returns ``(coeffs, residual)``. The residual is formed as Q [0; (Q^H y)[n:]]
    so it is orthogonal to range(A) to working precision regardless of the
    conditioning of A.
    """
    m, n = A.shape
    R = np.array(A, dtype=np.complex128, copy=True)
    b = np.array(y, dtype=np.complex128, copy=True)
    perm = np.arange(n)
    reflectors = []
    r00 = 0.0
    for j in range(n):
        tail = R[j:, j:]
        norms = np.sum(tail.real**2 + tail.imag**2, axis=0)
        p = j + int(np.argmax(norms))
        if p != j:
            R[:, [j, p]] = R[:, [p, j]]
            perm[[j, p]] = perm[[p, j]]
        w, tau, alpha = _householder(R[j:, j])
        if j == 0:
            r00 = abs(alpha)
        if abs(alpha) <= rtol * r00 or r00 == 0.0:
            raise SingularMatrixError(int(perm[j]))
        if w is not None:
            R[j:, j:] -= tau * np.outer(w, w.conj() @ R[j:, j:])
            b[j:] -= tau * w * (w.conj() @ b[j:])
        R[j, j] = alpha
        R[j + 1:, j] = 0.0
        reflectors.append((w, tau))

    z = np.zeros(n, dtype=np.complex128)
    for i in range(n - 1, -1, -1):
        z[i] = (b[i] - R[i, i + 1:n] @ z[i + 1:n]) / R[i, i]
    coeffs = np.empty(n, dtype=np.complex128)
    coeffs[perm] = z

    res = b.copy()
    res[:n] = 0.0
    for j in range(n - 1, -1, -1):
        w, tau = reflectors[j]
        if w is not None:
            res[j:] -= tau * w * (w.conj() @ res[j:])
    return coeffs, res


def jacobi_min_eig(G):
    """Smallest eigenvalue of a Hermitian matrix by cyclic Jacobi rotations."""
    A = np.array(G, dtype=np.complex128, copy=True)
    n = A.shape[0]
    if n == 1:
        return float(A[0, 0].real)
    scale = np.sqrt(np.sum(np.abs(A) ** 2))
    if scale == 0.0:
        return 0.0
    tol = 1e-15 * scale
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(A[offdiag]) ** 2))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                # make A[p, q] real positive with a diagonal phase similarity
                ph = apq / mag
                A[:, q] *= ph.conjugate()
                A[q, :] *= ph
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
    return float(np.min(np.diag(A).real))
