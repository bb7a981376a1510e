"""Exact-recovery certificates for OMP on complex data.

Each certificate is a pure function of the dictionary coherence, the
sparsity (and coefficients) of the target, and the noise model. Nothing here
runs the solver.

Regimes
-------
noiseless       mu < 1/(2k-1) alone guarantees exact recovery with eps0 = 0.
bounded_noise   ||n|| <= b2: every |x_i| > 2 b2 / (1 - (2k-1) mu), stop at ||r|| <= b2.
cawgn_b1/b2     n ~ CN(0, sigma^2 I): replace b2 by a radius that contains the
                noise with known probability.
"""

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import lstsq, min_eigen_hermitian, project_off
from .errors import CertificateInapplicableError, DomainError

UNBOUNDED = math.inf

NOISELESS = "noiseless"
BOUNDED_NOISE = "bounded_noise"
CAWGN_B1 = "cawgn_b1"
CAWGN_B2 = "cawgn_b2"


@dataclass(frozen=True)
class ErcReport:
    mu: float
    k: int
    regime: dict
    mip_condition_holds: bool
    coefficient_threshold: float
    stopping_radius: float
    success_probability_lower_bound: float
    certified: bool
    failed_clause: str = None

    def to_dict(self):
        # an inapplicable threshold is infinite; JSON has no inf, so it becomes null
        d = asdict(self)
        for key in ("coefficient_threshold", "stopping_radius"):
            if math.isinf(d[key]):
                d[key] = None
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def mip_holds(mu, k):
    """True when mu < 1/(2k-1)."""
    return (2 * k - 1) * mu < 1.0


def max_recoverable_sparsity(mu):
    """Largest k with k < (1 + 1/mu)/2, or ``UNBOUNDED`` (inf) for mu == 0."""
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"coherence must lie in [0, 1], got {mu}")
    if mu == 0.0:
        return UNBOUNDED
    k = int(math.floor((1.0 + 1.0 / mu) / 2.0))
    # settle rounding at the boundary on the exact strict inequality
    while k > 0 and not mip_holds(mu, k):
        k -= 1
    while mip_holds(mu, k + 1):
        k += 1
    return k


def _mu_of(D):
    return float(D.mu)


def certify_noiseless(D, k):
    if not 1 <= k <= D.n:
        raise ValueError(f"k must lie in [1, {D.n}], got {k}")
    mu = _mu_of(D)
    ok = k <= max_recoverable_sparsity(mu)
    return ErcReport(
        mu=mu,
        k=int(k),
        regime={"kind": NOISELESS},
        mip_condition_holds=mip_holds(mu, k),
        coefficient_threshold=0.0,
        stopping_radius=0.0,
        success_probability_lower_bound=1.0,
        certified=ok,
        failed_clause=None if ok else "mip",
    )


def bounded_noise_threshold(mu, k, b2):
    """Minimum |x_i| (strict) for exact recovery under ||n|| <= b2."""
    if b2 < 0:
        raise DomainError(f"noise bound must be non-negative, got {b2}")
    if not mip_holds(mu, k):
        raise CertificateInapplicableError(f"mu = {mu} violates mu < 1/(2k-1) for k = {k}")
    return 2.0 * b2 / (1.0 - (2 * k - 1) * mu)


def _coefficient_magnitudes(x):
    if isinstance(x, (int, np.integer)):
        return int(x), None
    return x.k, np.abs(np.asarray(x.values))


def certify_bounded_noise(D, x, b2):
    """Certificate for ||n|| <= b2 with stopping rule ||r|| <= b2.

    ``x`` is a SparseSignal, or just the sparsity k; with k alone the report
    is certified when the coherence condition holds and ``coefficient_threshold``
    is the (strict) bound any coefficient must exceed.
    """
    k, mags = _coefficient_magnitudes(x)
    mu = _mu_of(D)
    return _noisy_report(mu, k, mags, b2, {"kind": BOUNDED_NOISE, "b2": float(b2)}, 1.0, strict=True)


def _noisy_report(mu, k, mags, radius, regime, prob, strict):
    mip = mip_holds(mu, k)
    if not mip:
        return ErcReport(mu, k, regime, False, math.inf, radius, prob, False, "mip")
    thr = 2.0 * radius / (1.0 - (2 * k - 1) * mu)
    ok, clause = True, None
    if mags is not None:
        big = mags > thr if strict else mags >= thr
        if not np.all(big):
            ok, clause = False, "coefficient_threshold"
    return ErcReport(mu, k, regime, True, thr, radius, prob, ok, clause)


def b1_radius(sigma, m):
    """sigma * sqrt(m + sqrt(2 m ln 2m))."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return sigma * math.sqrt(m + math.sqrt(2 * m * math.log(2 * m)))


def b2_radius(sigma, m):
    """sigma * sqrt(m + sqrt(m ln m) / 2)."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    return sigma * math.sqrt(m + 0.5 * math.sqrt(m * math.log(m)))


def _clamp01(p):
    return min(1.0, max(0.0, p))


def prob_lower_bound_b1(m):
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return _clamp01(1.0 - 1.0 / (2.0 * math.sqrt(math.pi * math.log(2 * m))))


def prob_lower_bound_b2(m):
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    return _clamp01(1.0 - math.sqrt(2.0 / (math.pi * math.log(m))))


def certify_cawgn(D, x, sigma, variant="b1"):
    """Certificate for complex white Gaussian noise of per-entry variance sigma**2.

    The noise is treated as bounded by the B1 or B2 radius, which holds with
    the returned probability; coefficients must satisfy |x_i| >= threshold.
    ``x`` may be a SparseSignal or the sparsity k (see
    :func:`certify_bounded_noise`).
    """
    k, mags = _coefficient_magnitudes(x)
    m = D.m
    if variant == "b1":
        radius, prob, kind = b1_radius(sigma, m), prob_lower_bound_b1(m), CAWGN_B1
    elif variant == "b2":
        radius, prob, kind = b2_radius(sigma, m), prob_lower_bound_b2(m), CAWGN_B2
    else:
        raise ValueError(f"variant must be 'b1' or 'b2', got {variant!r}")
    mu = _mu_of(D)
    regime = {"kind": kind, "sigma": float(sigma)}
    return _noisy_report(mu, k, mags, radius, regime, prob, strict=False)


def lemma1_eigen_gap(D, S, c_t):
    """Smallest eigenvalues of the Gram of the true atoms and of its deflation.

    ``lam_full`` is for Psi(S)^H Psi(S); ``lam_deflated`` for
    Psi(u)^H (I - P) Psi(u) with u = S minus c_t and P the projector onto
    Psi(c_t). Interlacing gives lam_full <= lam_deflated.
    """
    S = [int(i) for i in S]
    c_t = [int(i) for i in c_t]
    if not set(c_t) < set(S):
        raise ValueError("c_t must be a proper subset of S")
    M = D.matrix
    full = M[:, S]
    lstsq(full, full[:, 0])  # raises SingularMatrixError when Psi(S) is rank deficient
    lam_full = min_eigen_hermitian(full.conj().T @ full)
    u = [i for i in S if i not in set(c_t)]
    if c_t:
        A = M[:, c_t]
        W = np.column_stack([project_off(A, M[:, j]) for j in u])
    else:
        W = M[:, u]
    lam_deflated = min_eigen_hermitian(W.conj().T @ W)
    return lam_full, lam_deflated


def chi_square_tail_bound(m, lam):
    """Upper bound on P(Y > (1 + lam) 2m) for Y ~ chi-square with 2m degrees of freedom."""
    if not lam > 0:
        raise DomainError(f"lam must be positive, got {lam}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return min(1.0, 1.0 / (lam * math.sqrt(2.0 * math.pi * m)))
