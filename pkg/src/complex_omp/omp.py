"""Orthogonal matching pursuit over complex dictionaries."""

from dataclasses import dataclass, field

import numpy as np

from .core import RESIDUAL_FLOOR, argmax_abs_correlation, as_cvector, lstsq, project_off
from .errors import DegenerateInputError, DimensionError, InconsistencyError

RESIDUAL = "residual"
NOISE_BOUND = "noise_bound"
ITERATIONS = "iterations"


@dataclass(frozen=True)
class StoppingRule:
    """When to stop selecting atoms.

    ``kind`` is one of ``"residual"`` (stop once ||r|| <= value),
    ``"noise_bound"`` (same test, value is the noise l2 bound b2) or
    ``"iterations"`` (stop after ``int(value)`` selections).
    ``max_iterations`` caps the number of selections; ``None`` means
    min(m, n) or, for fixed iterations, the requested count.
    """

    kind: str
    value: float
    max_iterations: int = None

    def __post_init__(self):
        if self.kind not in (RESIDUAL, NOISE_BOUND, ITERATIONS):
            raise ValueError(f"unknown stopping rule {self.kind!r}")
        if self.kind == ITERATIONS:
            if int(self.value) != self.value or self.value < 1:
                raise ValueError(f"iteration count must be a positive integer, got {self.value}")
        elif not self.value >= 0:
            raise ValueError(f"threshold must be non-negative, got {self.value}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")

    @classmethod
    def residual(cls, eps, max_iterations=None):
        return cls(RESIDUAL, float(eps), max_iterations)

    @classmethod
    def noise_bound(cls, b2, max_iterations=None):
        return cls(NOISE_BOUND, float(b2), max_iterations)

    @classmethod
    def iterations(cls, k, max_iterations=None):
        return cls(ITERATIONS, int(k), max_iterations)

    def cap(self, m, n):
        limit = min(m, n)
        cap = self.max_iterations
        if cap is None:
            cap = int(self.value) if self.kind == ITERATIONS else limit
        if cap > limit:
            raise ValueError(f"max_iterations {cap} exceeds min(m, n) = {limit}")
        if self.kind == ITERATIONS and int(self.value) > limit:
            raise ValueError(f"cannot run {int(self.value)} iterations with min(m, n) = {limit}")
        return cap

    def fired(self, iteration, residual_norm, slack=0.0):
        """``slack`` absorbs rounding in the computed residual norm."""
        if self.kind == ITERATIONS:
            return iteration >= int(self.value)
        return residual_norm <= self.value + slack


@dataclass(frozen=True, eq=False)
class SparseSignal:
    """Complex vector of length ``length`` that is nonzero only on ``support``."""

    length: int
    support: tuple
    values: np.ndarray

    def __post_init__(self):
        support = tuple(int(i) for i in self.support)
        values = np.asarray(self.values, dtype=np.complex128).reshape(-1).copy()
        if len(support) != values.size:
            raise DimensionError("support and values differ in length")
        if len(set(support)) != len(support):
            raise ValueError("duplicate support index")
        if any(i < 0 or i >= self.length for i in support):
            raise IndexError(f"support index outside [0, {self.length})")
        if np.any(values == 0):
            raise ValueError("sparse signal values must be nonzero")
        values.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_dense(cls, x):
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        idx = np.flatnonzero(x)
        return cls(x.size, tuple(idx), x[idx])

    @property
    def k(self):
        return len(self.support)

    def to_dense(self):
        x = np.zeros(self.length, dtype=np.complex128)
        x[list(self.support)] = self.values
        return x


@dataclass(eq=False)
class OmpResult:
    support: list
    coefficients: SparseSignal
    residual_norms: list
    converged: bool
    residual: np.ndarray = field(repr=False, default=None)

    @property
    def iterations(self):
        return len(self.support)

    def to_dict(self):
        c = self.coefficients
        return {
            "support": [int(i) for i in self.support],
            "coefficients": {
                "length": int(c.length),
                "support": [int(i) for i in c.support],
                "values_re": [float(v.real) for v in c.values],
                "values_im": [float(v.imag) for v in c.values],
            },
            "residual_norms": [float(r) for r in self.residual_norms],
            "converged": bool(self.converged),
        }


@dataclass(frozen=True)
class StepDiagnostics:
    step: int
    alpha1: float
    alpha2: float
    beta: float
    signal_residual_norm: float
    noise_residual_norm: float
    sufficient_condition_holds: bool
    selected_correct: bool


def _prepare(D, y):
    y = as_cvector(y, "y")
    if y.size != D.m:
        raise DimensionError(f"y has length {y.size}, dictionary has {D.m} rows")
    return y


def _omp_iter(D, y, rule):
    """Yield (support, residual) after each selection, starting with the empty support.

    Ends early once no atom correlates with the residual, since another
    selection could not reduce it.
    """
    cap = rule.cap(D.m, D.n)
    M = D.matrix
    support = []
    r = y.copy()
    yield support, r
    while len(support) < cap:
        t, val = argmax_abs_correlation(M, r)
        if val == 0.0:
            return
        support = support + [t]
        r = project_off(M[:, support], y)
        yield support, r


def omp_solve(D, y, rule):
    """Greedy sparse approximation of ``y`` over the atoms of ``D``.

    At each step the atom with the largest |psi^H r| joins the support (ties
    go to the smaller index) and the residual is recomputed as the part of
    ``y`` orthogonal to every selected atom. The stopping rule is tested on
    the initial residual too, so ``y`` already within the threshold yields
    an empty support. Threshold tests allow ``16 m eps ||y||`` for rounding
    in the residual, so a residual exactly at the threshold stops the run.
    Selection also ends when every atom is orthogonal to the residual; an
    exact fit (zero residual) then counts as converged.

    Raises
    ------
    SingularMatrixError
        If the selected atoms become linearly dependent.
    """
    y = _prepare(D, y)
    slack = RESIDUAL_FLOOR * y.size * float(np.linalg.norm(y))
    norms = []
    converged = False
    support, r = [], y
    for i, (support, r) in enumerate(_omp_iter(D, y, rule)):
        norms.append(float(np.linalg.norm(r)))
        if rule.fired(i, norms[-1], slack):
            converged = True
            break
    else:
        converged = norms[-1] == 0.0
    if support:
        coeffs, r = lstsq(D.matrix[:, support], y)
        keep = coeffs != 0
        x = SparseSignal(D.n, tuple(np.asarray(support)[keep]), coeffs[keep])
    else:
        x = SparseSignal(D.n, (), np.zeros(0, dtype=np.complex128))
    return OmpResult(list(support), x, norms, converged, residual=r)


def sweep_equivalence_check(D, r):
    """Best atom for ``r`` by two routes.

    Returns ``(argmax_index, argmin_index)``: the atom maximizing |psi^H r|
    and the atom whose one-term least-squares fit of ``r`` leaves the
    smallest error. For unit-norm atoms the two coincide.
    """
    r = _prepare(D, r)
    if not np.any(r):
        raise DegenerateInputError("residual is zero")
    by_corr, _ = argmax_abs_correlation(D.matrix, r)
    errors = np.empty(D.n)
    for j in range(D.n):
        res = lstsq(D.matrix[:, [j]], r)[1]
        errors[j] = np.vdot(res, res).real
    return by_corr, int(np.argmin(errors))


def diagnose(D, y_clean, noise, truth, rule):
    """Per-step selection margins for a run on ``y_clean + noise``.

    For the selected set before step t (projector P), with s = (I-P) Psi x and
    n = (I-P) noise: alpha1/alpha2 are the largest |psi^H s| over correct and
    incorrect atoms, beta the largest |psi^H n| over all atoms. A correct pick
    is guaranteed whenever alpha1 - alpha2 > 2 beta.
    """
    y_clean = _prepare(D, y_clean)
    noise = _prepare(D, noise)
    if truth.length != D.n:
        raise InconsistencyError(f"truth has length {truth.length}, dictionary has {D.n} atoms")
    x = truth.to_dense()
    M = D.matrix
    signal = M @ x
    scale = max(np.linalg.norm(y_clean), 1.0)
    if np.linalg.norm(signal - y_clean) > 1e-9 * scale:
        raise InconsistencyError("y_clean does not equal the dictionary times the truth")
    correct = np.zeros(D.n, dtype=bool)
    correct[list(truth.support)] = True

    result = omp_solve(D, y_clean + noise, rule)
    out = []
    for t, atom in enumerate(result.support):
        prev = result.support[:t]
        if prev:
            s_t = project_off(M[:, prev], signal)
            n_t = project_off(M[:, prev], noise)
        else:
            s_t, n_t = signal, noise
        cs = np.abs(M.conj().T @ s_t)
        a1 = float(cs[correct].max()) if correct.any() else 0.0
        a2 = float(cs[~correct].max()) if (~correct).any() else 0.0
        beta = float(np.abs(M.conj().T @ n_t).max())
        out.append(
            StepDiagnostics(
                step=t,
                alpha1=a1,
                alpha2=a2,
                beta=beta,
                signal_residual_norm=float(np.linalg.norm(s_t)),
                noise_residual_norm=float(np.linalg.norm(n_t)),
                sufficient_condition_holds=a1 - a2 > 2 * beta,
                selected_correct=bool(correct[atom]),
            )
        )
    return out
