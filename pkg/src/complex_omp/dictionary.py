"""Column-normalized complex dictionaries and their mutual coherence."""

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import as_cmatrix
from .errors import DegenerateAtomError, DimensionError

NORM_TOL = 1e-12
ZERO_COLUMN_TOL = 1e-14


@dataclass(frozen=True)
class CoherenceReport:
    mu: float
    argmax_pair: tuple
    gram_abs: np.ndarray


@dataclass(frozen=True, eq=False)
class Dictionary:
    """An m x n complex matrix whose columns (atoms) have unit l2 norm.

    ``labels`` optionally attaches a physical coordinate to each atom, e.g.
    the range in meters for GTD dictionaries.
    """

    matrix: np.ndarray
    labels: np.ndarray = None

    def __post_init__(self):
        M = as_cmatrix(self.matrix, "dictionary")
        m, n = M.shape
        if n < 2:
            raise DimensionError(f"dictionary needs at least 2 atoms, got {n}")
        norms = np.linalg.norm(M, axis=0)
        bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
        if bad.size:
            raise ValueError(
                f"atom {bad[0]} has norm {norms[bad[0]]!r}; use normalize_columns()"
            )
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.float64).copy()
            if lab.shape != (n,):
                raise DimensionError(f"expected {n} atom labels, got shape {lab.shape}")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def m(self):
        return self.matrix.shape[0]

    @property
    def n(self):
        return self.matrix.shape[1]

    @property
    def shape(self):
        return self.matrix.shape

    def atoms(self, idx):
        return self.matrix[:, list(idx)]

    @cached_property
    def coherence(self):
        return mutual_incoherence(self)

    @property
    def mu(self):
        return self.coherence.mu


def normalize_columns(M, labels=None):
    """Divide every column of ``M`` by its l2 norm and wrap it as a Dictionary."""
    M = as_cmatrix(M)
    norms = np.linalg.norm(M, axis=0)
    zero = np.flatnonzero(norms <= ZERO_COLUMN_TOL)
    if zero.size:
        raise DegenerateAtomError(int(zero[0]))
    return Dictionary(M / norms, labels)


def mutual_incoherence(D):
    """Largest |psi_i^H psi_j| over distinct atoms, plus the full |Gram| matrix."""
    M = D.matrix
    gram_abs = np.abs(M.conj().T @ M)
    gram_abs = 0.5 * (gram_abs + gram_abs.T)
    off = gram_abs.copy()
    np.fill_diagonal(off, -np.inf)
    mu = float(off.max())
    # row-major argmax over the upper triangle gives the lexicographically smallest pair
    iu = np.triu_indices(D.n, k=1)
    flat = int(np.argmax(off[iu]))
    pair = (int(iu[0][flat]), int(iu[1][flat]))
    mu = float(min(max(mu, 0.0), 1.0))
    gram_abs.setflags(write=False)
    return CoherenceReport(mu=mu, argmax_pair=pair, gram_abs=gram_abs)


def coherence_surface(D, reference_atom=None):
    """Pairwise coherence table for plotting.

    Returns ``(surface, slice_rows)``: ``surface`` holds one
    ``(i, j, label_i, label_j, coherence)`` tuple for every ordered pair
    (n**2 rows), ``slice_rows`` the subset with ``j == reference_atom``
    (default: the middle atom).
    """
    G = D.coherence.gram_abs
    n = D.n
    labels = D.labels if D.labels is not None else np.arange(n, dtype=np.float64)
    ref = n // 2 if reference_atom is None else int(reference_atom)
    if not 0 <= ref < n:
        raise IndexError(f"reference atom {ref} outside [0, {n})")
    surface = [
        (i, j, float(labels[i]), float(labels[j]), float(G[i, j]))
        for i in range(n)
        for j in range(n)
    ]
    slice_rows = [row for row in surface if row[1] == ref]
    return surface, slice_rows


SURFACE_HEADER = ("i", "j", "label_i", "label_j", "coherence")


def write_surface_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SURFACE_HEADER)
        for i, j, li, lj, c in rows:
            w.writerow((i, j, repr(li), repr(lj), repr(c)))
