import numpy as np

from complex_omp.dictionary import normalize_columns


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, m):
    Q, R = np.linalg.qr(crandn(rng, m, m))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def gaussian_dictionary(rng, m, n):
    return normalize_columns(crandn(rng, m, n))


def union_dictionary(rng, m, n):
    """Random rotation of n columns from [identity, unitary DFT]; coherence is 1/sqrt(m)."""
    F = np.exp(-2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m) / np.sqrt(m)
    basis = np.hstack([np.eye(m), F])
    cols = rng.permutation(2 * m)[:n]
    return normalize_columns(random_unitary(rng, m) @ basis[:, cols])


def planted(rng, n, k, magnitude=None):
    support = np.sort(rng.choice(n, size=k, replace=False))
    if magnitude is None:
        vals = crandn(rng, k)
        vals[np.abs(vals) < 0.1] += 0.5
    else:
        vals = magnitude * np.exp(2j * np.pi * rng.random(k))
    x = np.zeros(n, dtype=complex)
    x[support] = vals
    return x, support
