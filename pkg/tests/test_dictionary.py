import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complex_omp.dictionary import (
    Dictionary,
    coherence_surface,
    mutual_incoherence,
    normalize_columns,
    write_surface_csv,
)
from complex_omp.errors import DegenerateAtomError, DimensionError
from complex_omp.gtd import build_gtd_dictionary, paper_preset

from .helpers import gaussian_dictionary, random_unitary
from .oracles import brute_force_coherence


def test_normalize_hand_column():
    D = normalize_columns([[3, 1], [4j, 0]])
    np.testing.assert_allclose(D.matrix[:, 0], [0.6, 0.8j], atol=1e-15)


def test_normalize_idempotent(rng):
    D = gaussian_dictionary(rng, 5, 7)
    again = normalize_columns(D.matrix)
    np.testing.assert_allclose(again.matrix, D.matrix, atol=1e-15)


def test_zero_column_rejected():
    with pytest.raises(DegenerateAtomError) as exc:
        normalize_columns([[1, 0], [0, 0]])
    assert exc.value.column == 1


def test_dictionary_requires_unit_norms():
    with pytest.raises(ValueError):
        Dictionary(np.array([[2.0, 0], [0, 1]]))


def test_dictionary_requires_two_atoms():
    with pytest.raises(DimensionError):
        Dictionary(np.array([[1.0], [0.0]]))


def test_matrix_is_read_only(rng):
    D = gaussian_dictionary(rng, 3, 4)
    with pytest.raises(ValueError):
        D.matrix[0, 0] = 0


def test_orthonormal_basis_has_zero_coherence(rng):
    D = Dictionary(random_unitary(rng, 6))
    assert D.mu == pytest.approx(0.0, abs=1e-14)


def test_phase_rotated_duplicate():
    psi = np.array([1, 1j, -1]) / math.sqrt(3)
    D = Dictionary(np.column_stack([psi, np.exp(0.7j) * psi, [1, 0, 0]]))
    assert D.mu == pytest.approx(1.0, abs=1e-15)
    assert D.coherence.argmax_pair == (0, 1)


def test_hand_pair():
    s = 1 / math.sqrt(2)
    D = Dictionary(np.array([[s, s], [s, 1j * s]]))
    assert D.mu == pytest.approx(math.sqrt(2) / 2, abs=1e-15)


def test_smallest_pair_on_ties():
    D = Dictionary(np.array([[1, 0, 0.6], [0, 1, 0.8]]))
    # |<1,3>| = 0.6, |<2,3>| = 0.8
    assert D.coherence.argmax_pair == (1, 2)
    E = Dictionary(np.array([[1, 0, math.sqrt(0.5)], [0, 1, math.sqrt(0.5)]]))
    assert E.coherence.argmax_pair == (0, 2)


def test_matches_brute_force(rng):
    for _ in range(10):
        D = gaussian_dictionary(rng, 4, 6)
        mu, pair = brute_force_coherence(D.matrix.tolist())
        assert D.mu == pytest.approx(mu, abs=1e-14)
        assert D.coherence.argmax_pair == pair


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_coherence_invariant_under_unitary_and_phases(seed):
    rng = np.random.default_rng(seed)
    D = gaussian_dictionary(rng, 4, 6)
    phases = np.exp(2j * np.pi * rng.random(6))
    Q = random_unitary(rng, 4)
    E = Dictionary(Q @ D.matrix * phases)
    assert E.mu == pytest.approx(D.mu, abs=1e-12)
    assert 0.0 <= D.mu <= 1.0


def test_gram_symmetric_unit_diagonal(rng):
    G = mutual_incoherence(gaussian_dictionary(rng, 5, 8)).gram_abs
    np.testing.assert_allclose(np.diag(G), 1.0, atol=1e-14)
    np.testing.assert_array_equal(G, G.T)


def test_surface_orthonormal_pair(tmp_path):
    D = Dictionary(np.eye(2, dtype=complex))
    surface, slice_rows = coherence_surface(D)
    assert len(surface) == 4
    assert sorted(round(r[4]) for r in surface) == [0, 0, 1, 1]
    assert [r[1] for r in slice_rows] == [1, 1]
    out = tmp_path / "s.csv"
    write_surface_csv(surface, out)
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["i", "j", "label_i", "label_j", "coherence"]
    assert len(rows) == 5


def test_surface_reference_out_of_range(rng):
    with pytest.raises(IndexError):
        coherence_surface(gaussian_dictionary(rng, 3, 4), reference_atom=4)


def test_gtd_surface_decays_with_distance():
    D = build_gtd_dictionary(paper_preset())
    surface, slice_rows = coherence_surface(D)
    assert len(surface) == D.n**2
    ref = D.n // 2
    assert all(abs(r[4] - 1) < 1e-12 for r in surface if r[0] == r[1])
    # within the mainlobe, coherence falls off as atoms move apart
    near = [r[4] for r in sorted(slice_rows, key=lambda r: r[0]) if 0 <= r[0] - ref <= 8]
    assert all(a > b for a, b in zip(near, near[1:]))
    assert slice_rows[ref][3] == pytest.approx(2.5)
