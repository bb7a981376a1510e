"""Orthogonal matching pursuit for complex dictionaries, exact-recovery
certificates, and a stepped-frequency (GTD) radar simulation harness."""

from ._backend import get_backend, set_backend
from .core import hermitian_inner, lstsq, min_eigen_hermitian, project_off
from .dictionary import (
    CoherenceReport,
    Dictionary,
    coherence_surface,
    mutual_incoherence,
    normalize_columns,
)
from .erc import (
    UNBOUNDED,
    ErcReport,
    b1_radius,
    b2_radius,
    bounded_noise_threshold,
    certify_bounded_noise,
    certify_cawgn,
    certify_noiseless,
    chi_square_tail_bound,
    lemma1_eigen_gap,
    max_recoverable_sparsity,
    prob_lower_bound_b1,
    prob_lower_bound_b2,
)
from .gtd import (
    GtdScene,
    add_cawgn,
    build_gtd_dictionary,
    paper_preset,
    synthesize_measurement,
)
from .omp import (
    OmpResult,
    SparseSignal,
    StepDiagnostics,
    StoppingRule,
    diagnose,
    omp_solve,
    sweep_equivalence_check,
)

__version__ = "0.1.0"
