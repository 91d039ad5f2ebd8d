"""Norm-reducing Jacobi-type diagonalization for arbitrary square matrices."""

from .diagnostics import BlockPartition, TraceRecord, detect_blocks
from .matrix_core import (
    commutator,
    frobenius_norm,
    off_norm,
    split_hermitian,
    vec_offdiag,
)
from .pivot import (
    PivotOrdering,
    random_sg_ordering,
    random_sp_ordering,
    serial_ordering,
    transform_ordering,
    validate_ordering,
)
from .solver import SolverOptions, SolverResult, run
from .transforms import (
    Rotation,
    Shear,
    apply_rotation,
    apply_shear,
    compute_rotation,
    compute_rotation_real,
    compute_shear,
)
from .verification import (
    char_poly,
    eigenvalues_oracle,
    jacobi_annihilator,
    jacobi_operator,
    known_spectrum_matrix,
    poly_roots,
    spectral_norm,
)

__all__ = [
    "BlockPartition", "TraceRecord", "detect_blocks",
    "commutator", "frobenius_norm", "off_norm", "split_hermitian", "vec_offdiag",
    "PivotOrdering", "random_sg_ordering", "random_sp_ordering", "serial_ordering",
    "transform_ordering", "validate_ordering",
    "SolverOptions", "SolverResult", "run",
    "Rotation", "Shear", "apply_rotation", "apply_shear",
    "compute_rotation", "compute_rotation_real", "compute_shear",
    "char_poly", "eigenvalues_oracle", "jacobi_annihilator", "jacobi_operator",
    "known_spectrum_matrix", "poly_roots", "spectral_norm",
]

__version__ = "0.1.0"
