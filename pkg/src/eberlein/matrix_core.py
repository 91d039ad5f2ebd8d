"""Dense matrix functionals used throughout the library.

All matrices are plain numpy arrays (square, n >= 2, float64 or complex128).
The off-diagonal vectorization fixes one enumeration for the whole library:
pairs (i, j), i < j, taken column-major over the strict upper triangle, with
the (i, j) entry immediately followed by the (j, i) entry.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolation


def validate_matrix(M, name: str = "matrix") -> np.ndarray:
    """Check squareness (n >= 2) and finiteness, return the array unchanged."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractViolation(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] < 2:
        raise ContractViolation(f"{name} must be at least 2x2, got n={M.shape[0]}")
    if not np.isfinite(M).all():
        raise ContractViolation(f"{name} contains non-finite entries")
    return M


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M)))


def off_norm(M) -> float:
    """Frobenius norm of the strictly off-diagonal part."""
    M = np.array(M)
    np.fill_diagonal(M, 0)
    return float(np.linalg.norm(M))


def split_hermitian(A) -> tuple[np.ndarray, np.ndarray]:
    """Return (B, Z) with B = (A + A*)/2 Hermitian, Z = (A - A*)/2 skew-Hermitian."""
    A = np.asarray(A)
    Ah = A.conj().T
    return (A + Ah) / 2, (A - Ah) / 2


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A)
    return (A + A.conj().T) / 2


def commutator(A) -> np.ndarray:
    """C(A) = A A* - A* A. Zero exactly when A is normal."""
    A = np.asarray(A)
    Ah = A.conj().T
    return A @ Ah - Ah @ A


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, i: int, j: int) -> int:
    """Column-major position of the pair (i, j), 0-based, i < j."""
    if not 0 <= i < j < n:
        raise ContractViolation(f"bad pair ({i}, {j}) for n={n}")
    return j * (j - 1) // 2 + i


def vec_position(n: int, i: int, j: int) -> int:
    """Position tau(i, j) of the off-diagonal element (i, j) in the vectorization."""
    if i < j:
        return 2 * pair_index(n, i, j)
    return 2 * pair_index(n, j, i) + 1


def offdiag_positions(n: int) -> list[tuple[int, int]]:
    """Matrix positions in vectorization order, length 2N."""
    out = []
    for j in range(1, n):
        for i in range(j):
            out.append((i, j))
            out.append((j, i))
    return out


def vec_offdiag(B) -> np.ndarray:
    """Vectorize the off-diagonal part of B; Euclidean norm equals off_norm(B)."""
    B = validate_matrix(B, "B")
    n = B.shape[0]
    v = np.empty(2 * num_pairs(n), dtype=B.dtype)
    for k, (i, j) in enumerate(offdiag_positions(n)):
        v[k] = B[i, j]
    return v


def scatter_offdiag(v, n: int) -> np.ndarray:
    """Inverse of vec_offdiag onto a zero-diagonal matrix."""
    v = np.asarray(v)
    if v.shape != (2 * num_pairs(n),):
        raise ContractViolation(f"vector length {v.shape} does not match n={n}")
    M = np.zeros((n, n), dtype=v.dtype)
    for k, (i, j) in enumerate(offdiag_positions(n)):
        M[i, j] = v[k]
    return M
