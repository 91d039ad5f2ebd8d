"""Independent oracles and bound checkers.

The eigenvalue oracle (characteristic polynomial via the Faddeev-LeVerrier
recurrence, roots via Durand-Kerner) deliberately shares no machinery with
the iteration it cross-checks, and is capped at desk scale (n <= 8).
Also here: the annihilator/operator objects acting on vectorized
off-diagonals, a power-iteration spectral norm, seeded test matrices with a
known spectrum, and the per-step residual bound report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transforms
from .errors import ContractViolation, DegeneracyError, IterationBudgetError
from .matrix_core import (
    frobenius_norm,
    num_pairs,
    offdiag_positions,
    validate_matrix,
    vec_offdiag,
)
from .pivot import PivotOrdering
from .transforms import Rotation

ORACLE_MAX_N = 8


@dataclass(frozen=True)
class PolyCoefficients:
    """Monic polynomial, coeffs[0] = 1, highest degree first."""

    coeffs: tuple[complex, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in self.coeffs:
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class JacobiAnnihilator:
    n: int
    p: int
    q: int
    matrix: np.ndarray  # 2N x 2N


@dataclass(frozen=True)
class ResidualReport:
    norm_E_sq: float
    norm_F_sq: float
    bound: float
    satisfied: bool


def char_poly(A) -> PolyCoefficients:
    """Characteristic polynomial by the Faddeev-LeVerrier recurrence."""
    A = validate_matrix(A, "A")
    n = A.shape[0]
    if n > ORACLE_MAX_N:
        raise ContractViolation(f"oracle is desk-scale only (n <= {ORACLE_MAX_N}), got n={n}")
    A = A.astype(np.complex128)
    coeffs = [1.0 + 0.0j]
    M = np.zeros_like(A)
    c = 1.0 + 0.0j
    for k in range(1, n + 1):
        M = A @ (M + c * np.eye(n))
        c = -np.trace(M) / k
        coeffs.append(complex(c))
    return PolyCoefficients(tuple(coeffs))


def poly_roots(p: PolyCoefficients, max_sweeps: int = 1000, move_tol: float = 1e-13):
    """All roots by Durand-Kerner simultaneous iteration."""
    if p.degree < 1:
        raise ContractViolation("need degree >= 1")
    if p.coeffs[0] != 1:
        raise ContractViolation("polynomial must be monic")
    n = p.degree
    r = 1.0 + max(abs(c) for c in p.coeffs)
    roots = np.array(
        [r * np.exp(1j * (2 * np.pi * k / n + 0.4)) for k in range(n)], dtype=np.complex128
    )
    for _ in range(max_sweeps):
        moved = 0.0
        for i in range(n):
            denom = np.prod(roots[i] - np.delete(roots, i)) if n > 1 else 1.0
            if denom == 0:
                denom = np.finfo(float).eps
            delta = p(roots[i]) / denom
            roots[i] -= delta
            moved = max(moved, abs(delta))
        if moved < move_tol:
            break
    else:
        # multiple roots keep the estimates jittering at rounding level long
        # after the residual target is met; accept on the residual instead
        resid_tol = 1e-10 * (1.0 + max(abs(c) for c in p.coeffs))
        if any(abs(p(complex(r))) > resid_tol for r in roots):
            raise IterationBudgetError(
                "root iteration did not converge", estimate=list(roots)
            )
    return list(roots)


def eigenvalues_oracle(A) -> list[complex]:
    return poly_roots(char_poly(A))


def random_unitary(n: int, rng) -> np.ndarray:
    """Orthonormalize a random complex Gaussian matrix; two MGS passes."""
    for _ in range(5):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        Q = _mgs(_mgs(G))
        if Q is not None and frobenius_norm(Q.conj().T @ Q - np.eye(n)) <= 1e-13:
            return Q
    raise DegeneracyError("could not draw a well-conditioned random matrix")


def _mgs(G):
    Q = G.astype(np.complex128).copy()
    n = Q.shape[0]
    for j in range(n):
        for i in range(j):
            Q[:, j] -= np.vdot(Q[:, i], Q[:, j]) * Q[:, i]
        nrm = np.linalg.norm(Q[:, j])
        if nrm < 1e-12:
            return None
        Q[:, j] /= nrm
    return Q


def known_spectrum_matrix(diag_T, upper_scale: float, seed: int):
    """A = Q* T Q with T upper triangular of prescribed diagonal; exact spectrum known."""
    diag_T = [complex(x) for x in diag_T]
    if not diag_T:
        raise ContractViolation("diag_T must be nonempty")
    if upper_scale < 0:
        raise ContractViolation("upper_scale must be nonnegative")
    n = len(diag_T)
    rng = np.random.Generator(np.random.PCG64(seed))
    T = np.diag(np.array(diag_T, dtype=np.complex128))
    iu = np.triu_indices(n, k=1)
    T[iu] = upper_scale * (rng.standard_normal(len(iu[0])) + 1j * rng.standard_normal(len(iu[0])))
    Q = random_unitary(n, rng)
    A = Q.conj().T @ T @ Q
    return A, list(diag_T)


def residual_report(A_k, A_tilde, A_next, B_next, B_tilde, c_pq_abs: float, n: int) -> ResidualReport:
    """E/F residual norms of one step against the 1.5 n^2 |c~_pq| bound."""
    norm_E_sq = frobenius_norm(np.asarray(A_next) - np.asarray(A_tilde)) ** 2
    norm_F_sq = frobenius_norm(np.asarray(B_next) - np.asarray(B_tilde)) ** 2
    bound = 1.5 * n * n * c_pq_abs
    slack = 1e-10 * frobenius_norm(A_k) ** 2
    satisfied = norm_E_sq <= bound + slack and norm_F_sq <= bound + slack
    return ResidualReport(norm_E_sq, norm_F_sq, bound, satisfied)


def jacobi_annihilator(n: int, p: int, q: int, rot: Rotation) -> JacobiAnnihilator:
    """2N x 2N matrix realizing vec(B) -> vec of R*BR with the pivot entries zeroed.

    Built column-by-column by probing with off-diagonal unit matrices; the
    pivot-entry zeroing makes the rule independent of the diagonal of B.
    """
    if not 0 <= p < q < n:
        raise ContractViolation(f"pivot ({p}, {q}) out of range for n={n}")
    if abs(rot.sin_phi) > rot.cos_phi + 1e-14:
        raise ContractViolation("annihilator requires |phi| <= pi/4")
    positions = offdiag_positions(n)
    m = 2 * num_pairs(n)
    M = np.zeros((m, m), dtype=np.complex128)
    for col, (i, j) in enumerate(positions):
        E = np.zeros((n, n), dtype=np.complex128)
        E[i, j] = 1.0
        transforms.apply_rotation(E, Rotation(p, q, rot.alpha, rot.cos_phi, rot.sin_phi))
        E[p, q] = 0.0
        E[q, p] = 0.0
        M[:, col] = vec_offdiag(E)
    return JacobiAnnihilator(n, p, q, M)


def jacobi_operator(ordering: PivotOrdering, rotations) -> np.ndarray:
    """Ordered product of annihilators over one sweep, last pivot leftmost."""
    rotations = list(rotations)
    if len(rotations) != len(ordering.pairs):
        raise ContractViolation(
            f"need {len(ordering.pairs)} rotations, got {len(rotations)}"
        )
    m = 2 * num_pairs(ordering.n)
    J = np.eye(m, dtype=np.complex128)
    for (p, q), rot in zip(ordering.pairs, rotations):
        if (rot.p, rot.q) != (p, q):
            raise ContractViolation(
                f"rotation pivot ({rot.p}, {rot.q}) does not match ordering pair ({p}, {q})"
            )
        J = jacobi_annihilator(ordering.n, p, q, rot).matrix @ J
    return J


def spectral_norm(
    M, seed: int = 0, max_iter: int = 10000, stall_tol: float = 1e-12, block: int = 4
) -> float:
    """Largest singular value by block power iteration on M*M.

    A single power vector converges at the gap between the top two singular
    values, which for sweep operators can be zero; iterating a small
    orthonormal block instead steps past such clusters while keeping the
    seeded-start / budget / stall protocol.
    """
    M = np.asarray(M)
    if not np.isfinite(M).all():
        raise ContractViolation("matrix has non-finite entries")
    if M.size == 0 or not M.any():
        return 0.0
    dim = M.shape[1]
    b = min(block, dim)
    rng = np.random.Generator(np.random.PCG64(seed))
    V = rng.standard_normal((dim, b)) + 1j * rng.standard_normal((dim, b))
    V, _ = np.linalg.qr(V)
    Mh = M.conj().T
    prev = 0.0
    for _ in range(max_iter):
        W = Mh @ (M @ V)
        ritz = np.linalg.eigvalsh(V.conj().T @ W)  # Rayleigh quotients of M*M
        est = float(np.sqrt(max(ritz[-1], 0.0)))
        V, _ = np.linalg.qr(W)
        if abs(est - prev) <= stall_tol * max(1.0, est):
            return est
        prev = est
    raise IterationBudgetError("power iteration stalled out of budget", estimate=float(prev))
