"""Pivot-plane transformations of one norm-reducing step.

Each step applies two elementary similarities to the iterate: a unitary plane
rotation chosen to annihilate the pivot entry of the Hermitian part, followed
by a unimodular hyperbolic shear chosen to shrink the Frobenius norm.  Both
come in a complex and a real variant.

Rotation pivot block (complex):  [[cos phi, -e^{i alpha} sin phi],
                                  [e^{-i alpha} sin phi, cos phi]]
Shear pivot block (complex):     [[cosh psi, -i e^{i beta} sinh psi],
                                  [i e^{-i beta} sinh psi, cosh psi]]

The real variants fix alpha = pi and beta = pi/2, which makes both blocks
real:  [[c, s], [-s, c]]  and  [[ch, sh], [sh, ch]].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DegeneracyError
from .matrix_core import frobenius_norm, validate_matrix

# pivot entries of the commutator below this fraction of ||A||_F^2 are noise;
# the guaranteed norm reduction is then not worth a shear
SHEAR_SKIP_REL = 1e-15

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class Rotation:
    """Plane rotation parameters for pivot (p, q), 0-based, p < q."""

    p: int
    q: int
    alpha: float
    cos_phi: float
    sin_phi: float
    exchanged: bool = False  # diagonal-ordering variant; |phi| <= pi/4 waived


@dataclass(frozen=True)
class Shear:
    """Hyperbolic shear parameters for pivot (p, q), 0-based, p < q."""

    p: int
    q: int
    beta: float
    cosh_psi: float
    sinh_psi: float
    delta_pred: float  # predicted drop of ||A||_F^2


@dataclass(frozen=True)
class ShearWorkspace:
    """Intermediate quantities of the norm-drop expansion."""

    g: float
    h: float
    l: complex
    d_tilde: complex
    xi_tilde: complex
    e_tilde: float  # real-case only, a_pq - a_qp
    c_pq: complex  # pivot entry of the commutator of the rotated iterate


def identity_rotation(p: int, q: int, alpha: float = 0.0) -> Rotation:
    return Rotation(p, q, alpha, 1.0, 0.0)


def identity_shear(p: int, q: int, beta: float = 0.0) -> Shear:
    return Shear(p, q, beta, 1.0, 0.0, 0.0)


def _check_pivot(n: int, p: int, q: int) -> None:
    if not 0 <= p < q < n:
        raise ContractViolation(f"pivot ({p}, {q}) out of range for n={n}")


def _half_angle(two_bpq_abs: float, denom: float):
    """tan/cos/sin of phi from tan(2 phi) = two_bpq_abs / denom, |phi| <= pi/4.

    sign(0) := +1, so an exactly balanced diagonal gives phi = pi/4.
    """
    sgn = 1.0 if denom >= 0.0 else -1.0
    t = sgn * two_bpq_abs / (abs(denom) + math.hypot(denom, two_bpq_abs))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c


def rotation_from_entries(
    p: int, q: int, bpp: float, bqq: float, bpq: complex, enforce_order: bool = False
) -> Rotation:
    """Complex rotation from the three relevant entries of the Hermitian part."""
    absb = abs(bpq)
    if absb == 0.0:
        alpha, c, s = 0.0, 1.0, 0.0
    else:
        alpha = math.atan2(bpq.imag, bpq.real) if isinstance(bpq, complex) else (
            0.0 if bpq > 0 else math.pi
        )
        c, s = _half_angle(2.0 * absb, bpp - bqq)
    exchanged = False
    if enforce_order:
        # post-rotation diagonal of the Hermitian part
        bt_pp = c * c * bpp + 2.0 * c * s * absb + s * s * bqq
        bt_qq = s * s * bpp - 2.0 * c * s * absb + c * c * bqq
        if bt_pp < bt_qq:
            c, s = s, -c
            exchanged = True
    return Rotation(p, q, alpha, c, s, exchanged)


def rotation_from_entries_real(
    p: int, q: int, bpp: float, bqq: float, bpq: float, enforce_order: bool = False
) -> Rotation:
    """Real rotation (alpha = pi); note the flipped tan(2 phi) denominator."""
    if bpq == 0.0:
        c, s = 1.0, 0.0
    else:
        c, s = _half_angle(2.0 * bpq, bqq - bpp)
    exchanged = False
    if enforce_order:
        bt_pp = c * c * bpp - 2.0 * c * s * bpq + s * s * bqq
        bt_qq = s * s * bpp + 2.0 * c * s * bpq + c * c * bqq
        if bt_pp < bt_qq:
            c, s = s, -c
            exchanged = True
    return Rotation(p, q, math.pi, c, s, exchanged)


def _require_hermitian(B: np.ndarray) -> None:
    dev = frobenius_norm(B - B.conj().T)
    if dev > _HERMITIAN_TOL * max(1.0, frobenius_norm(B)):
        raise ContractViolation(f"matrix is not Hermitian within tolerance (dev={dev:g})")


def compute_rotation(B, p: int, q: int, enforce_order: bool = False) -> Rotation:
    """Rotation annihilating the (p, q) entry of the Hermitian matrix B."""
    B = validate_matrix(B, "B")
    _check_pivot(B.shape[0], p, q)
    _require_hermitian(B)
    return rotation_from_entries(
        p, q, float(B[p, p].real), float(B[q, q].real), complex(B[p, q]), enforce_order
    )


def compute_rotation_real(B, p: int, q: int, enforce_order: bool = False) -> Rotation:
    """Real-variant rotation for a real symmetric B."""
    B = validate_matrix(B, "B")
    if np.iscomplexobj(B):
        raise ContractViolation("real rotation requires a real matrix")
    _check_pivot(B.shape[0], p, q)
    _require_hermitian(B)
    return rotation_from_entries_real(
        p, q, float(B[p, p]), float(B[q, q]), float(B[p, q]), enforce_order
    )


def apply_rotation(A, rot: Rotation) -> np.ndarray:
    """In-place two-sided similarity A <- R* A R touching rows/columns p, q."""
    A = validate_matrix(A, "A")
    p, q = rot.p, rot.q
    _check_pivot(A.shape[0], p, q)
    c, s = rot.cos_phi, rot.sin_phi
    if np.iscomplexobj(A):
        e = cmath.exp(1j * rot.alpha)
        eb = e.conjugate()
    else:
        e = eb = math.cos(rot.alpha)  # alpha in {0, pi} for real data
    rp = c * A[p, :] + (e * s) * A[q, :]
    rq = (-eb * s) * A[p, :] + c * A[q, :]
    A[p, :], A[q, :] = rp, rq
    cp = c * A[:, p] + (eb * s) * A[:, q]
    cq = (-e * s) * A[:, p] + c * A[:, q]
    A[:, p], A[:, q] = cp, cq
    return A


def apply_shear(A, sh: Shear) -> np.ndarray:
    """In-place A <- S^{-1} A S using the closed-form (adjugate) inverse."""
    A = validate_matrix(A, "A")
    p, q = sh.p, sh.q
    _check_pivot(A.shape[0], p, q)
    ch, sn = sh.cosh_psi, sh.sinh_psi
    if sn == 0.0:
        return A
    u = -1j * cmath.exp(1j * sh.beta) * sn  # S[p, q]
    v = u.conjugate()  # S[q, p]
    if not np.iscomplexobj(A):
        u, v = u.real, v.real  # beta = pi/2 makes the block real
    rp = ch * A[p, :] - u * A[q, :]
    rq = -v * A[p, :] + ch * A[q, :]
    A[p, :], A[q, :] = rp, rq
    cp = ch * A[:, p] + v * A[:, q]
    cq = u * A[:, p] + ch * A[:, q]
    A[:, p], A[:, q] = cp, cq
    return A


def _pivot_sums(A: np.ndarray, p: int, q: int):
    """g, l and the commutator pivot entry, from rows/columns p and q only."""
    rp, rq = A[p, :], A[q, :]
    cp, cq = A[:, p], A[:, q]
    c_pq = complex(np.vdot(rq, rp) - np.vdot(cp, cq))
    mask = np.ones(A.shape[0], dtype=bool)
    mask[p] = mask[q] = False
    g = float(
        np.sum(np.abs(cp[mask]) ** 2)
        + np.sum(np.abs(rp[mask]) ** 2)
        + np.sum(np.abs(cq[mask]) ** 2)
        + np.sum(np.abs(rq[mask]) ** 2)
    )
    l = 2.0 * complex(
        np.sum(rp[mask] * rq[mask].conj()) - np.sum(cp[mask].conj() * cq[mask])
    )
    return g, l, c_pq


def _delta_expansion(g, h, xi, d, ch, sn) -> float:
    """Norm-square drop for given shear parameters."""
    ch2 = ch * ch + sn * sn
    sh2 = 2.0 * sn * ch
    ch4 = 2.0 * ch2 * ch2 - 1.0
    sh4 = 2.0 * sh2 * ch2
    im_xd = (xi * d.conjugate()).imag
    return (
        g * (1.0 - ch2)
        - h * sh2
        + 0.5 * (abs(xi) ** 2 + abs(d) ** 2) * (1.0 - ch4)
        + im_xd * sh4
    )


def _cosh_sinh(tanh: float):
    if abs(tanh) >= 1.0:
        raise DegeneracyError(f"|tanh psi| = {abs(tanh):g} >= 1")
    ch = 1.0 / math.sqrt(1.0 - tanh * tanh)
    return ch, tanh * ch


def compute_shear(
    A_tilde, p: int, q: int, real_mode: bool = False
) -> tuple[Shear, ShearWorkspace]:
    """Norm-reducing shear for the rotated iterate.

    Complex mode evaluates both roots of the beta equation through the full
    norm-drop expansion and keeps the maximizer (ties broken toward
    beta in (-pi/2, pi/2]).  Real mode fixes beta = pi/2.
    """
    A = validate_matrix(A_tilde, "A_tilde")
    _check_pivot(A.shape[0], p, q)
    if real_mode and np.iscomplexobj(A):
        raise ContractViolation("real_mode shear requires a real matrix")

    g, l, c_pq = _pivot_sums(A, p, q)
    d = complex(A[p, p] - A[q, q])
    apq, aqp = complex(A[p, q]), complex(A[q, p])
    e_t = float((apq - aqp).real)
    fro2 = frobenius_norm(A) ** 2

    if abs(c_pq) <= SHEAR_SKIP_REL * fro2:
        beta = math.pi / 2 if real_mode else 0.0
        ws = ShearWorkspace(g, 0.0, l, d, 0.0 + 0.0j, e_t, c_pq)
        return identity_shear(p, q, beta), ws

    if real_mode:
        beta = math.pi / 2
        den = g + 2.0 * (e_t * e_t + abs(d) ** 2)
        num = c_pq.real
        if den == 0.0:
            if num == 0.0:
                return identity_shear(p, q, beta), ShearWorkspace(
                    g, 0.0, l, d, -1j * e_t, e_t, c_pq
                )
            raise DegeneracyError("zero shear denominator with nonzero numerator")
        ch, sn = _cosh_sinh(num / den)
        xi = -1j * e_t
        h = -l.real
        delta = _delta_expansion(g, h, xi, d, ch, sn)
        return Shear(p, q, beta, ch, sn, delta), ShearWorkspace(g, h, l, d, xi, e_t, c_pq)

    beta0 = math.atan2(-c_pq.real, c_pq.imag)
    best = None
    for k, beta in enumerate((beta0, beta0 - math.pi if beta0 > 0 else beta0 + math.pi)):
        cb, sb = math.cos(beta), math.sin(beta)
        xi = (apq + aqp) * cb - 1j * (apq - aqp) * sb
        h = -l.real * sb + l.imag * cb
        num = 2.0 * (xi * d.conjugate()).imag - h
        den = g + 2.0 * (abs(xi) ** 2 + abs(d) ** 2)
        if den == 0.0:
            if num == 0.0:
                cand = (0.0, identity_shear(p, q, beta), ShearWorkspace(g, h, l, d, xi, e_t, c_pq))
            else:
                raise DegeneracyError("zero shear denominator with nonzero numerator")
        else:
            ch, sn = _cosh_sinh(0.5 * num / den)
            delta = _delta_expansion(g, h, xi, d, ch, sn)
            cand = (
                delta,
                Shear(p, q, beta, ch, sn, delta),
                ShearWorkspace(g, h, l, d, xi, e_t, c_pq),
            )
        in_principal = -math.pi / 2 < beta <= math.pi / 2
        if best is None:
            best = (cand, in_principal)
        else:
            tie = abs(cand[0] - best[0][0]) <= 1e-12 * max(1.0, abs(cand[0]))
            if (tie and in_principal and not best[1]) or (not tie and cand[0] > best[0][0]):
                best = (cand, in_principal)
    (_, shear, ws), _ = best
    return shear, ws
