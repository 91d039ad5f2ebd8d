"""Iteration driver: rotation + shear per pivot, sweep-level stopping.

One step takes the pivot pair from the cyclic cursor, annihilates the pivot
entry of the Hermitian part with a plane rotation, then applies the
norm-reducing shear.  The run stops when the off-norm of the Hermitian part
changes by less than tol_sweep between consecutive sweeps, when it falls
below a relative floor, or when the sweep budget is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import transforms
from .diagnostics import TraceRecord
from .errors import ContractViolation, NonFiniteIterateError
from .matrix_core import commutator, frobenius_norm, off_norm, validate_matrix
from .pivot import PivotCursor, PivotOrdering, next_pivot
from .transforms import Rotation, Shear, ShearWorkspace


@dataclass
class SolverOptions:
    tol_sweep: float = 1e-8
    tol_floor: float = 1e-14
    max_sweeps: int = 100
    mode: str = "complex"  # or "real"
    enforce_order: bool = False
    accumulate: bool = False
    record_trace: bool = False

    def __post_init__(self):
        if self.tol_sweep <= 0 or self.tol_floor <= 0:
            raise ContractViolation("tolerances must be positive")
        if self.max_sweeps < 1:
            raise ContractViolation("max_sweeps must be at least 1")
        if self.mode not in ("complex", "real"):
            raise ContractViolation(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class StepInfo:
    """Hand-off to per-step instrumentation callbacks."""

    k: int
    sweep: int
    p: int
    q: int
    rotation: Rotation
    shear: Shear
    workspace: ShearWorkspace
    fro_before: float
    fro_after: float
    delta: float
    A_tilde: np.ndarray  # rotated iterate, pre-shear (copy)
    A_after: np.ndarray  # current iterate (live reference, do not mutate)


@dataclass
class SolverState:
    A: np.ndarray
    cursor: PivotCursor
    k: int = 0
    sweep: int = 0
    T_acc: np.ndarray | None = None
    Tinv_acc: np.ndarray | None = None
    trace: list[TraceRecord] = field(default_factory=list)
    fro: float = 0.0  # Frobenius norm of the current iterate


@dataclass
class SolverResult:
    A: np.ndarray
    converged: bool
    status: str  # "converged", "floor" or "max_sweeps"
    sweeps: int
    steps: int
    off_B: float
    norm_C: float
    off_B_history: list[float]
    trace: list[TraceRecord]
    T_acc: np.ndarray | None
    Tinv_acc: np.ndarray | None
    max_trace_drift: float
    ordering: PivotOrdering


def init_state(A0, ordering: PivotOrdering, opts: SolverOptions) -> SolverState:
    A0 = validate_matrix(A0, "A0")
    if ordering.n != A0.shape[0]:
        raise ContractViolation(
            f"ordering is for n={ordering.n}, matrix is {A0.shape[0]}x{A0.shape[0]}"
        )
    if opts.mode == "real":
        if np.iscomplexobj(A0) and np.any(A0.imag != 0.0):
            raise ContractViolation("real mode requires an exactly real matrix")
        A = np.array(A0.real, dtype=np.float64)
    else:
        A = np.array(A0, dtype=np.complex128)
    state = SolverState(A=A, cursor=PivotCursor(ordering), fro=frobenius_norm(A))
    if opts.accumulate:
        state.T_acc = np.eye(A.shape[0], dtype=A.dtype)
        state.Tinv_acc = np.eye(A.shape[0], dtype=A.dtype)
    return state


def _accumulate(state: SolverState, rot: Rotation, shear: Shear) -> None:
    # T <- T R S (column updates); T^{-1} <- S^{-1} R* T^{-1} (row updates)
    T, Ti = state.T_acc, state.Tinv_acc
    p, q = rot.p, rot.q
    real = not np.iscomplexobj(T)
    import cmath
    import math

    c, s = rot.cos_phi, rot.sin_phi
    e = math.cos(rot.alpha) if real else cmath.exp(1j * rot.alpha)
    eb = e if real else e.conjugate()
    cp = c * T[:, p] + (eb * s) * T[:, q]
    cq = (-e * s) * T[:, p] + c * T[:, q]
    T[:, p], T[:, q] = cp, cq
    rp = c * Ti[p, :] + (e * s) * Ti[q, :]
    rq = (-eb * s) * Ti[p, :] + c * Ti[q, :]
    Ti[p, :], Ti[q, :] = rp, rq

    ch, sn = shear.cosh_psi, shear.sinh_psi
    if sn != 0.0:
        u = -1j * cmath.exp(1j * shear.beta) * sn
        v = u.conjugate()
        if real:
            u, v = u.real, v.real
        cp = ch * T[:, p] + v * T[:, q]
        cq = u * T[:, p] + ch * T[:, q]
        T[:, p], T[:, q] = cp, cq
        rp = ch * Ti[p, :] - u * Ti[q, :]
        rq = -v * Ti[p, :] + ch * Ti[q, :]
        Ti[p, :], Ti[q, :] = rp, rq


def step(state: SolverState, opts: SolverOptions, on_step=None) -> SolverState:
    """Execute one full iteration in place on the state."""
    A = state.A
    p, q = next_pivot(state.cursor)
    real = opts.mode == "real"

    fro_before = state.fro
    if real:
        rot = transforms.rotation_from_entries_real(
            p, q, float(A[p, p]), float(A[q, q]),
            float((A[p, q] + A[q, p]) / 2.0), opts.enforce_order,
        )
    else:
        rot = transforms.rotation_from_entries(
            p, q, float(A[p, p].real), float(A[q, q].real),
            complex((A[p, q] + np.conj(A[q, p])) / 2.0), opts.enforce_order,
        )
    transforms.apply_rotation(A, rot)
    shear, ws = transforms.compute_shear(A, p, q, real_mode=real)
    A_tilde = A.copy() if (on_step is not None) else None
    transforms.apply_shear(A, shear)

    if not np.isfinite(A).all():
        raise NonFiniteIterateError(state.k)

    fro_after = frobenius_norm(A)
    state.fro = fro_after
    delta = fro_before * fro_before - fro_after * fro_after

    if opts.accumulate:
        _accumulate(state, rot, shear)

    if opts.record_trace:
        B = (A + A.conj().T) / 2
        state.trace.append(
            TraceRecord(
                k=state.k,
                sweep=state.sweep,
                p=p,
                q=q,
                off_A=off_norm(A),
                off_B=off_norm(B),
                norm_C=frobenius_norm(commutator(A)),
                fro_A=fro_after,
                delta_k=delta,
                c_pq_abs=abs(ws.c_pq),
            )
        )
    if on_step is not None:
        on_step(
            StepInfo(
                k=state.k, sweep=state.sweep, p=p, q=q, rotation=rot, shear=shear,
                workspace=ws, fro_before=fro_before, fro_after=fro_after,
                delta=delta, A_tilde=A_tilde, A_after=A,
            )
        )
    state.k += 1
    return state


def delta_achieved(A_before, A_after) -> float:
    """Realized drop of the squared Frobenius norm across one step."""
    return frobenius_norm(A_before) ** 2 - frobenius_norm(A_after) ** 2


def run(
    A0,
    ordering: PivotOrdering,
    opts: SolverOptions | None = None,
    on_step=None,
    on_sweep=None,
) -> SolverResult:
    """Sweep until the off-norm of the Hermitian part stalls (or the budget ends)."""
    opts = opts or SolverOptions()
    state = init_state(A0, ordering, opts)
    A = state.A
    N = len(ordering.pairs)
    fro0 = state.fro
    trace0 = complex(np.trace(A))

    off_B_prev = off_norm((A + A.conj().T) / 2)
    history = [off_B_prev]
    max_drift = 0.0
    status = "max_sweeps"
    sweeps = 0
    for s in range(opts.max_sweeps):
        state.sweep = s
        for _ in range(N):
            step(state, opts, on_step=on_step)
        sweeps = s + 1
        drift = abs(complex(np.trace(A)) - trace0)
        max_drift = max(max_drift, drift)
        off_B = off_norm((A + A.conj().T) / 2)
        history.append(off_B)
        if on_sweep is not None:
            on_sweep(sweeps, A)
        if off_B < opts.tol_floor * max(fro0, np.finfo(float).tiny):
            # off(B) can hit zero while the iterate is still far from normal
            # (small n); only treat the floor as converged once the commutator
            # has come down as well
            if frobenius_norm(commutator(A)) <= np.sqrt(opts.tol_floor) * fro0 * fro0:
                status = "floor"
                break
        if abs(off_B - off_B_prev) < opts.tol_sweep:
            status = "converged"
            break
        off_B_prev = off_B

    off_B = history[-1]
    return SolverResult(
        A=A,
        converged=status != "max_sweeps",
        status=status,
        sweeps=sweeps,
        steps=state.k,
        off_B=off_B,
        norm_C=frobenius_norm(commutator(A)),
        off_B_history=history,
        trace=state.trace,
        T_acc=state.T_acc,
        Tinv_acc=state.Tinv_acc,
        max_trace_drift=max_drift,
        ordering=ordering,
    )
