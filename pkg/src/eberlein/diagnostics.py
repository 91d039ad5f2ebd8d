"""Per-step trace export, log-magnitude snapshots, and block detection.

CSV conventions: UTF-8, '.' decimal separator, newline-terminated rows,
values written with 17 significant digits so re-imports are bit-exact.
Pivot indices are 1-based on disk.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .matrix_core import frobenius_norm, validate_matrix

TRACE_HEADER = ["k", "sweep", "p", "q", "off_A", "off_B", "norm_C", "fro_A", "delta_k", "c_pq_abs"]


@dataclass(frozen=True)
class TraceRecord:
    k: int
    sweep: int
    p: int  # 0-based in memory
    q: int
    off_A: float
    off_B: float
    norm_C: float
    fro_A: float
    delta_k: float
    c_pq_abs: float


@dataclass(frozen=True)
class BlockPartition:
    """Contiguous index ranges (0-based, half-open) of the final block structure."""

    boundaries: tuple[tuple[int, int], ...]
    mu: tuple[float, ...]
    block_eigenvalues: tuple[tuple[complex, ...], ...] | None = None

    def sizes(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in self.boundaries)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_trace(trace, destination) -> None:
    """Write one CSV row per step; pivot indices are written 1-based."""
    if not trace:
        raise ContractViolation("refusing to export an empty trace")
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_HEADER)
        for r in trace:
            w.writerow(
                [r.k, r.sweep, r.p + 1, r.q + 1,
                 _fmt(r.off_A), _fmt(r.off_B), _fmt(r.norm_C), _fmt(r.fro_A),
                 _fmt(r.delta_k), _fmt(r.c_pq_abs)]
            )


def import_trace(path) -> list[TraceRecord]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if header != TRACE_HEADER:
            raise ContractViolation(f"unexpected trace header {header}")
        for row in rd:
            out.append(
                TraceRecord(
                    k=int(row[0]), sweep=int(row[1]), p=int(row[2]) - 1, q=int(row[3]) - 1,
                    off_A=float(row[4]), off_B=float(row[5]), norm_C=float(row[6]),
                    fro_A=float(row[7]), delta_k=float(row[8]), c_pq_abs=float(row[9]),
                )
            )
    return out


def export_logabs(A, destination, floor: float = 1e-16) -> None:
    """n x n grid of log10(max(|a_ij|, floor)), one matrix row per CSV line."""
    A = validate_matrix(A, "A")
    if floor <= 0:
        raise ContractViolation("floor must be positive")
    G = np.log10(np.maximum(np.abs(A), floor))
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        for row in G:
            w.writerow([_fmt(x) for x in row])


def logabs_grid(A, floor: float = 1e-16) -> np.ndarray:
    A = validate_matrix(A, "A")
    return np.log10(np.maximum(np.abs(A), floor))


def detect_blocks(
    Lambda, real_gap: float | None = None, offdiag_tol: float = 1e-6
) -> BlockPartition:
    """Block structure of a (near-)converged iterate.

    Consecutive diagonal entries with real parts closer than real_gap form a
    cluster; each cluster is then refined by connectivity through off-diagonal
    entries larger than offdiag_tol * ||Lambda||_F, so a multiple eigenvalue
    whose couplings fully vanished falls apart into singletons.
    Requires the diagonal real parts sorted in decreasing order.
    """
    L = validate_matrix(Lambda, "Lambda")
    n = L.shape[0]
    mu_diag = np.real(np.diagonal(L))
    if real_gap is None:
        real_gap = 1e-6 * (float(mu_diag.max()) - float(mu_diag.min()) + 1.0)
    if np.any(np.diff(mu_diag) > real_gap):
        raise ContractViolation("diagonal real parts are not sorted decreasing")

    fro = frobenius_norm(L)
    absL = np.abs(L)
    thresh = offdiag_tol * fro

    boundaries: list[tuple[int, int]] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or abs(mu_diag[i] - mu_diag[i - 1]) >= real_gap:
            boundaries.extend(_refine_cluster(absL, start, i, thresh))
            start = i

    mu = tuple(float(np.mean(mu_diag[a:b])) for a, b in boundaries)
    return BlockPartition(tuple(boundaries), mu)


def _refine_cluster(absL, start, stop, thresh):
    """Split one equal-real-part cluster into connected contiguous ranges."""
    idx = list(range(start, stop))
    if len(idx) == 1:
        return [(start, stop)]
    # union-find over coupling edges
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in idx:
        for j in idx:
            if i < j and (absL[i, j] > thresh or absL[j, i] > thresh):
                parent[find(i)] = find(j)
    spans = {}
    for i in idx:
        r = find(i)
        lo, hi = spans.get(r, (i, i))
        spans[r] = (min(lo, i), max(hi, i))
    # merge overlapping spans so ranges stay contiguous
    ranges = sorted(spans.values())
    merged = [ranges[0]]
    for lo, hi in ranges[1:]:
        plo, phi = merged[-1]
        if lo <= phi:
            merged[-1] = (plo, max(phi, hi))
        else:
            merged.append((lo, hi))
    return [(lo, hi + 1) for lo, hi in merged]
