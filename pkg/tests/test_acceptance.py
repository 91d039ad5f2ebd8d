"""Acceptance suite.

One test per criterion, so the pytest report carries exactly one pass/fail
line for each.  Criteria 1, 2, 5 and 6 share instrumented solver runs through
session fixtures; criterion 7 aggregates the per-step residual checks
collected from all of them.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np
import pytest

from eberlein import cli, diagnostics, pivot, solver, transforms, verification
from eberlein.matrix_core import commutator, frobenius_norm, off_norm

from conftest import matching_distance, random_complex, random_hermitian, random_real, rng_for

MONOTONE_SLACK = 1e-12
DELTA_SLACK = 1e-10


@dataclass
class RunStats:
    label: str
    fro0: float
    steps: int = 0
    monotone_violations: int = 0
    delta_violations: int = 0
    residual_violations: int = 0
    max_abs_sinh: float = 0.0
    result: solver.SolverResult | None = None
    elapsed: float = 0.0


def instrumented_run(label, A0, ordering, opts):
    """Run the solver while checking the per-step bounds of criteria 1 and 7."""
    n = A0.shape[0]
    fro0 = frobenius_norm(np.asarray(A0))
    stats = RunStats(label=label, fro0=fro0)

    def on_step(info):
        stats.steps += 1
        if info.fro_after > info.fro_before + MONOTONE_SLACK * fro0:
            stats.monotone_violations += 1
        c_abs = abs(info.workspace.c_pq)
        lower = c_abs**2 / (3.0 * info.fro_before**2) - DELTA_SLACK * fro0**2
        if info.delta < lower:
            stats.delta_violations += 1
        A_next = info.A_after
        B_next = (A_next + A_next.conj().T) / 2
        B_tilde = (info.A_tilde + info.A_tilde.conj().T) / 2
        rep = verification.residual_report(
            info.A_tilde, info.A_tilde, A_next, B_next, B_tilde, c_abs, n
        )
        if not rep.satisfied:
            stats.residual_violations += 1
        stats.max_abs_sinh = max(stats.max_abs_sinh, abs(info.shear.sinh_psi))

    t0 = time.perf_counter()
    stats.result = solver.run(A0, ordering, opts, on_step=on_step)
    stats.elapsed = time.perf_counter() - t0
    return stats


# --- shared run collections -------------------------------------------------

@pytest.fixture(scope="session")
def runs_complex_20():
    """Criterion 1: 20 seeded complex 20x20 matrices x 5 random orderings."""
    out = []
    for m in range(20):
        A0 = random_complex(20, 100 + m)
        for s in range(5):
            o = pivot.random_sg_ordering(20, 1000 + 5 * m + s)
            out.append(
                instrumented_run(
                    f"c1 matrix {m} strategy {s}", A0, o,
                    solver.SolverOptions(max_sweeps=8),
                )
            )
    return out


@pytest.fixture(scope="session")
def runs_fig1_scale():
    """Criterion 2: complex and real 50x50, 5 random orderings each."""
    out = []
    A_c = random_complex(50, 42)
    A_r = random_real(50, 43)
    for s in range(5):
        o = pivot.random_sg_ordering(50, 100 + s)
        out.append(
            instrumented_run(
                f"c2 complex strategy {s}", A_c, o, solver.SolverOptions(max_sweeps=60)
            )
        )
    for s in range(5):
        o = pivot.random_sg_ordering(50, 200 + s)
        out.append(
            instrumented_run(
                f"c2 real strategy {s}", A_r, o,
                solver.SolverOptions(max_sweeps=60, mode="real"),
            )
        )
    return out


@pytest.fixture(scope="session")
def runs_hermitian():
    """Criterion 5: 10 random Hermitian 12x12 matrices."""
    out = []
    for m in range(10):
        A0 = random_hermitian(12, 700 + m)
        o = pivot.random_sg_ordering(12, 800 + m)
        out.append(
            instrumented_run(
                f"c5 matrix {m}", A0, o,
                solver.SolverOptions(tol_sweep=1e-12, max_sweeps=40),
            )
        )
    return out


@pytest.fixture(scope="session")
def runs_small_nonnormal():
    """Criterion 6: 20 random non-normal 4x4 and 5x5 complex matrices."""
    out = []
    for m in range(20):
        n = 4 if m < 10 else 5
        A0 = random_complex(n, 300 + m)
        assert frobenius_norm(commutator(A0)) > 1e-6  # non-normal draw
        o = pivot.random_sg_ordering(n, 400 + m)
        out.append(
            (
                A0,
                instrumented_run(
                    f"c6 matrix {m}", A0, o,
                    solver.SolverOptions(tol_sweep=1e-12, max_sweeps=100),
                ),
            )
        )
    return out


def sorted_final(result):
    """Final iterate under the symmetric permutation sorting the diagonal."""
    L = result.A
    order = np.argsort(-np.real(np.diagonal(L)), kind="stable")
    return L[np.ix_(order, order)]


def block_eigenvalues(L, blocks):
    out = []
    for a, b in blocks.boundaries:
        sub = L[a:b, a:b]
        if b - a == 1:
            out.append(complex(sub[0, 0]))
        else:
            out.extend(verification.eigenvalues_oracle(sub))
    return out


# --- criteria ---------------------------------------------------------------

def test_criterion_01_monotone_norm_and_delta_bound(runs_complex_20):
    total = sum(r.elapsed for r in runs_complex_20)
    assert len(runs_complex_20) == 100
    assert sum(r.steps for r in runs_complex_20) > 0
    bad_monotone = [r.label for r in runs_complex_20 if r.monotone_violations]
    bad_delta = [r.label for r in runs_complex_20 if r.delta_violations]
    assert not bad_monotone, f"norm grew beyond slack in: {bad_monotone}"
    assert not bad_delta, f"delta lower bound violated in: {bad_delta}"
    assert total < 60.0, f"criterion 1 runs took {total:.1f}s (budget 60s)"


def test_criterion_02_convergence_at_fig1_scale(runs_fig1_scale):
    total = sum(r.elapsed for r in runs_fig1_scale)
    failures = []
    for r in runs_fig1_scale:
        res = r.result
        if not (res.converged and res.sweeps <= 60):
            failures.append(f"{r.label}: status={res.status} sweeps={res.sweeps}")
            continue
        if res.off_B >= 1e-6 * r.fro0:
            failures.append(f"{r.label}: off_B={res.off_B:.2e}")
        if res.norm_C >= 1e-6 * r.fro0**2:
            failures.append(f"{r.label}: norm_C={res.norm_C:.2e}")
    assert not failures, "; ".join(failures)
    assert total < 120.0, f"criterion 2 runs took {total:.1f}s (budget 120s)"


def test_criterion_03_block_structure_two_conjugate_pairs():
    spectrum_spec = [5, 4, 3, 1 + 2j, 1 - 2j, 1 + 1j, 1 - 1j, -1, -2, -3]
    A0, spectrum = verification.known_spectrum_matrix(spectrum_spec, 1.0, 11)
    o = pivot.random_sg_ordering(10, 28)
    res = solver.run(
        A0, o, solver.SolverOptions(tol_sweep=1e-12, max_sweeps=200, enforce_order=True)
    )
    assert res.converged, res.status
    blocks = diagnostics.detect_blocks(res.A)
    assert blocks.sizes() == (1, 1, 1, 4, 1, 1, 1), blocks.sizes()
    (mu4,) = [mu for (a, b), mu in zip(blocks.boundaries, blocks.mu) if b - a == 4]
    assert mu4 == pytest.approx(1.0, abs=1e-6)
    evs = block_eigenvalues(res.A, blocks)
    assert matching_distance(evs, spectrum) < 1e-6


def test_criterion_04_block_structure_multiple_eigenvalues():
    spectrum_spec = [-2 + 1j, -2 + 1j, -2 + 2j,
                     1 - 1j, 1 - 1j, 1 - 1j, 1 - 1j,
                     2 - 1j, 2 + 3j, 2 + 1j]
    A0, spectrum = verification.known_spectrum_matrix(spectrum_spec, 0.0, 12)
    o = pivot.random_sg_ordering(10, 29)
    res = solver.run(A0, o, solver.SolverOptions(tol_sweep=1e-12, max_sweeps=200))
    assert res.converged, res.status
    L = sorted_final(res)
    blocks = diagnostics.detect_blocks(L)
    assert blocks.sizes() == (3, 1, 1, 1, 1, 3), blocks.sizes()
    assert blocks.mu[0] == pytest.approx(2.0, abs=1e-6)
    assert blocks.mu[-1] == pytest.approx(-2.0, abs=1e-6)
    for mu in blocks.mu[1:-1]:
        assert mu == pytest.approx(1.0, abs=1e-6)
    evs = block_eigenvalues(L, blocks)
    assert matching_distance(evs, spectrum) < 1e-6


def test_criterion_05_hermitian_degeneration(runs_hermitian):
    for r in runs_hermitian:
        assert r.max_abs_sinh <= 1e-14, f"{r.label}: |sinh psi| = {r.max_abs_sinh:.2e}"
        assert off_norm(r.result.A) < 1e-8, f"{r.label}: off(A) = {off_norm(r.result.A):.2e}"


def test_criterion_06_oracle_equivalence(runs_small_nonnormal):
    for A0, r in runs_small_nonnormal:
        res = r.result
        assert res.converged, f"{r.label}: {res.status}"
        L = sorted_final(res)
        blocks = diagnostics.detect_blocks(L)
        got = block_eigenvalues(L, blocks)
        want = verification.eigenvalues_oracle(A0)
        dist = matching_distance(got, want)
        assert dist < 1e-6, f"{r.label}: matching distance {dist:.2e}"


def test_criterion_07_residual_bounds(
    runs_complex_20, runs_fig1_scale, runs_hermitian, runs_small_nonnormal
):
    all_runs = (
        list(runs_complex_20)
        + list(runs_fig1_scale)
        + list(runs_hermitian)
        + [r for _, r in runs_small_nonnormal]
    )
    assert sum(r.steps for r in all_runs) > 0
    bad = [r.label for r in all_runs if r.residual_violations]
    assert not bad, f"E/F residual bound violated in: {bad}"


def _random_rotations(ordering, seed):
    rng = rng_for(seed)
    out = []
    for p, q in ordering.pairs:
        phi = float(rng.uniform(-math.pi / 4, math.pi / 4))
        alpha = float(rng.uniform(-math.pi, math.pi))
        out.append(transforms.Rotation(p, q, alpha, math.cos(phi), math.sin(phi)))
    return out


def test_criterion_08_annihilator_and_operator_norms():
    t0 = time.perf_counter()
    # single annihilators: exactly zero at n = 2, unit spectral norm beyond
    rot2 = transforms.Rotation(0, 1, 0.3, math.cos(0.5), math.sin(0.5))
    assert np.all(verification.jacobi_annihilator(2, 0, 1, rot2).matrix == 0)
    for n in (3, 4, 5):
        for seed in range(3):
            rng = rng_for(10 * n + seed)
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            p, q = pairs[int(rng.integers(len(pairs)))]
            phi = float(rng.uniform(-math.pi / 4, math.pi / 4))
            rot = transforms.Rotation(
                p, q, float(rng.uniform(-math.pi, math.pi)), math.cos(phi), math.sin(phi)
            )
            ann = verification.jacobi_annihilator(n, p, q, rot)
            assert verification.spectral_norm(ann.matrix) == pytest.approx(1.0, abs=1e-10)
    # one full sweep contracts strictly for serial orderings
    worst = 0.0
    for seed in range(100):
        n = 3 + seed % 3
        o = pivot.random_sp_ordering(n, seed)
        J = verification.jacobi_operator(o, _random_rotations(o, 5000 + seed))
        nrm = verification.spectral_norm(J)
        worst = max(worst, nrm)
        assert nrm < 1.0, f"seed {seed}: operator norm {nrm}"
        assert nrm <= 1.0 + 1e-10
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"criterion 8 took {elapsed:.1f}s (budget 60s)"


def test_criterion_09_structural_invariants():
    # complex run with accumulated transforms
    A0 = random_complex(10, 55)
    fro0 = frobenius_norm(A0)
    res = solver.run(
        A0, pivot.random_sg_ordering(10, 56),
        solver.SolverOptions(tol_sweep=1e-10, max_sweeps=100, accumulate=True),
    )
    assert res.converged, res.status
    assert res.max_trace_drift <= 1e-10 * (1.0 + abs(np.trace(A0)))
    resid = frobenius_norm(res.Tinv_acc @ A0 @ res.T_acc - res.A)
    assert resid <= 1e-8 * fro0
    # real-mode run: iterates bitwise real, trace preserved
    R0 = random_real(8, 57)
    res_r = solver.run(
        R0, pivot.random_sg_ordering(8, 58),
        solver.SolverOptions(max_sweeps=30, mode="real"),
    )
    assert not np.iscomplexobj(res_r.A)
    assert res_r.max_trace_drift <= 1e-10 * (1.0 + abs(np.trace(R0)))


def test_criterion_10_determinism(tmp_path):
    A = random_complex(8, 5)
    inp = tmp_path / "in.csv"
    cli.write_matrix_csv(A, inp)
    args = [
        "--input", str(inp), "--strategy", "sg:3", "--trace", "--eigvecs",
        "--logabs-every", "2", "--figures", "--max-sweeps", "40",
    ]
    outs = []
    for d in ("run1", "run2"):
        out = tmp_path / d
        rc = cli.main(args + ["--out", str(out)])
        assert rc == 0
        outs.append(out)
    names = sorted(p.name for p in outs[0].iterdir())
    assert names == sorted(p.name for p in outs[1].iterdir())
    assert names  # something was produced
    for name in names:
        a = (outs[0] / name).read_bytes()
        b = (outs[1] / name).read_bytes()
        assert a == b, f"artifact {name} differs between identical runs"
