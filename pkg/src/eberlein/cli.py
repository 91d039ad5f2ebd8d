"""Command-line surface.

Reads a matrix from CSV (entries like "1.5", "2i", "1.5-2.25i"), runs the
solver under the chosen pivot strategy, and writes eigenvalue estimates,
the final matrix, optional traces, log-magnitude snapshots, accumulated
transforms, figures, and a summary into the output directory.

Exit codes: 0 converged, 2 sweep budget exhausted, 1 error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import diagnostics, pivot, solver, verification
from .errors import EberleinError, ParseError
from .verification import ORACLE_MAX_N

_ENTRY_RE = re.compile(r"^[0-9eE +\-.ij]+$")


def _parse_scalar(tok: str, line: int, col: int) -> complex:
    s = tok.strip()
    if not s or not _ENTRY_RE.match(s) or "inf" in s.lower() or "nan" in s.lower():
        raise ParseError(f"malformed entry {tok!r}", line=line, column=col)
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ParseError(f"malformed entry {tok!r}", line=line, column=col) from exc


def parse_matrix_text(text: str) -> np.ndarray:
    rows = []
    width = None
    for ln_no, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        toks = ln.split(",")
        if width is None:
            width = len(toks)
        elif len(toks) != width:
            raise ParseError(f"ragged row ({len(toks)} entries, expected {width})", line=ln_no)
        rows.append([_parse_scalar(t, ln_no, c + 1) for c, t in enumerate(toks)])
    if not rows:
        raise ParseError("empty matrix file", line=1)
    if len(rows) != width:
        raise ParseError(f"matrix is {len(rows)}x{width}, must be square")
    M = np.array(rows, dtype=np.complex128)
    if np.all(M.imag == 0.0):
        return M.real.copy()
    return M


def parse_matrix_file(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_text(fh.read())


def _fmt_scalar(x) -> str:
    x = complex(x)
    re_s = format(x.real, ".17g")
    if x.imag == 0.0:
        return re_s
    im_s = format(abs(x.imag), ".17g")
    sign = "+" if x.imag >= 0 else "-"
    return f"{re_s}{sign}{im_s}i"


def write_matrix_csv(M, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for row in np.asarray(M):
            fh.write(",".join(_fmt_scalar(x) for x in row) + "\n")


def make_strategy(spec: str, n: int, default_seed: int) -> pivot.PivotOrdering:
    names = {"row": "row", "col": "column", "row_rev": "row_reversed", "col_rev": "column_reversed"}
    if spec in names:
        return pivot.serial_ordering(n, names[spec])
    if spec == "perm" or spec.startswith("perm:"):
        seed = int(spec.split(":")[1]) if ":" in spec else default_seed
        return pivot.random_sp_ordering(n, seed)
    if spec == "sg" or spec.startswith("sg:"):
        parts = spec.split(":")
        seed = int(parts[1]) if len(parts) > 1 else default_seed
        num_ops = int(parts[2]) if len(parts) > 2 else None
        return pivot.random_sg_ordering(n, seed, num_ops=num_ops)
    if spec.startswith("file:"):
        return pivot.load_ordering(spec[len("file:"):])
    raise EberleinError(f"unknown strategy spec {spec!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eberlein",
        description="Norm-reducing Jacobi-type diagonalization of an arbitrary square matrix.",
    )
    ap.add_argument("--input", required=True, help="matrix CSV file")
    ap.add_argument("--out", required=True, help="output directory")
    ap.add_argument(
        "--strategy",
        default="col",
        help="row | col | row_rev | col_rev | perm[:<seed>] | sg[:<seed>[:<num_ops>]] | file:<path>",
    )
    ap.add_argument("--tol", type=float, default=None, help="per-sweep off-norm change tolerance")
    ap.add_argument("--max-sweeps", type=int, default=100)
    ap.add_argument("--real", action="store_true", help="real-arithmetic variant")
    ap.add_argument("--sort", action="store_true", help="keep diagonal real parts decreasing")
    ap.add_argument("--eigvecs", action="store_true", help="accumulate the transformation and its inverse")
    ap.add_argument("--trace", action="store_true", help="record and export the per-step trace")
    ap.add_argument("--logabs-every", type=int, default=0, metavar="S",
                    help="write a log-magnitude snapshot every S sweeps (0 = off)")
    ap.add_argument("--figures", action="store_true",
                    help="render convergence and structure figures (implies trace collection)")
    ap.add_argument("--seed", type=int, default=0, help="seed for seeded strategies without one")
    return ap


def _block_eigenvalues(A_final, blocks):
    out = []
    for (a, b) in blocks.boundaries:
        sub = np.asarray(A_final)[a:b, a:b]
        if b - a == 1:
            out.append((complex(sub[0, 0]),))
        elif b - a <= ORACLE_MAX_N:
            out.append(tuple(verification.eigenvalues_oracle(sub)))
        else:
            # beyond the oracle cap; fall back to the diagonal entries
            out.append(tuple(complex(x) for x in np.diagonal(sub)))
    return diagnostics.BlockPartition(blocks.boundaries, blocks.mu, tuple(out))


def _sort_by_real_diagonal(A, T, Ti):
    """Symmetric permutation putting diagonal real parts in decreasing order."""
    order = np.argsort(-np.real(np.diagonal(A)), kind="stable")
    A = A[np.ix_(order, order)]
    if T is not None:
        T = T[:, order]
        Ti = Ti[order, :]
    return A, T, Ti


def run_command(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_lines: list[str] = []

    def finish(code: int) -> int:
        (out_dir / "summary.txt").write_text("\n".join(summary_lines) + "\n", encoding="utf-8")
        return code

    try:
        A0 = parse_matrix_file(args.input)
        n = A0.shape[0] if A0.ndim == 2 else 0
        ordering = make_strategy(args.strategy, n, args.seed)
        tol = args.tol
        if tol is None:
            tol = float(os.environ.get("EBERLEIN_DEFAULT_TOL", "1e-8"))
        opts = solver.SolverOptions(
            tol_sweep=tol,
            max_sweeps=args.max_sweeps,
            mode="real" if args.real else "complex",
            enforce_order=args.sort,
            accumulate=args.eigvecs,
            record_trace=args.trace or args.figures,
        )

        def on_sweep(sweep, A):
            if args.logabs_every > 0 and sweep % args.logabs_every == 0:
                diagnostics.export_logabs(A, out_dir / f"logabs_{sweep}.csv")
                if args.figures:
                    from . import report

                    report.render_logabs(
                        A, out_dir / f"logabs_{sweep}.png", title=f"sweep {sweep}"
                    )

        result = solver.run(A0, ordering, opts, on_sweep=on_sweep)

        A_final = result.A
        T, Ti = result.T_acc, result.Tinv_acc
        if not args.sort:
            A_final, T, Ti = _sort_by_real_diagonal(A_final, T, Ti)
        blocks = _block_eigenvalues(A_final, diagnostics.detect_blocks(A_final))

        with open(out_dir / "eigenvalues.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write("block,mu,eig_re,eig_im\n")
            for bi, ((a, b), mu, eigs) in enumerate(
                zip(blocks.boundaries, blocks.mu, blocks.block_eigenvalues), start=1
            ):
                for ev in eigs:
                    fh.write(
                        f"{bi},{format(mu, '.17g')},{format(ev.real, '.17g')},{format(ev.imag, '.17g')}\n"
                    )

        write_matrix_csv(A_final, out_dir / "final_matrix.csv")
        if args.trace or args.figures:
            diagnostics.export_trace(result.trace, out_dir / "trace.csv")
        if args.eigvecs:
            write_matrix_csv(T, out_dir / "transform.csv")
            write_matrix_csv(Ti, out_dir / "transform_inv.csv")

        if args.figures:
            from . import report

            report.render_convergence(result.trace, out_dir / "convergence.png")
            report.render_logabs(A_final, out_dir / "structure.png", title="final iterate")

        summary_lines.append(f"converged: {str(result.converged).lower()}")
        summary_lines.append(f"status: {result.status}")
        summary_lines.append(f"sweeps: {result.sweeps}")
        summary_lines.append(f"final_off_B: {format(result.off_B, '.17g')}")
        summary_lines.append(f"final_norm_C: {format(result.norm_C, '.17g')}")
        summary_lines.append(
            "blocks: " + " ".join(f"{b - a}@{format(mu, '.6g')}" for (a, b), mu in zip(blocks.boundaries, blocks.mu))
        )
        summary_lines.append(f"strategy: {args.strategy}")
        summary_lines.append("strategy_provenance:")
        summary_lines.extend("  " + ln for ln in pivot.provenance_to_text(ordering).splitlines())
        return finish(0 if result.converged else 2)
    except EberleinError as exc:
        summary_lines.append("converged: false")
        summary_lines.append("status: error")
        summary_lines.append(f"error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return finish(1)
    except OSError as exc:
        summary_lines.append("converged: false")
        summary_lines.append("status: error")
        summary_lines.append(f"error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return finish(1)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run_command(args)


if __name__ == "__main__":
    raise SystemExit(main())
