"""Cyclic pivot orderings and their strategy algebra.

An ordering visits every pair of the strict upper triangle exactly once per
sweep.  Serial orderings walk the matrix column by column (or row by row),
optionally permuting the visiting order inside each line; the generalized
family is everything reachable from those by a vertex relabeling plus chains
of admissible transpositions and cyclic shifts.

Pairs are 0-based in memory; every file format and log line is 1-based.
Randomness comes from numpy's PCG64 so orderings reproduce from a 64-bit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ParseError

FAMILIES = ("column", "row", "column_reversed", "row_reversed")

DEFAULT_OPS_PER_PAIR = 4  # num_ops defaults to 4N


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class PivotOrdering:
    n: int
    pairs: tuple[tuple[int, int], ...]
    provenance: tuple[tuple, ...] = ()


@dataclass
class PivotCursor:
    ordering: PivotOrdering
    k: int = 0


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    expected_length: int
    actual_length: int
    duplicates: tuple[tuple[int, int], ...] = ()
    missing: tuple[tuple[int, int], ...] = ()


def validate_ordering(ordering: PivotOrdering) -> ValidationReport:
    """Check that the pair sequence is a permutation of the strict upper triangle."""
    n = ordering.n
    want = {(i, j) for i in range(n) for j in range(i + 1, n)}
    seen: dict[tuple[int, int], int] = {}
    for pr in ordering.pairs:
        seen[pr] = seen.get(pr, 0) + 1
    duplicates = tuple(sorted(p for p, c in seen.items() if c > 1))
    missing = tuple(sorted(want - set(seen)))
    bogus = set(seen) - want
    ok = (
        len(ordering.pairs) == len(want)
        and not duplicates
        and not missing
        and not bogus
    )
    return ValidationReport(ok, len(want), len(ordering.pairs), duplicates, missing)


def _norm_perm(perm, lo: int, hi: int, what: str) -> tuple[int, ...]:
    """Validate a visiting order for the 1-based range lo..hi, return it 0-based."""
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(lo, hi + 1)):
        raise ContractViolation(f"{what} must permute {lo}..{hi}, got {perm}")
    return tuple(x - 1 for x in perm)


def serial_ordering(n: int, family: str, perms: dict[int, tuple] | None = None) -> PivotOrdering:
    """Column- or row-wise ordering, with optional within-line permutations.

    perms maps the 1-based line index (column j = 3..n, or row i = 1..n-2) to
    the 1-based visiting order of that line; missing lines use the identity.
    """
    if n < 2:
        raise ContractViolation(f"need n >= 2, got {n}")
    if family not in FAMILIES:
        raise ContractViolation(f"unknown family {family!r}")
    perms = dict(perms or {})
    base = family.removesuffix("_reversed")
    pairs: list[tuple[int, int]] = []
    log_perms: list[tuple[int, tuple[int, ...]]] = []
    if base == "column":
        pairs.append((0, 1))
        for j in range(3, n + 1):
            order = perms.pop(j, tuple(range(1, j)))
            tau = _norm_perm(order, 1, j - 1, f"tau_{j}")
            log_perms.append((j, tuple(t + 1 for t in tau)))
            pairs.extend((t, j - 1) for t in tau)
    else:
        pairs.append((n - 2, n - 1))
        for i in range(n - 2, 0, -1):
            order = perms.pop(i, tuple(range(i + 1, n + 1)))
            tau = _norm_perm(order, i + 1, n, f"tau_{i}")
            log_perms.append((i, tuple(t + 1 for t in tau)))
            pairs.extend((i - 1, t) for t in tau)
    if perms:
        raise ContractViolation(f"permutations given for lines outside the family: {sorted(perms)}")
    if family.endswith("_reversed"):
        pairs.reverse()
    ordering = PivotOrdering(n, tuple(pairs), (("base", family, tuple(log_perms)),))
    report = validate_ordering(ordering)
    assert report.ok, report
    return ordering


def _with_pairs(o: PivotOrdering, pairs, entry) -> PivotOrdering:
    return PivotOrdering(o.n, tuple(pairs), o.provenance + (entry,))


def transform_ordering(ordering: PivotOrdering, op: str, *args) -> PivotOrdering:
    """Apply one equivalence operation; the result is logged in the provenance.

    op is one of "admissible_transposition" (position r, 0-based),
    "shift" (length 0..N), "vertex_permutation" (0-based image sequence),
    or "reverse".
    """
    pairs = list(ordering.pairs)
    N = len(pairs)
    if op == "admissible_transposition":
        (r,) = args
        if not 0 <= r < N - 1:
            raise ContractViolation(f"transposition position {r} out of range")
        a, b = pairs[r], pairs[r + 1]
        if set(a) & set(b):
            raise ContractViolation(
                f"pairs {a} and {b} at position {r} share an index; transposition not admissible"
            )
        pairs[r], pairs[r + 1] = b, a
        return _with_pairs(ordering, pairs, ("transposition", int(r)))
    if op == "shift":
        (length,) = args
        if not 0 <= length <= N:
            raise ContractViolation(f"shift length {length} outside 0..{N}")
        pairs = pairs[length:] + pairs[:length]
        return _with_pairs(ordering, pairs, ("shift", int(length)))
    if op == "vertex_permutation":
        (q,) = args
        q = tuple(int(x) for x in q)
        if sorted(q) != list(range(ordering.n)):
            raise ContractViolation(f"vertex permutation must permute 0..{ordering.n - 1}")
        pairs = [tuple(sorted((q[i], q[j]))) for i, j in pairs]
        return _with_pairs(ordering, pairs, ("vertex_permutation", q))
    if op == "reverse":
        return _with_pairs(ordering, reversed(pairs), ("reverse",))
    raise ContractViolation(f"unknown ordering operation {op!r}")


def replay_provenance(n: int, provenance) -> PivotOrdering:
    """Rebuild an ordering from its construction log."""
    ordering = None
    for entry in provenance:
        tag, *rest = entry
        if tag == "base":
            family, log_perms = rest
            ordering = serial_ordering(n, family, {line: perm for line, perm in log_perms})
        elif ordering is None:
            raise ContractViolation("provenance does not start with a base entry")
        elif tag == "transposition":
            ordering = transform_ordering(ordering, "admissible_transposition", rest[0])
        elif tag in ("shift", "vertex_permutation"):
            ordering = transform_ordering(ordering, tag, rest[0])
        elif tag == "reverse":
            ordering = transform_ordering(ordering, "reverse")
        else:
            raise ContractViolation(f"unknown provenance entry {entry!r}")
    if ordering is None:
        raise ContractViolation("empty provenance")
    return ordering


def random_sp_ordering(n: int, seed: int) -> PivotOrdering:
    """Sample a serial ordering with random within-line permutations."""
    if n < 2:
        raise ContractViolation(f"need n >= 2, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    family = FAMILIES[int(rng.integers(len(FAMILIES)))]
    perms: dict[int, tuple[int, ...]] = {}
    if family.startswith("column"):
        for j in range(3, n + 1):
            perms[j] = tuple(int(x) + 1 for x in rng.permutation(j - 1))
    else:
        for i in range(1, n - 1):
            perms[i] = tuple(int(x) + i + 1 for x in rng.permutation(n - i))
    return serial_ordering(n, family, perms)


def random_sg_ordering(n: int, seed: int, num_ops: int | None = None) -> PivotOrdering:
    """Sample a generalized serial ordering, certified by its construction log.

    A random serial base (family + within-line permutations) gets one random
    vertex permutation followed by num_ops random shifts and admissible
    transpositions.  Deterministic for a fixed (n, seed, num_ops).
    """
    if n < 2:
        raise ContractViolation(f"need n >= 2, got {n}")
    N = num_pairs(n)
    if num_ops is None:
        num_ops = DEFAULT_OPS_PER_PAIR * N
    if num_ops < 0:
        raise ContractViolation("num_ops must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(seed))
    ordering = random_sp_ordering(n, int(rng.integers(2**63)))
    ordering = transform_ordering(
        ordering, "vertex_permutation", tuple(int(x) for x in rng.permutation(n))
    )
    for _ in range(num_ops):
        do_transposition = bool(rng.integers(2))
        if do_transposition:
            valid = [
                r
                for r in range(N - 1)
                if not set(ordering.pairs[r]) & set(ordering.pairs[r + 1])
            ]
            if valid:
                r = valid[int(rng.integers(len(valid)))]
                ordering = transform_ordering(ordering, "admissible_transposition", r)
                continue
        ordering = transform_ordering(ordering, "shift", int(rng.integers(N + 1)))
    return ordering


def next_pivot(cursor: PivotCursor) -> tuple[int, int]:
    """Emit pairs[k mod N] and advance the counter."""
    pairs = cursor.ordering.pairs
    pair = pairs[cursor.k % len(pairs)]
    cursor.k += 1
    return pair


# ---------------------------------------------------------------------------
# serialization (1-based on disk)

def save_ordering(ordering: PivotOrdering, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ordering_to_text(ordering))


def ordering_to_text(ordering: PivotOrdering) -> str:
    lines = [f"{ordering.n} {len(ordering.pairs)}"]
    lines.extend(f"{i + 1} {j + 1}" for i, j in ordering.pairs)
    return "\n".join(lines) + "\n"


def load_ordering(path) -> PivotOrdering:
    with open(path, encoding="utf-8") as fh:
        return ordering_from_text(fh.read())


def ordering_from_text(text: str) -> PivotOrdering:
    lines = [ln for ln in (ln.strip() for ln in text.splitlines()) if ln]
    if not lines:
        raise ParseError("empty ordering file", line=1)
    try:
        n, N = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}", line=1) from exc
    pairs = []
    for idx, ln in enumerate(lines[1:], start=2):
        try:
            i, j = (int(x) for x in ln.split())
        except ValueError as exc:
            raise ParseError(f"bad pair line {ln!r}", line=idx) from exc
        if not 1 <= i < j <= n:
            raise ParseError(f"pair ({i}, {j}) out of range for n={n}", line=idx)
        pairs.append((i - 1, j - 1))
    if len(pairs) != N:
        raise ParseError(f"header promised {N} pairs, found {len(pairs)}")
    ordering = PivotOrdering(n, tuple(pairs), (("file",),))
    report = validate_ordering(ordering)
    if not report.ok:
        raise ParseError(f"ordering does not cover the upper triangle: {report}")
    return ordering


def provenance_to_text(ordering: PivotOrdering) -> str:
    """Line-oriented operation log, 1-based, replayable."""
    lines = []
    for entry in ordering.provenance:
        tag, *rest = entry
        if tag == "base":
            family, log_perms = rest
            parts = [f"{line}:{','.join(str(x) for x in perm)}" for line, perm in log_perms]
            lines.append(" ".join(["base", family] + parts))
        elif tag == "vertex_permutation":
            lines.append("vertex_permutation " + " ".join(str(x + 1) for x in rest[0]))
        elif tag in ("transposition", "shift"):
            lines.append(f"{tag} {rest[0] + (1 if tag == 'transposition' else 0)}")
        elif tag in ("reverse", "file"):
            lines.append(tag)
        else:
            raise ContractViolation(f"unknown provenance entry {entry!r}")
    return "\n".join(lines) + "\n"


def provenance_from_text(n: int, text: str) -> PivotOrdering:
    provenance = []
    for idx, ln in enumerate(text.splitlines(), start=1):
        ln = ln.strip()
        if not ln:
            continue
        tok = ln.split()
        if tok[0] == "base":
            log_perms = []
            for part in tok[2:]:
                line, perm = part.split(":")
                log_perms.append((int(line), tuple(int(x) for x in perm.split(","))))
            provenance.append(("base", tok[1], tuple(log_perms)))
        elif tok[0] == "vertex_permutation":
            provenance.append(("vertex_permutation", tuple(int(x) - 1 for x in tok[1:])))
        elif tok[0] == "transposition":
            provenance.append(("transposition", int(tok[1]) - 1))
        elif tok[0] == "shift":
            provenance.append(("shift", int(tok[1])))
        elif tok[0] == "reverse":
            provenance.append(("reverse",))
        else:
            raise ParseError(f"unknown provenance line {ln!r}", line=idx)
    return replay_provenance(n, provenance)
