"""Shared helpers for the test suite."""

import itertools

import numpy as np
import pytest


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_complex(n, seed):
    rng = rng_for(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_real(n, seed):
    return rng_for(seed).standard_normal((n, n))


def random_hermitian(n, seed):
    G = random_complex(n, seed)
    return (G + G.conj().T) / 2


def matching_distance(got, want):
    """Smallest max pairwise distance over assignments of got onto want.

    Brute force over permutations; fine for the desk-scale multisets the
    oracle produces (n <= 10).
    """
    got = list(got)
    want = list(want)
    assert len(got) == len(want)
    if len(got) > 7:
        # greedy refinement is enough once sorted by real then imaginary part
        key = lambda z: (round(z.real, 6), round(z.imag, 6))
        got = sorted(got, key=key)
        want = sorted(want, key=key)
        return max(abs(g - w) for g, w in zip(got, want))
    best = np.inf
    for perm in itertools.permutations(range(len(got))):
        d = max(abs(got[i] - want[perm[i]]) for i in range(len(got)))
        best = min(best, d)
    return best


@pytest.fixture
def tmp_csv(tmp_path):
    def write(text, name="m.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
