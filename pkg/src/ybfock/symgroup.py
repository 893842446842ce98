"""Symmetric-group combinatorics.

A permutation of ``{0, ..., n-1}`` is a tuple ``image`` with ``sigma(i) =
image[i]``.  Composition is ``(sigma * tau)(i) = sigma(tau(i))``.  Adjacent
transpositions are indexed from 1 like the ladder of local operators they
stand for: ``pi_k`` swaps positions ``k-1`` and ``k`` (0-based).
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

Permutation = tuple[int, ...]

MAX_ENUMERATION = 8


def validate(sigma) -> Permutation:
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(len(sigma))):
        raise ValueError(f"{sigma} is not a permutation of 0..{len(sigma) - 1}")
    return sigma


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    return tuple(sigma[t] for t in tau)


def inverse(sigma: Permutation) -> Permutation:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def transposition(n: int, k: int) -> Permutation:
    """The adjacent transposition ``pi_k`` in ``S_n`` (``1 <= k <= n-1``)."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"pi_{k} is not defined in S_{n}")
    img = list(range(n))
    img[k - 1], img[k] = img[k], img[k - 1]
    return tuple(img)


def reversal(n: int) -> Permutation:
    return tuple(range(n - 1, -1, -1))


def inversions(sigma: Permutation) -> int:
    n = len(sigma)
    return sum(1 for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j])


def inversion_pairs(sigma: Permutation) -> list[tuple[int, int]]:
    n = len(sigma)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j]]


def reduced_word(sigma: Permutation) -> list[int]:
    """Reduced word ``[k_1, ..., k_m]`` with ``sigma = pi_{k_1} ... pi_{k_m}``.

    Bubble sort on right descents: ``sigma = sigma' pi_k`` whenever
    ``sigma(k-1) > sigma(k)``, and the length drops by one.
    """
    cur = list(validate(sigma))
    word: list[int] = []
    done = False
    while not done:
        done = True
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                word.append(i + 1)
                done = False
    word.reverse()
    return word


def reduced_word_left(sigma: Permutation) -> list[int]:
    """A second reduced word obtained by peeling left descents.

    ``sigma = pi_k sigma''`` when ``k`` precedes ``k-1`` in the one-line
    form of ``sigma``; generally a different word than :func:`reduced_word`.
    """
    cur = list(validate(sigma))
    word: list[int] = []
    while True:
        pos = inverse(tuple(cur))
        for k in range(len(cur) - 1, 0, -1):
            if pos[k - 1] > pos[k]:
                # left-multiply by pi_k: swap the values k-1 and k
                a, b = pos[k - 1], pos[k]
                cur[a], cur[b] = cur[b], cur[a]
                word.append(k)
                break
        else:
            break
    return word


def word_to_permutation(word, n: int) -> Permutation:
    out = identity(n)
    for k in word:
        out = compose(out, transposition(n, k))
    return out


def all_permutations(n: int) -> list[Permutation]:
    """``S_n`` in lexicographic order; refuses beyond ``n = 8``."""
    if n > MAX_ENUMERATION:
        raise ValueError(f"S_{n} enumeration exceeds the limit n <= {MAX_ENUMERATION}")
    return list(itertools.permutations(range(n)))


def shuffle_representatives(n: int, k: int) -> list[Permutation]:
    """The ``(n-k, k)``-shuffles, lexicographic by image.

    A shuffle is increasing on positions ``0..n-k-1`` and on ``n-k..n-1``;
    these are the minimal-length representatives of the left cosets
    ``u (S_{n-k} x S_k)``.  Their inverses are the minimal representatives of
    the right cosets ``(S_{n-k} x S_k) sigma``.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    reps = []
    for tail in itertools.combinations(range(n), k):
        head = [x for x in range(n) if x not in tail]
        reps.append(tuple(head) + tuple(tail))
    reps.sort()
    assert len(reps) == comb(n, k)
    return reps


def coset_representatives(n: int, k: int) -> list[Permutation]:
    """Minimal right-coset representatives (inverses of the shuffles)."""
    return [inverse(s) for s in shuffle_representatives(n, k)]


def as_array(perms) -> np.ndarray:
    perms = list(perms)
    if not perms:
        return np.zeros((0, 0), dtype=np.int64)
    return np.asarray(perms, dtype=np.int64)
