"""Pair indexing and injection counting shared by graphs and rewiring maps.

Pairs {i, j} (0-based, i < j) are laid out in colex order,
(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...
so that the pairs of [m] form a prefix of the pairs of [n] for every m <= n.
Restriction is therefore slicing, and the integer code of a pattern on [m]
(digit p = state of pair p) is compatible across levels.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, perm

import numpy as np


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@lru_cache(maxsize=64)
def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays (lo, hi) of all pairs of range(n) in colex order."""
    hi = np.repeat(np.arange(n), np.arange(n))
    lo = np.concatenate([np.arange(j) for j in range(n)]) if n > 1 else np.zeros(0)
    lo, hi = lo.astype(np.int64), hi.astype(np.int64)
    lo.setflags(write=False)
    hi.setflags(write=False)
    return lo, hi


def image_pairs(image) -> np.ndarray:
    """Index of pair {image[a], image[b]} in the big layout, for each pair (a, b) of the small one.

    ``image`` may be 1-d (one injection) or 2-d (one injection per row).
    """
    image = np.asarray(image, dtype=np.int64)
    m = image.shape[-1]
    lo, hi = pair_arrays(m)
    a = image[..., lo]
    b = image[..., hi]
    small = np.minimum(a, b)
    big = np.maximum(a, b)
    return big * (big - 1) // 2 + small


def encode(digits: np.ndarray, base: int) -> np.ndarray:
    """Integer codes of rows of pair states (digit p has weight base**p)."""
    digits = np.asarray(digits, dtype=np.int64)
    weights = base ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ weights


def decode(codes, m: int, base: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    weights = base ** np.arange(n_pairs(m), dtype=np.int64)
    return (codes[..., None] // weights) % base


@lru_cache(maxsize=32)
def permutations(m: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(m))), dtype=np.int64).reshape(-1, m)


def relabel_codes(codes, m: int, base: int, perm_: np.ndarray) -> np.ndarray:
    """Codes of F^perm for each code F, where F^perm(a, b) = F(perm(a), perm(b))."""
    digits = decode(codes, m, base)
    return encode(digits[..., image_pairs(perm_)], base)


def _subset_codes(states: np.ndarray, n: int, m: int, base: int):
    """All m-subsets of range(n) in colex order, with the code of the pattern on each."""
    if m == 1:
        return np.arange(n, dtype=np.int64)[:, None], np.zeros(n, dtype=np.int64)
    subs, codes = _subset_codes(states, n, m - 1, base)
    offset = n_pairs(m - 1)
    out_subs, out_codes = [], []
    for k in range(m - 1, n):
        r = comb(k, m - 1)
        s = subs[:r]
        extra = states[k * (k - 1) // 2 + s] @ (base ** np.arange(offset, offset + m - 1, dtype=np.int64))
        out_subs.append(np.column_stack([s, np.full(r, k, dtype=np.int64)]))
        out_codes.append(codes[:r] + extra)
    return np.concatenate(out_subs), np.concatenate(out_codes)


def subset_histogram(states: np.ndarray, n: int, m: int, base: int) -> np.ndarray:
    """Number of m-subsets S of range(n) whose (sorted) restricted pattern has each code."""
    size = base ** n_pairs(m)
    states = np.asarray(states, dtype=np.int64)
    if m == 1:
        hist = np.zeros(size, dtype=np.int64)
        hist[0] = n
        return hist
    if m == 2:
        return np.bincount(states, minlength=size).astype(np.int64)
    # the top level is accumulated block by block so it is never materialised
    subs, codes = _subset_codes(states, n, m - 1, base)
    offset = n_pairs(m - 1)
    weights = base ** np.arange(offset, offset + m - 1, dtype=np.int64)
    hist = np.zeros(size, dtype=np.int64)
    for k in range(m - 1, n):
        r = comb(k, m - 1)
        top = codes[:r] + states[k * (k - 1) // 2 + subs[:r]] @ weights
        hist += np.bincount(top, minlength=size)
    return hist


def injection_counts(hist: np.ndarray, m: int, base: int, codes=None) -> np.ndarray:
    """ind(F, .) for each requested code F, from the subset histogram.

    Every injection factors uniquely as a sorted subset followed by a
    permutation of [m], so ind(F, G) = sum over perms p of hist[code(F^p)].
    """
    if codes is None:
        codes = np.arange(hist.size, dtype=np.int64)
    codes = np.asarray(codes, dtype=np.int64)
    total = np.zeros(codes.shape, dtype=np.int64)
    for p in permutations(m):
        total += hist[relabel_codes(codes, m, base, p)]
    return total


def random_injections(n: int, m: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random injections [m] -> [n], one per row."""
    if m * m > n:
        return np.argsort(rng.random((count, n)), axis=1)[:, :m]
    # birthday bound keeps rejection rare here
    out = rng.integers(0, n, size=(count, m))
    if m > 1:
        while True:
            srt = np.sort(out, axis=1)
            bad = np.any(srt[:, 1:] == srt[:, :-1], axis=1)
            if not bad.any():
                break
            out[bad] = rng.integers(0, n, size=(int(bad.sum()), m))
    return out


def falling(n: int, m: int) -> int:
    return perm(n, m)
