"""Rewiring maps: symmetric arrays of pairs (w0, w1) acting edgewise on graphs.

The new status of pair ij is ``w0`` where the edge was absent and ``w1``
where it was present.  Entry states are numbered in the fixed order
(0,0)=0, (0,1)=1, (1,0)=2, (1,1)=3, i.e. ``state = 2*w0 + w1``; the
identity has every entry in state 1.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _motifs as mt
from ._rng import make_rng
from .graphs import DEFAULT_SAMPLES, MAX_SUBSETS, Density, FiniteGraph, Injection

#: Entry outcomes in state order.
OUTCOMES = ((0, 0), (0, 1), (1, 0), (1, 1))
IDENTITY_STATE = 1
#: Largest pattern size whose rewiring density is enumerated exactly.
MAX_EXACT_PATTERN = 3


def _bits(a, size: int, name: str) -> np.ndarray:
    a = np.array(a, dtype=np.uint8, copy=True)
    if a.shape != (size,):
        raise ValueError(f"{name} must have {size} entries, got shape {a.shape}")
    if a.size and a.max() > 1:
        raise ValueError(f"{name} entries must be 0 or 1")
    a.setflags(write=False)
    return a


class RewiringMap:
    """Immutable rewiring map on [n]."""

    __slots__ = ("n", "_w0", "_w1")

    def __init__(self, n: int, w0, w1):
        n = int(n)
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        size = mt.n_pairs(n)
        self.n = n
        self._w0 = _bits(w0, size, "w0")
        self._w1 = _bits(w1, size, "w1")

    @classmethod
    def identity(cls, n: int) -> "RewiringMap":
        size = mt.n_pairs(n)
        return cls(n, np.zeros(size, np.uint8), np.ones(size, np.uint8))

    @classmethod
    def from_states(cls, n: int, states) -> "RewiringMap":
        states = np.asarray(states, dtype=np.int64)
        if states.size and (states.min() < 0 or states.max() > 3):
            raise ValueError("entry states must lie in 0..3")
        return cls(n, states >> 1, states & 1)

    @classmethod
    def from_entries(cls, n: int, entries: Iterable[Sequence[int]]) -> "RewiringMap":
        """Identity except at the listed ``(i, j, w0, w1)`` entries."""
        states = np.full(mt.n_pairs(n), IDENTITY_STATE, dtype=np.int64)
        for i, j, w0, w1 in entries:
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"invalid pair ({i}, {j}) for n={n}")
            if w0 not in (0, 1) or w1 not in (0, 1):
                raise ValueError(f"entry values must be bits, got ({w0}, {w1})")
            states[mt.pair_index(i, j)] = 2 * w0 + w1
        return cls.from_states(n, states)

    @property
    def w0(self) -> np.ndarray:
        return self._w0

    @property
    def w1(self) -> np.ndarray:
        return self._w1

    @property
    def states(self) -> np.ndarray:
        return 2 * self._w0.astype(np.int64) + self._w1

    def __getitem__(self, ij) -> tuple[int, int]:
        i, j = ij
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"({i}, {j}) outside vertex set of size {self.n}")
        if i == j:
            return (0, 0)
        p = mt.pair_index(i, j)
        return (int(self._w0[p]), int(self._w1[p]))

    def entries(self) -> list[tuple[int, int, int, int]]:
        """Non-identity entries as ``(i, j, w0, w1)``."""
        lo, hi = mt.pair_arrays(self.n)
        idx = np.flatnonzero(self.states != IDENTITY_STATE)
        return [(int(lo[p]), int(hi[p]), int(self._w0[p]), int(self._w1[p])) for p in idx]

    def is_identity(self) -> bool:
        return not self._w0.any() and bool(self._w1.all())

    def __call__(self, G: FiniteGraph) -> FiniteGraph:
        return apply(self, G)

    def restrict(self, m: int) -> "RewiringMap":
        if not 1 <= m <= self.n:
            raise ValueError(f"cannot restrict a map on {self.n} vertices to {m}")
        size = mt.n_pairs(m)
        return RewiringMap(m, self._w0[:size], self._w1[:size])

    def project(self, phi) -> "RewiringMap":
        if not isinstance(phi, Injection):
            phi = Injection(tuple(phi))
        phi.check(self.n)
        idx = mt.image_pairs(phi.image)
        return RewiringMap(phi.m, self._w0[idx], self._w1[idx])

    def relabel(self, sigma) -> "RewiringMap":
        sigma = tuple(int(s) for s in sigma)
        if sorted(sigma) != list(range(self.n)):
            raise ValueError(f"{sigma} is not a permutation of range({self.n})")
        return self.project(sigma)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RewiringMap):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self._w0, other._w0)
                and np.array_equal(self._w1, other._w1))

    def __hash__(self) -> int:
        return hash((self.n, self._w0.tobytes(), self._w1.tobytes()))

    def __repr__(self) -> str:
        return f"RewiringMap(n={self.n}, entries={self.entries()})"


def apply(W: RewiringMap, G: FiniteGraph) -> FiniteGraph:
    if W.n != G.n:
        raise ValueError(f"map on {W.n} vertices applied to graph on {G.n}")
    return FiniteGraph(G.n, np.where(G.bits == 0, W.w0, W.w1))


def compose(outer: RewiringMap, inner: RewiringMap) -> RewiringMap:
    """The map ``G -> outer(inner(G))``."""
    if outer.n != inner.n:
        raise ValueError(f"map sizes differ: {outer.n} vs {inner.n}")
    v0 = np.where(inner.w0 == 0, outer.w0, outer.w1)
    v1 = np.where(inner.w1 == 0, outer.w0, outer.w1)
    return RewiringMap(inner.n, v0, v1)


def single_edge_map(n: int, i: int, j: int, k: int) -> RewiringMap:
    """Set pair {i, j} to ``k`` whatever its status; leave every other pair alone."""
    if i == j:
        raise ValueError("single edge map needs two distinct vertices")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"pair ({i}, {j}) outside vertex set of size {n}")
    if k not in (0, 1):
        raise ValueError(f"k must be 0 or 1, got {k}")
    return RewiringMap.from_entries(n, [(min(i, j), max(i, j), k, k)])


def vertex_update_map(n: int, i: int, x0, x1) -> RewiringMap:
    """Rewire only pairs incident to ``i``: pair {i, j} gets entry (x0[j], x1[j])."""
    if not 0 <= i < n:
        raise ValueError(f"vertex {i} outside vertex set of size {n}")
    x0 = np.asarray(x0, dtype=np.uint8)
    x1 = np.asarray(x1, dtype=np.uint8)
    if x0.shape != (n,) or x1.shape != (n,):
        raise ValueError(f"x0 and x1 must have length {n}")
    size = mt.n_pairs(n)
    w0 = np.zeros(size, np.uint8)
    w1 = np.ones(size, np.uint8)
    lo, hi = mt.pair_arrays(n)
    inc = (lo == i) | (hi == i)
    other = np.where(lo == i, hi, lo)[inc]
    w0[inc] = x0[other]
    w1[inc] = x1[other]
    return RewiringMap(n, w0, w1)


def rewiring_density(V: RewiringMap, W: RewiringMap, *, samples: int = DEFAULT_SAMPLES,
                     rng=None, max_subsets: int = MAX_SUBSETS) -> Density:
    """delta(V, W): fraction of injections phi : [m] -> [n] with W^phi = V."""
    if V.n > W.n:
        raise ValueError(f"pattern on {V.n} vertices does not fit in a map on {W.n}")
    from math import comb

    m, n = V.n, W.n
    v_code = int(mt.encode(V.states, 4))
    if m <= MAX_EXACT_PATTERN and comb(n, m) <= max_subsets:
        hist = mt.subset_histogram(W.states, n, m, 4)
        count = int(mt.injection_counts(hist, m, 4, [v_code])[0])
        return Density(Fraction(count, mt.falling(n, m)), exact=True)
    rng = make_rng(0 if rng is None else rng)
    phis = mt.random_injections(n, m, samples, rng)
    hits = mt.encode(W.states[mt.image_pairs(phis)], 4) == v_code
    p = float(hits.mean())
    return Density(p, exact=False, stderr=float(np.sqrt(p * (1 - p) / samples)), samples=samples)


def level_rewiring_densities(W: RewiringMap, m: int) -> np.ndarray:
    """delta(V, W) for all V in W_[m] (indexed by base-4 code), by exact enumeration."""
    if m > W.n:
        raise ValueError(f"level {m} exceeds map size {W.n}")
    hist = mt.subset_histogram(W.states, W.n, m, 4)
    return mt.injection_counts(hist, m, 4) / mt.falling(W.n, m)
