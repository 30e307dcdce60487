"""Finite simple graphs on vertex set {0, ..., n-1}.

Vertices are 0-based throughout the Python API; the serialised formats in
:mod:`exchgraph.io` use 1-based labels.  A graph stores one bit per unordered
pair in colex order (see :mod:`exchgraph._motifs`), so symmetry and the empty
diagonal hold by construction and ``G.restrict(m)`` is a prefix slice.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _motifs as mt
from ._rng import make_rng

#: Largest number of m-subsets enumerated before densities switch to sampling.
MAX_SUBSETS = 2_000_000
#: Largest motif size counted exactly.
MAX_EXACT_MOTIF = 5
DEFAULT_SAMPLES = 20_000


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.uint8, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Injection:
    """An injective map [m] -> [n], given by its image (0-based)."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        if len(set(image)) != len(image):
            raise ValueError(f"injection image has repeated entries: {image}")
        if any(x < 0 for x in image):
            raise ValueError(f"negative vertex in injection image: {image}")
        object.__setattr__(self, "image", image)

    @property
    def m(self) -> int:
        return len(self.image)

    def check(self, n: int) -> None:
        if self.image and max(self.image) >= n:
            raise ValueError(f"injection image {self.image} not within [0, {n})")


class FiniteGraph:
    """Immutable undirected loop-free graph."""

    __slots__ = ("n", "_bits")

    def __init__(self, n: int, bits=None):
        n = int(n)
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        if bits is None:
            bits = np.zeros(mt.n_pairs(n), dtype=np.uint8)
        bits = np.asarray(bits)
        if bits.shape != (mt.n_pairs(n),):
            raise ValueError(f"expected {mt.n_pairs(n)} pair bits for n={n}, got shape {bits.shape}")
        if bits.size and (bits.min() < 0 or bits.max() > 1):
            raise ValueError("pair bits must be 0 or 1")
        self.n = n
        self._bits = _readonly(bits)

    # construction -----------------------------------------------------
    @classmethod
    def empty(cls, n: int) -> "FiniteGraph":
        return cls(n)

    @classmethod
    def complete(cls, n: int) -> "FiniteGraph":
        return cls(n, np.ones(mt.n_pairs(n), dtype=np.uint8))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "FiniteGraph":
        bits = np.zeros(mt.n_pairs(n), dtype=np.uint8)
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) outside vertex set of size {n}")
            bits[mt.pair_index(i, j)] = 1
        return cls(n, bits)

    @classmethod
    def from_adjacency(cls, adj) -> "FiniteGraph":
        adj = np.asarray(adj)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError("adjacency must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("adjacency must have an empty diagonal")
        lo, hi = mt.pair_arrays(n)
        return cls(n, (adj[lo, hi] != 0).astype(np.uint8))

    @classmethod
    def from_code(cls, n: int, code: int) -> "FiniteGraph":
        return cls(n, mt.decode(code, n, 2).astype(np.uint8))

    # access -----------------------------------------------------------
    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def code(self) -> int:
        """Motif id within G_[n]: bit p is the status of pair p (colex order)."""
        return int(sum(1 << p for p in np.flatnonzero(self._bits)))

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"({i}, {j}) outside vertex set of size {self.n}")
        if i == j:
            return 0
        return int(self._bits[mt.pair_index(i, j)])

    def edges(self) -> list[tuple[int, int]]:
        lo, hi = mt.pair_arrays(self.n)
        idx = np.flatnonzero(self._bits)
        return [(int(lo[p]), int(hi[p])) for p in idx]

    @property
    def num_edges(self) -> int:
        return int(self._bits.sum())

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        lo, hi = mt.pair_arrays(self.n)
        a[lo, hi] = self._bits
        a[hi, lo] = self._bits
        return a

    def edge_density(self) -> float:
        return float(self._bits.mean()) if self._bits.size else 0.0

    # structure maps -----------------------------------------------------
    def restrict(self, m: int) -> "FiniteGraph":
        """G|[m], the induced subgraph on the first m vertices."""
        if not 1 <= m <= self.n:
            raise ValueError(f"cannot restrict a graph on {self.n} vertices to {m}")
        return FiniteGraph(m, self._bits[: mt.n_pairs(m)])

    def project(self, phi) -> "FiniteGraph":
        """G^phi with G^phi(a, b) = G(phi(a), phi(b))."""
        if not isinstance(phi, Injection):
            phi = Injection(tuple(phi))
        phi.check(self.n)
        if phi.m < 1:
            raise ValueError("injection must have a non-empty domain")
        return FiniteGraph(phi.m, self._bits[mt.image_pairs(phi.image)])

    def relabel(self, sigma) -> "FiniteGraph":
        """G^sigma with G^sigma(i, j) = G(sigma(i), sigma(j))."""
        sigma = tuple(int(s) for s in sigma)
        if sorted(sigma) != list(range(self.n)):
            raise ValueError(f"{sigma} is not a permutation of range({self.n})")
        return self.project(sigma)

    # dunder -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteGraph(n={self.n}, edges={self.edges()})"


def enumerate_graphs(m: int) -> list[FiniteGraph]:
    """All 2**C(m,2) labelled graphs on [m], indexed by motif code."""
    return [FiniteGraph.from_code(m, c) for c in range(2 ** mt.n_pairs(m))]


@dataclass(frozen=True)
class Density:
    """Result of a density computation.

    ``value`` is a :class:`~fractions.Fraction` when computed by exact
    enumeration and a float otherwise, in which case ``stderr`` is the
    binomial standard error of the estimate.
    """

    value: Fraction | float
    exact: bool
    stderr: float = 0.0
    samples: int = 0

    def __float__(self) -> float:
        return float(self.value)


def subgraph_count(F: FiniteGraph, G: FiniteGraph) -> int:
    """ind(F, G): number of injections phi : [m] -> [n] with G^phi = F. Always exact."""
    if F.n > G.n:
        raise ValueError(f"pattern on {F.n} vertices does not fit in a graph on {G.n}")
    hist = mt.subset_histogram(G.bits, G.n, F.n, 2)
    return int(mt.injection_counts(hist, F.n, 2, [F.code])[0])


def _exact_feasible(m: int, n: int, max_exact: int, max_subsets: int) -> bool:
    from math import comb

    return m <= max_exact and comb(n, m) <= max_subsets


def density(F: FiniteGraph, G: FiniteGraph, *, samples: int = DEFAULT_SAMPLES, rng=None,
            max_subsets: int = MAX_SUBSETS) -> Density:
    """delta(F, G) = ind(F, G) / n^{(m)} (falling factorial).

    Exact for motifs on at most five vertices when the number of vertex
    subsets to visit is at most ``max_subsets``; otherwise estimated from
    ``samples`` uniform random injections drawn from ``rng`` (seed 0 if omitted).
    """
    if F.n > G.n:
        raise ValueError(f"pattern on {F.n} vertices does not fit in a graph on {G.n}")
    m, n = F.n, G.n
    if _exact_feasible(m, n, MAX_EXACT_MOTIF, max_subsets):
        return Density(Fraction(subgraph_count(F, G), mt.falling(n, m)), exact=True)
    rng = make_rng(0 if rng is None else rng)
    phis = mt.random_injections(n, m, samples, rng)
    hits = np.all(G.bits[mt.image_pairs(phis)] == F.bits, axis=1)
    p = float(hits.mean())
    return Density(p, exact=False, stderr=float(np.sqrt(p * (1 - p) / samples)), samples=samples)


def level_densities(G: FiniteGraph, m: int, *, samples: int = DEFAULT_SAMPLES, rng=None,
                    max_subsets: int = MAX_SUBSETS) -> tuple[np.ndarray, bool]:
    """delta(F, G) for every F in G_[m], indexed by motif code, and the exact flag."""
    if m > G.n:
        raise ValueError(f"level {m} exceeds graph size {G.n}")
    n = G.n
    if _exact_feasible(m, n, MAX_EXACT_MOTIF, max_subsets):
        hist = mt.subset_histogram(G.bits, n, m, 2)
        return mt.injection_counts(hist, m, 2) / mt.falling(n, m), True
    rng = make_rng(0 if rng is None else rng)
    phis = mt.random_injections(n, m, samples, rng)
    codes = mt.encode(G.bits[mt.image_pairs(phis)], 2)
    return np.bincount(codes, minlength=2 ** mt.n_pairs(m)) / samples, False


def graph_metric(G: FiniteGraph, H: FiniteGraph) -> Fraction:
    """1 / max{k : G|[k] = H|[k]}, with 0 when the graphs are equal."""
    if G.n != H.n:
        raise ValueError(f"graph sizes differ: {G.n} vs {H.n}")
    diff = np.flatnonzero(G.bits != H.bits)
    if diff.size == 0:
        return Fraction(0)
    _, hi = mt.pair_arrays(G.n)
    # first differing pair in colex order has the smallest larger endpoint;
    # the graphs agree on [hi] (1-based count) and differ on [hi + 1]
    return Fraction(1, int(hi[diff[0]]))
