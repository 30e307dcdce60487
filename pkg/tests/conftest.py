"""Independent brute-force oracles and hypothesis strategies shared by the tests.

The oracles work on plain adjacency matrices and itertools enumeration, never
on the package's colex codes, so they check the fast paths independently.
"""
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import strategies as st

from exchgraph import FiniteGraph, RewiringMap


def brute_ind(F_adj: np.ndarray, G_adj: np.ndarray) -> int:
    m, n = F_adj.shape[0], G_adj.shape[0]
    count = 0
    for phi in permutations(range(n), m):
        if all(G_adj[phi[a], phi[b]] == F_adj[a, b] for a in range(m) for b in range(a + 1, m)):
            count += 1
    return count


def brute_density(F_adj, G_adj) -> Fraction:
    m, n = F_adj.shape[0], G_adj.shape[0]
    total = 1
    for k in range(m):
        total *= n - k
    return Fraction(brute_ind(F_adj, G_adj), total)


def rising(x, j):
    out = Fraction(1)
    for i in range(j):
        out *= x + i
    return out


def all_adjacencies(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(2 ** len(pairs)):
        a = np.zeros((n, n), dtype=np.uint8)
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                a[i, j] = a[j, i] = 1
        yield a


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return FiniteGraph(n, np.array(bits, dtype=np.uint8))


@st.composite
def graphs_of(draw, n):
    bits = draw(st.lists(st.integers(0, 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return FiniteGraph(n, np.array(bits, dtype=np.uint8))


@st.composite
def maps_of(draw, n):
    states = draw(st.lists(st.integers(0, 3), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return RewiringMap.from_states(n, np.array(states, dtype=np.int64))


@st.composite
def perms_of(draw, n):
    return tuple(draw(st.permutations(list(range(n)))))


@pytest.fixture
def triangle():
    return FiniteGraph.complete(3)


@pytest.fixture
def path3():
    # path 1-2-3 in 1-based labels
    return FiniteGraph.from_edges(3, [(0, 1), (1, 2)])
