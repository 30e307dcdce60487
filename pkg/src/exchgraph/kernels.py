"""Exchangeable samplers and closed-form finite-dimensional laws.

Graphons and rewiring kernels are piecewise constant on a k x k grid of
equal cells.  Samplers draw one uniform label per vertex and one uniform per
pair, each from its own child stream, so a sample on [n] restricted to [m]
is exactly the sample on [m] drawn from the same generator state.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _motifs as mt
from .graphs import FiniteGraph
from .rewiring import RewiringMap, vertex_update_map

TOL = 1e-12


def _cells(u: np.ndarray, k: int) -> np.ndarray:
    return np.minimum((u * k).astype(np.int64), k - 1)


class Graphon:
    """Symmetric step function [0,1]^2 -> [0,1] on a k x k grid."""

    def __init__(self, grid):
        grid = np.atleast_2d(np.asarray(grid, dtype=float))
        k = grid.shape[0]
        if grid.shape != (k, k):
            raise ValueError(f"graphon grid must be square, got {grid.shape}")
        if not np.all(np.isfinite(grid)) or grid.min() < -TOL or grid.max() > 1 + TOL:
            raise ValueError("graphon values must lie in [0, 1]")
        if not np.allclose(grid, grid.T, atol=TOL, rtol=0):
            raise ValueError("graphon grid must be symmetric")
        self.grid = np.clip(grid, 0.0, 1.0)
        self.grid.setflags(write=False)

    @classmethod
    def constant(cls, p: float) -> "Graphon":
        return cls([[p]])

    @property
    def k(self) -> int:
        return self.grid.shape[0]

    def __repr__(self) -> str:
        return f"Graphon(grid={self.grid.tolist()})"


def _pair_probs(grid: np.ndarray, u: np.ndarray, n: int) -> np.ndarray:
    lo, hi = mt.pair_arrays(n)
    c = _cells(u, grid.shape[0])
    return grid[c[..., lo], c[..., hi]]


def sample_graph(graphon: Graphon, n: int, rng: np.random.Generator) -> FiniteGraph:
    """Exchangeable random graph: labels U_i ~ U(0,1), edges independent given the labels."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    vertex_rng, pair_rng = rng.spawn(2)
    u = vertex_rng.random(n)
    p = _pair_probs(graphon.grid, u, n)
    return FiniteGraph(n, (pair_rng.random(mt.n_pairs(n)) < p).astype(np.uint8))


def sample_graphs(graphon: Graphon, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent samples at once, as a (count, C(n,2)) bit array."""
    vertex_rng, pair_rng = rng.spawn(2)
    u = vertex_rng.random((count, n))
    p = _pair_probs(graphon.grid, u, n)
    return (pair_rng.random((count, mt.n_pairs(n))) < p).astype(np.uint8)


def sample_beta_mixture(alpha: float, beta: float, n: int, count: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Samples of the Beta(alpha, beta) mixture of Erdos-Renyi graphs, as bit rows."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("beta mixture parameters must be positive")
    p_rng, pair_rng = rng.spawn(2)
    p = p_rng.beta(alpha, beta, size=(count, 1))
    return (pair_rng.random((count, mt.n_pairs(n))) < p).astype(np.uint8)


#: Total rising-factorial length up to which ratios are computed exactly.
EXACT_RISING_TERMS = 400


def rising(x, j: int):
    """Rising factorial x (x+1) ... (x+j-1); exact for ints and Fractions."""
    if j < 0:
        raise ValueError("rising factorial needs j >= 0")
    return math.prod((x + i for i in range(j)), start=1)


def rising_ratio(num: Sequence[tuple], den: Sequence[tuple]):
    """prod rising(x, j) over ``num`` divided by the same over ``den``.

    Small cases are evaluated exactly (floats converted to Fractions, result
    returned as float); large exponents go through log-gamma so they neither
    overflow nor produce inf/inf.
    """
    terms = (*num, *den)
    exact_in = all(isinstance(x, (int, Fraction)) for x, _ in terms)
    if exact_in or sum(j for _, j in terms) <= EXACT_RISING_TERMS:
        top = math.prod((rising(Fraction(x), j) for x, j in num), start=Fraction(1))
        out = top / math.prod((rising(Fraction(x), j) for x, j in den), start=Fraction(1))
        return out if exact_in else float(out)
    log = sum(math.lgamma(x + j) - math.lgamma(x) for x, j in num)
    log -= sum(math.lgamma(x + j) - math.lgamma(x) for x, j in den)
    return math.exp(log)


def er_fidi_prob(p: float, F: FiniteGraph) -> float:
    """P{Gamma|[n] = F} for the Erdos-Renyi graph with edge probability p."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n1 = F.num_edges
    n0 = mt.n_pairs(F.n) - n1
    return p ** n1 * (1 - p) ** n0


def beta_fidi_prob(alpha, beta, F: FiniteGraph):
    """P{Gamma|[n] = F} for the Beta(alpha, beta) mixture of Erdos-Renyi graphs."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    n1 = F.num_edges
    n0 = mt.n_pairs(F.n) - n1
    return rising_ratio([(alpha, n1), (beta, n0)], [(alpha + beta, n1 + n0)])


class RewiringKernel:
    """Dissociated generator of exchangeable rewiring maps.

    ``grid[a, b]`` is a probability vector over the entry outcomes
    (0,0), (0,1), (1,0), (1,1) for a pair whose endpoints fall in cells a, b.
    """

    def __init__(self, grid):
        grid = np.asarray(grid, dtype=float)
        if grid.ndim == 1:
            grid = grid.reshape(1, 1, -1)
        if grid.ndim != 3 or grid.shape[0] != grid.shape[1] or grid.shape[2] != 4:
            raise ValueError(f"kernel grid must have shape (k, k, 4), got {grid.shape}")
        if not np.all(np.isfinite(grid)) or grid.min() < -TOL:
            raise ValueError("kernel probabilities must be nonnegative")
        if not np.allclose(grid.sum(axis=2), 1.0, atol=TOL, rtol=0):
            raise ValueError("each kernel cell must sum to 1")
        if not np.allclose(grid, grid.transpose(1, 0, 2), atol=TOL, rtol=0):
            raise ValueError("kernel grid must be symmetric in its cell indices")
        grid = np.clip(grid, 0.0, None)
        self.grid = grid / grid.sum(axis=2, keepdims=True)
        self.grid.setflags(write=False)

    @classmethod
    def constant(cls, probs: Sequence[float]) -> "RewiringKernel":
        return cls(np.asarray(probs, dtype=float).reshape(1, 1, 4))

    @classmethod
    def identity(cls) -> "RewiringKernel":
        return cls.constant([0.0, 1.0, 0.0, 0.0])

    @classmethod
    def product_er(cls, p0: float, p1: float) -> "RewiringKernel":
        """Absent pairs become edges w.p. p0, present pairs stay edges w.p. p1."""
        if not (0 <= p0 <= 1 and 0 <= p1 <= 1):
            raise ValueError("p0 and p1 must lie in [0, 1]")
        return cls.constant([(1 - p0) * (1 - p1), (1 - p0) * p1, p0 * (1 - p1), p0 * p1])

    @property
    def k(self) -> int:
        return self.grid.shape[0]

    def is_constant(self) -> bool:
        return bool(np.allclose(self.grid, self.grid[0, 0], atol=0, rtol=0))

    def transition_matrices(self) -> np.ndarray:
        """Per-cell 2x2 matrices T[a, b, r, s] = P(w_r = s)."""
        g = self.grid
        t = np.empty(g.shape[:2] + (2, 2))
        t[..., 0, 1] = g[..., 2] + g[..., 3]
        t[..., 0, 0] = 1 - t[..., 0, 1]
        t[..., 1, 1] = g[..., 1] + g[..., 3]
        t[..., 1, 0] = 1 - t[..., 1, 1]
        return t

    def __repr__(self) -> str:
        return f"RewiringKernel(k={self.k})"


def sample_rewiring(kernel: RewiringKernel, n: int, rng: np.random.Generator) -> RewiringMap:
    """Exchangeable random rewiring map on [n] directed by ``kernel``."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    vertex_rng, pair_rng = rng.spawn(2)
    u = vertex_rng.random(n)
    lo, hi = mt.pair_arrays(n)
    c = _cells(u, kernel.k)
    cdf = np.cumsum(kernel.grid, axis=2)[c[lo], c[hi]]
    v = pair_rng.random(mt.n_pairs(n))
    states = np.minimum((v[:, None] >= cdf[:, :3]).sum(axis=1), 3)
    return RewiringMap.from_states(n, states)


@dataclass(frozen=True)
class StochasticMatrix2:
    """2x2 stochastic matrix; row r is the law of the new status of a pair with status r."""

    rows: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        a = np.asarray(self.rows, dtype=float)
        if a.shape != (2, 2):
            raise ValueError(f"stochastic matrix must be 2x2, got {a.shape}")
        if not np.all(np.isfinite(a)) or a.min() < 0:
            raise ValueError("stochastic matrix entries must be nonnegative")
        if not np.allclose(a.sum(axis=1), 1.0, atol=TOL, rtol=0):
            raise ValueError("stochastic matrix rows must sum to 1")
        object.__setattr__(self, "rows", tuple(tuple(float(x) for x in r) for r in a))

    @classmethod
    def identity(cls) -> "StochasticMatrix2":
        return cls(((1.0, 0.0), (0.0, 1.0)))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.rows)


def check_mixture(weights: Sequence[float], name: str) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise ValueError(f"{name} mixture is empty")
    if not np.all(np.isfinite(w)) or w.min() < 0:
        raise ValueError(f"{name} weights must be nonnegative and finite")
    if abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"{name} weights must sum to 1, got {w.sum()}")
    return w / w.sum()


def draw_vertex_update(sigma: Sequence[tuple[float, StochasticMatrix2]], n: int,
                       rng: np.random.Generator) -> tuple[int, np.ndarray, np.ndarray]:
    """Pick S from the mixture, then x0[j] ~ S[0], x1[j] ~ S[1] independently."""
    weights = check_mixture([w for w, _ in sigma], "sigma")
    pick_rng, x0_rng, x1_rng = rng.spawn(3)
    idx = int(pick_rng.choice(len(sigma), p=weights))
    s = sigma[idx][1].array
    x0 = (x0_rng.random(n) < s[0, 1]).astype(np.uint8)
    x1 = (x1_rng.random(n) < s[1, 1]).astype(np.uint8)
    return idx, x0, x1


def sample_vertex_update(sigma: Sequence[tuple[float, StochasticMatrix2]], i: int, n: int,
                         rng: np.random.Generator) -> RewiringMap:
    if not 0 <= i < n:
        raise ValueError(f"vertex {i} outside vertex set of size {n}")
    _, x0, x1 = draw_vertex_update(sigma, n, rng)
    return vertex_update_map(n, i, x0, x1)


@dataclass(frozen=True)
class LevyItoIntensity:
    """Finite-activity jump intensity: edge clocks, vertex clocks and global rewirings.

    e0, e1 : per-pair rates of setting a pair to 0 / to 1.
    v      : per-vertex rate of a vertex update drawn from ``sigma``.
    upsilon: ``(rate, kernel)`` pairs; each fires a global rewiring at its rate.
    """

    e0: float = 0.0
    e1: float = 0.0
    v: float = 0.0
    sigma: tuple = field(default_factory=lambda: ((1.0, StochasticMatrix2.identity()),))
    upsilon: tuple = ()

    def __post_init__(self):
        for name in ("e0", "e1", "v"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"rate {name} must be finite and nonnegative, got {x}")
            object.__setattr__(self, name, x)
        object.__setattr__(self, "sigma", tuple((float(w), s) for w, s in self.sigma))
        check_mixture([w for w, _ in self.sigma], "sigma")
        ups = tuple((float(r), k) for r, k in self.upsilon)
        for r, k in ups:
            if not math.isfinite(r) or r <= 0:
                raise ValueError(f"global rewiring rates must be finite and positive, got {r}")
            if not isinstance(k, RewiringKernel):
                raise TypeError("upsilon entries must be (rate, RewiringKernel) pairs")
        object.__setattr__(self, "upsilon", ups)

    def restricted_rate(self, m: int) -> float:
        """Bound on the jump rate of the [m]-restriction."""
        return (mt.n_pairs(m) * (self.e0 + self.e1) + m * self.v
                + sum(r for r, _ in self.upsilon))
