"""Discrete-time rewiring chains and the closed-form Beta-mixture family.

A chain on [n] is driven by i.i.d. rewiring maps W_1, W_2, ...: pick a kernel
from the mixture by weight, sample W_m from it, and set G_m = W_m(G_{m-1}).
Each step draws from its own child stream, so the chain on [n] restricted to
[m] is exactly the chain on [m] run from the same seed.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _motifs as mt
from ._rng import make_rng, replica_seeds
from .graphs import FiniteGraph, enumerate_graphs
from .kernels import RewiringKernel, check_mixture, rising_ratio, sample_rewiring
from .rewiring import RewiringMap, apply


@dataclass(frozen=True)
class DiscreteChainConfig:
    n: int
    steps: int
    kernel_mixture: tuple[tuple[float, RewiringKernel], ...]
    seed: object = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.steps < 0:
            raise ValueError(f"steps must be nonnegative, got {self.steps}")
        mix = tuple((float(w), k) for w, k in self.kernel_mixture)
        check_mixture([w for w, _ in mix], "kernel")
        object.__setattr__(self, "kernel_mixture", mix)

    @property
    def weights(self) -> np.ndarray:
        return check_mixture([w for w, _ in self.kernel_mixture], "kernel")


@dataclass
class Trajectory:
    """Graphs at steps 0..steps, plus the drawn maps and kernel indices when retained."""

    graphs: list[FiniteGraph]
    maps: list[RewiringMap] | None = None
    kernel_indices: list[int] = field(default_factory=list)
    config: DiscreteChainConfig | None = None

    @property
    def steps(self) -> int:
        return len(self.graphs) - 1

    def __iter__(self):
        return iter(enumerate(self.graphs))

    def restrict(self, m: int) -> "Trajectory":
        maps = None if self.maps is None else [w.restrict(m) for w in self.maps]
        return Trajectory([g.restrict(m) for g in self.graphs], maps, list(self.kernel_indices))


def run_chain(config: DiscreteChainConfig, G0: FiniteGraph, *, retain_maps: bool = True) -> Trajectory:
    if G0.n != config.n:
        raise ValueError(f"initial graph has {G0.n} vertices, config expects {config.n}")
    rng = make_rng(config.seed)
    weights = config.weights
    graphs, maps, picks = [G0], [], []
    g = G0
    for _ in range(config.steps):
        pick_rng, draw_rng = rng.spawn(2)
        k = int(pick_rng.choice(len(weights), p=weights)) if len(weights) > 1 else 0
        w = sample_rewiring(config.kernel_mixture[k][1], config.n, draw_rng)
        g = apply(w, g)
        graphs.append(g)
        picks.append(k)
        if retain_maps:
            maps.append(w)
    return Trajectory(graphs, maps if retain_maps else None, picks, config)


def run_replicas(config: DiscreteChainConfig, G0: FiniteGraph, replicas: int, *,
                 threads: int = 1, retain_maps: bool = False) -> list[Trajectory]:
    """Independent chains with split seeds; results ordered by replica index."""
    seeds = replica_seeds(config.seed, replicas)
    configs = [DiscreteChainConfig(config.n, config.steps, config.kernel_mixture, s) for s in seeds]
    if threads <= 1:
        return [run_chain(c, G0, retain_maps=retain_maps) for c in configs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: run_chain(c, G0, retain_maps=retain_maps), configs))


# -- Beta-mixture reversible family ------------------------------------------

def _transition_counts(F: FiniteGraph, Fp: FiniteGraph) -> tuple[int, int, int, int]:
    a, b = F.bits.astype(int), Fp.bits.astype(int)
    n11 = int(np.sum(a & b))
    n10 = int(np.sum(a & (1 - b)))
    n01 = int(np.sum((1 - a) & b))
    n00 = len(a) - n11 - n10 - n01
    return n00, n01, n10, n11


def reversible_transition_prob(alpha, beta, F: FiniteGraph, Fp: FiniteGraph):
    """One-step probability F -> F' of the Beta-mixed product Erdos-Renyi chain."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if F.n != Fp.n:
        raise ValueError(f"graph sizes differ: {F.n} vs {Fp.n}")
    n00, n01, n10, n11 = _transition_counts(F, Fp)
    return rising_ratio([(alpha, n00), (beta, n01), (beta, n10), (alpha, n11)],
                        [(alpha + beta, n00 + n01), (alpha + beta, n10 + n11)])


def reversible_stationary_prob(alpha, beta, F: FiniteGraph):
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    n1 = F.num_edges
    n0 = mt.n_pairs(F.n) - n1
    s = alpha + beta
    return rising_ratio([(s, n0), (s, n1)], [(2 * s, n0 + n1)])


def reversible_transition_matrix(alpha, beta, n: int) -> np.ndarray:
    """Full matrix over G_[n], rows/columns indexed by motif code."""
    states = enumerate_graphs(n)
    return np.array([[float(reversible_transition_prob(alpha, beta, F, Fp)) for Fp in states]
                     for F in states])


def reversible_stationary_vector(alpha, beta, n: int) -> np.ndarray:
    return np.array([float(reversible_stationary_prob(alpha, beta, F)) for F in enumerate_graphs(n)])


def reversible_step(alpha: float, beta: float, G: FiniteGraph, rng: np.random.Generator) -> FiniteGraph:
    """One transition of the Beta-mixed chain, sampled directly.

    The retention probabilities are drawn once per step and shared by all
    pairs: an absent pair stays absent w.p. P ~ Beta(alpha, beta) and a present
    pair stays present w.p. Q ~ Beta(alpha, beta), matching the one-step law
    of :func:`reversible_transition_prob`.
    """
    mix_rng, pair_rng = rng.spawn(2)
    stay0, stay1 = mix_rng.beta(alpha, beta, size=2)
    p0, p1 = 1.0 - stay0, stay1
    return apply(sample_rewiring(RewiringKernel.product_er(p0, p1), G.n, pair_rng), G)


def er_stationary_density(p0: float, p1: float) -> float:
    """Edge density of the fixed point of the product Erdos-Renyi chain."""
    return p0 / (1.0 - p1 + p0)
