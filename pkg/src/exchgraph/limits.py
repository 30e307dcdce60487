"""Truncated graph-limit vectors and the action of rewiring limits on them.

A :class:`GraphLimitVector` holds D(F) for every labelled F on [k],
k = 1..m_max, indexed by motif code.  A :class:`RewiringLimitMatrix` at level
n holds the one-step transition probabilities upsilon(F, F') on G_[n]; it acts
on D by D'(F) = sum_{F'} D(F') upsilon(F', F).  The matrix describes the action
only; it does not determine the rewiring limit itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _motifs as mt
from .graphs import FiniteGraph, level_densities
from .kernels import RewiringKernel, sample_rewiring
from .rewiring import RewiringMap, level_rewiring_densities

DEFAULT_LEVEL = 3
#: Largest level for which limit matrices are built.
MAX_MATRIX_LEVEL = 4


def marginalize(top: np.ndarray, m: int, k: int) -> np.ndarray:
    """Level-k values implied by level-m values: sum over extensions of each F on [k]."""
    if k > m:
        raise ValueError(f"cannot marginalize level {m} up to level {k}")
    mask = (1 << mt.n_pairs(k)) - 1
    codes = np.arange(top.size, dtype=np.int64) & mask
    return np.bincount(codes, weights=top, minlength=mask + 1)


@dataclass
class GraphLimitVector:
    levels: dict[int, np.ndarray]
    exact: bool = True

    @property
    def m_max(self) -> int:
        return max(self.levels)

    @classmethod
    def from_top(cls, top: np.ndarray, m: int, exact: bool = True) -> "GraphLimitVector":
        top = np.asarray(top, dtype=float)
        if top.size != 2 ** mt.n_pairs(m):
            raise ValueError(f"level {m} needs {2 ** mt.n_pairs(m)} values, got {top.size}")
        return cls({k: marginalize(top, m, k) for k in range(1, m + 1)}, exact)

    @classmethod
    def erdos_renyi(cls, p: float, m: int) -> "GraphLimitVector":
        bits = mt.decode(np.arange(2 ** mt.n_pairs(m)), m, 2)
        n1 = bits.sum(axis=1)
        return cls.from_top(p ** n1 * (1 - p) ** (bits.shape[1] - n1), m)

    def level(self, k: int) -> np.ndarray:
        if k not in self.levels:
            raise ValueError(f"level {k} not available (m_max={self.m_max})")
        return self.levels[k]

    def __getitem__(self, F: FiniteGraph) -> float:
        return float(self.level(F.n)[F.code])

    def consistency_error(self) -> float:
        """Largest |D(F') - sum of D over one-vertex extensions of F'| across levels."""
        err = 0.0
        for k in range(1, self.m_max):
            if k + 1 in self.levels:
                err = max(err, float(np.abs(marginalize(self.levels[k + 1], k + 1, k) - self.levels[k]).max()))
        return err

    def truncate(self, m: int) -> "GraphLimitVector":
        return GraphLimitVector({k: v for k, v in self.levels.items() if k <= m}, self.exact)


def empirical_limit(G: FiniteGraph, m_max: int = DEFAULT_LEVEL, **policy) -> GraphLimitVector:
    """Densities of every motif on up to ``m_max`` vertices in G."""
    if not 1 <= m_max <= G.n:
        raise ValueError(f"m_max={m_max} must lie in [1, {G.n}]")
    levels, exact = {}, True
    for k in range(1, m_max + 1):
        levels[k], ex = level_densities(G, k, **policy)
        exact &= ex
    return GraphLimitVector(levels, exact)


def limit_distance(D: GraphLimitVector, E: GraphLimitVector) -> float:
    """sum_k 2^-k sum_F |D(F) - E(F)| over the levels both vectors carry."""
    common = sorted(set(D.levels) & set(E.levels))
    return float(sum(2.0 ** -k * np.abs(D.levels[k] - E.levels[k]).sum() for k in common))


@dataclass
class RewiringLimitMatrix:
    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        size = 2 ** mt.n_pairs(self.n)
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.shape != (size, size):
            raise ValueError(f"level {self.n} matrix must be {size}x{size}")

    @classmethod
    def identity(cls, n: int) -> "RewiringLimitMatrix":
        return cls(n, np.eye(2 ** mt.n_pairs(n)))

    def __matmul__(self, other: "RewiringLimitMatrix") -> "RewiringLimitMatrix":
        if self.n != other.n:
            raise ValueError(f"levels differ: {self.n} vs {other.n}")
        return RewiringLimitMatrix(self.n, self.entries @ other.entries)

    def row_error(self) -> float:
        return float(np.abs(self.entries.sum(axis=1) - 1.0).max())


def _kron_pairs(mats: np.ndarray) -> np.ndarray:
    """Transition matrix on codes from per-pair 2x2 matrices (pair p = bit p)."""
    out = np.ones((1, 1))
    for t in mats:
        out = np.kron(t, out)
    return out


def kernel_limit_matrix(kernel: RewiringKernel, n: int, samples: int | None = None,
                        rng: np.random.Generator | None = None) -> RewiringLimitMatrix:
    """upsilon(F, F') on G_[n] for the rewiring measure directed by ``kernel``.

    With ``samples=None`` the matrix is exact: the vertex labels only matter
    through their cells, so average the product-over-pairs law over all
    k**n equally likely cell assignments.  Otherwise it is a Monte Carlo
    estimate from ``samples`` maps drawn with ``rng``.
    """
    if not 1 <= n <= MAX_MATRIX_LEVEL:
        raise ValueError(f"limit matrices are supported for 1 <= n <= {MAX_MATRIX_LEVEL}")
    if samples is None:
        t = kernel.transition_matrices()
        lo, hi = mt.pair_arrays(n)
        assignments = [(0,) * n] if kernel.is_constant() else list(product(range(kernel.k), repeat=n))
        acc = np.zeros((2 ** mt.n_pairs(n),) * 2)
        for cells in assignments:
            c = np.asarray(cells)
            acc += _kron_pairs(t[c[lo], c[hi]])
        return RewiringLimitMatrix(n, acc / len(assignments))
    if samples < 1:
        raise ValueError("samples must be positive")
    if rng is None:
        raise ValueError("Monte Carlo estimation needs an explicit rng")
    maps = [sample_rewiring(kernel, n, r) for r in rng.spawn(samples)]
    return empirical_limit_matrix_from_maps(maps, n)


def empirical_limit_matrix_from_maps(maps: list[RewiringMap], n: int) -> RewiringLimitMatrix:
    """Average action of the given maps (restricted to [n]) on G_[n]."""
    size = 2 ** mt.n_pairs(n)
    f_bits = mt.decode(np.arange(size), n, 2)
    acc = np.zeros((size, size))
    rows = np.arange(size)
    for w in maps:
        w = w.restrict(n)
        new = np.where(f_bits == 0, w.w0, w.w1)
        np.add.at(acc, (rows, mt.encode(new, 2)), 1.0)
    return RewiringLimitMatrix(n, acc / len(maps))


def map_limit_matrix(W: RewiringMap, n: int) -> RewiringLimitMatrix:
    """upsilon-hat(F, F') of a single large map, from its pattern densities.

    The action of W's empirical rewiring limit: a uniform random injection
    phi picks the pattern V = W^phi, and F moves to V(F).
    """
    dens = level_rewiring_densities(W, n)
    size = 2 ** mt.n_pairs(n)
    v_states = mt.decode(np.arange(dens.size), n, 4)
    keep = np.flatnonzero(dens > 0)
    f_bits = mt.decode(np.arange(size), n, 2)
    acc = np.zeros((size, size))
    for v in keep:
        w0, w1 = v_states[v] >> 1, v_states[v] & 1
        new = mt.encode(np.where(f_bits == 0, w0, w1), 2)
        acc[np.arange(size), new] += dens[v]
    return RewiringLimitMatrix(n, acc)


def act(D: GraphLimitVector, upsilon: RewiringLimitMatrix) -> GraphLimitVector:
    """D upsilon at level ``upsilon.n``; lower levels follow by marginalisation."""
    if upsilon.n not in D.levels:
        raise ValueError(f"vector has no level {upsilon.n} (m_max={D.m_max})")
    return GraphLimitVector.from_top(D.level(upsilon.n) @ upsilon.entries, upsilon.n, D.exact)


@dataclass
class DiscrepancyReport:
    steps: list[int]
    discrepancy: list[float]
    predicted: list[GraphLimitVector] = field(repr=False)
    empirical: list[GraphLimitVector] = field(repr=False)

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancy) if self.discrepancy else 0.0


def predict_vs_empirical(traj, m_max: int = 2, source: str = "maps") -> DiscrepancyReport:
    """Compare each step's empirical limit with the chained matrix prediction.

    ``source="maps"`` uses the empirical limit matrix of each retained map;
    ``source="kernels"`` uses the exact matrix of the kernel each map came from.
    """
    if traj.maps is None:
        raise ValueError("trajectory did not retain its rewiring maps")
    if source not in ("maps", "kernels"):
        raise ValueError(f"unknown source {source!r}")
    if source == "kernels" and traj.config is None:
        raise ValueError("kernel predictions need the trajectory's config")
    cache: dict[int, RewiringLimitMatrix] = {}
    D = empirical_limit(traj.graphs[0], m_max)
    preds, emps, disc = [D], [D], [0.0]
    for step, (g, w) in enumerate(zip(traj.graphs[1:], traj.maps), start=1):
        if source == "maps":
            ups = map_limit_matrix(w, m_max)
        else:
            k = traj.kernel_indices[step - 1]
            if k not in cache:
                cache[k] = kernel_limit_matrix(traj.config.kernel_mixture[k][1], m_max)
            ups = cache[k]
        D = act(D, ups)
        E = empirical_limit(g, m_max)
        preds.append(D)
        emps.append(E)
        disc.append(max(float(np.abs(D.level(k) - E.level(k)).max()) for k in range(1, m_max + 1)))
    return DiscrepancyReport(list(range(len(disc))), disc, preds, emps)
