"""Exact and statistical checks of exchangeability, consistency and reversibility.

Each check returns a :class:`TestReport`; every report is reproducible from
its name, seed and parameters.  The ``perturb`` / control options inject
known faults so the harness can be shown to detect violations.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import permutations
from typing import Callable

import numpy as np
from scipy import stats

from . import _motifs as mt
from ._rng import make_rng
from .continuous import simulate
from .discrete import (DiscreteChainConfig, er_stationary_density, reversible_stationary_vector,
                       reversible_step, reversible_transition_matrix, run_replicas)
from .graphs import FiniteGraph
from .kernels import LevyItoIntensity, RewiringKernel, StochasticMatrix2, sample_rewiring
from .rewiring import RewiringMap, apply

ALPHA = 0.01
EXACT_TOL = 1e-12

#: Vertex-update mixture used when none is given; the identity would make the check vacuous.
DEFAULT_SIGMA = ((1.0, StochasticMatrix2(((0.7, 0.3), (0.4, 0.6)))),)

Stepper = Callable[[FiniteGraph, np.random.Generator], FiniteGraph]


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    name: str
    statistic: float
    threshold: float
    passed: bool
    sample_sizes: dict = field(default_factory=dict)
    seed: object = None
    params: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        d["seed"] = None if self.seed is None else str(self.seed)
        return json.dumps(d, sort_keys=True, default=float)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} statistic={self.statistic:.3e}  threshold={self.threshold:.3e}"


def summary_table(reports: list[TestReport]) -> str:
    return "\n".join(r.line() for r in reports)


# -- exact checks -------------------------------------------------------------

def check_detailed_balance(alpha, beta, n: int = 3, *, perturb: float = 0.0) -> TestReport:
    """max |pi(F) P(F,F') - pi(F') P(F',F)| over G_[n] x G_[n]."""
    if n not in (2, 3):
        raise ValueError("detailed balance is checked at n = 2 or 3")
    P = reversible_transition_matrix(alpha, beta, n)
    pi = reversible_stationary_vector(alpha, beta, n)
    if perturb:
        P[0, -1] += perturb
    flow = pi[:, None] * P
    resid = float(np.abs(flow - flow.T).max())
    return TestReport("detailed_balance", resid, EXACT_TOL, resid <= EXACT_TOL,
                      {"states": P.shape[0]}, None, {"alpha": alpha, "beta": beta, "n": n, "perturb": perturb})


def marginalized_transitions(P_big: np.ndarray, n: int, m: int) -> np.ndarray:
    """For each F on [n], the law of the [m]-restriction of its successor: shape (2^C(n,2), 2^C(m,2))."""
    mask = (1 << mt.n_pairs(m)) - 1
    cols = np.arange(P_big.shape[1]) & mask
    out = np.zeros((P_big.shape[0], mask + 1))
    for c in range(mask + 1):
        out[:, c] = P_big[:, cols == c].sum(axis=1)
    return out


def check_consistency(alpha, beta, *, perturb: float = 0.0) -> TestReport:
    """Every extension F of F' on [2] must induce the [2]-transition law of F'."""
    P3 = reversible_transition_matrix(alpha, beta, 3)
    if perturb:
        P3[-1, 0] += perturb
        P3[-1, 1] -= perturb
    P2 = reversible_transition_matrix(alpha, beta, 2)
    marg = marginalized_transitions(P3, 3, 2)
    parent = np.arange(P3.shape[0]) & 1
    resid = float(np.abs(marg - P2[parent]).max())
    return TestReport("consistency", resid, EXACT_TOL, resid <= EXACT_TOL,
                      {"states": P3.shape[0]}, None, {"alpha": alpha, "beta": beta, "perturb": perturb})


# -- one-step samplers --------------------------------------------------------

def kernel_stepper(mixture) -> Stepper:
    mixture = tuple(mixture)
    weights = np.array([w for w, _ in mixture], dtype=float)

    def step(G, rng):
        pick, draw = rng.spawn(2)
        k = int(pick.choice(len(mixture), p=weights / weights.sum()))
        return apply(sample_rewiring(mixture[k][1], G.n, draw), G)
    return step


def intensity_stepper(intensity: LevyItoIntensity, t: float) -> Stepper:
    return lambda G, rng: simulate(intensity, G, t, rng).final()


def reversible_stepper(alpha: float, beta: float) -> Stepper:
    return lambda G, rng: reversible_step(alpha, beta, G, rng)


def biased_stepper(pair: tuple[int, int] = (0, 1), p: float = 0.9) -> Stepper:
    """Non-exchangeable control: toggles one fixed pair with probability p."""
    def step(G, rng):
        if rng.random() < p:
            n = G.n
            w0 = np.zeros(mt.n_pairs(n), np.uint8)
            w1 = np.ones(mt.n_pairs(n), np.uint8)
            idx = mt.pair_index(*pair)
            w0[idx], w1[idx] = 1, 0
            return apply(RewiringMap(n, w0, w1), G)
        return G
    return step


STEPPERS = {
    "product-er": lambda p0=0.2, p1=0.6: kernel_stepper([(1.0, RewiringKernel.product_er(p0, p1))]),
    "vertex-update": lambda v=1.0, sigma=None, t=0.3: intensity_stepper(
        LevyItoIntensity(v=v, sigma=DEFAULT_SIGMA if sigma is None else sigma), t),
    "reversible": lambda alpha=1.5, beta=0.5: reversible_stepper(alpha, beta),
    "biased-control": lambda pair=(0, 1), p=0.9: biased_stepper(tuple(pair), p),
}


def make_stepper(sampler_id: str, **params) -> Stepper:
    if sampler_id not in STEPPERS:
        raise ValueError(f"unknown sampler {sampler_id!r}; choose from {sorted(STEPPERS)}")
    return STEPPERS[sampler_id](**params)


# -- statistical checks ---------------------------------------------------------

def _pooled_table(a: np.ndarray, b: np.ndarray, min_expected: float = 5.0) -> np.ndarray:
    """2 x K table with empty cells dropped and sparse cells merged into one."""
    table = np.vstack([a, b]).astype(float)
    table = table[:, table.sum(axis=0) > 0]
    expected = table.sum(axis=0) * table.sum(axis=1, keepdims=True) / table.sum()
    sparse = expected.min(axis=0) < min_expected
    if sparse.any():
        merged = table[:, sparse].sum(axis=1, keepdims=True)
        table = np.hstack([table[:, ~sparse], merged])
    return table


def two_sample_chi2(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    table = _pooled_table(a, b)
    if table.shape[1] < 2:
        return 0.0, 1.0
    chi2, p, _, _ = stats.chi2_contingency(table, correction=False)
    return float(chi2), float(p)


def _codes_of(stepper: Stepper, G: FiniteGraph, replicates: int, rng) -> np.ndarray:
    counts = np.zeros(2 ** mt.n_pairs(G.n), dtype=np.int64)
    for r in rng.spawn(replicates):
        counts[stepper(G, r).code] += 1
    return counts


def check_exchangeability(stepper: Stepper | str, F: FiniteGraph | None = None, *,
                          replicates: int = 10_000, seed=0, alpha: float = ALPHA,
                          name: str | None = None, **params) -> TestReport:
    """Compare the one-step law from F, relabelled by sigma, with the law from F^sigma.

    Runs over every non-identity sigma of [3]; a two-sample chi-square test
    per sigma with Bonferroni correction.  The statistic reported is the
    smallest p-value; the check passes when it exceeds alpha / #sigma.
    """
    if replicates < 10_000:
        raise ValueError("exchangeability checks need at least 10^4 replicates")
    label = name or (stepper if isinstance(stepper, str) else "custom")
    if isinstance(stepper, str):
        stepper = make_stepper(stepper, **params)
    if F is None:
        F = FiniteGraph.from_edges(3, [(0, 1)])
    if F.n != 3:
        raise ValueError("exchangeability is checked on G_[3]")
    rng = make_rng(seed)
    sigmas = [s for s in permutations(range(3)) if s != (0, 1, 2)]
    base_rng, *sigma_rngs = rng.spawn(1 + len(sigmas))
    base_graphs = [stepper(F, r) for r in base_rng.spawn(replicates)]
    pvals = []
    for s, srng in zip(sigmas, sigma_rngs):
        a = np.zeros(8, dtype=np.int64)
        for g in base_graphs:
            a[g.relabel(s).code] += 1
        b = _codes_of(stepper, F.relabel(s), replicates, srng)
        pvals.append(two_sample_chi2(a, b)[1])
    pmin = float(min(pvals))
    threshold = alpha / len(sigmas)
    return TestReport(f"exchangeability[{label}]", pmin, threshold, pmin > threshold,
                      {"replicates": replicates, "permutations": len(sigmas)}, seed,
                      {"F": F.edges(), **{k: v for k, v in params.items() if not callable(v)}})


def check_er_stationarity(p0: float, p1: float, n: int = 100, steps: int = 300, replicates: int = 20, *,
                          seed=0, threads: int = 1, G0: FiniteGraph | None = None) -> TestReport:
    """Terminal mean edge density within 4 standard errors of p0 / (1 - p1 + p0)."""
    if not (0 <= p0 <= 1 and 0 <= p1 < 1):
        raise ValueError("need 0 <= p0 <= 1 and 0 <= p1 < 1")
    q = er_stationary_density(p0, p1)
    config = DiscreteChainConfig(n, steps, ((1.0, RewiringKernel.product_er(p0, p1)),), seed)
    G0 = FiniteGraph.empty(n) if G0 is None else G0
    finals = np.array([t.graphs[-1].edge_density()
                       for t in run_replicas(config, G0, replicates, threads=threads)])
    mean = float(finals.mean())
    se = float(finals.std(ddof=1) / np.sqrt(replicates)) if replicates > 1 else 0.0
    dev = abs(mean - q)
    limit = 4 * se
    return TestReport("er_stationarity", dev, limit, dev <= limit + EXACT_TOL,
                      {"replicates": replicates, "steps": steps, "n": n}, seed,
                      {"p0": p0, "p1": p1, "q": q, "mean": mean, "stderr": se})


def check_sampler_law(counts: np.ndarray, probs: np.ndarray, *, name: str = "sampler_law",
                      alpha: float = ALPHA, seed=None) -> TestReport:
    """Chi-square goodness of fit of observed motif counts to exact probabilities."""
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    expected = probs / probs.sum() * counts.sum()
    keep = expected > 0
    if np.any(counts[~keep] > 0):
        return TestReport(name, 0.0, alpha, False, {"samples": int(counts.sum())}, seed,
                          {"reason": "mass on zero-probability states"})
    counts, expected = counts[keep], expected[keep]
    sparse = expected < 5.0
    if sparse.any():
        counts = np.append(counts[~sparse], counts[sparse].sum())
        expected = np.append(expected[~sparse], expected[sparse].sum())
    p = float(stats.chisquare(counts, expected).pvalue)
    return TestReport(name, p, alpha, p > alpha, {"samples": int(counts.sum())}, seed)


# -- sampler laws ---------------------------------------------------------------

def graphon_fidi_probs(graphon, n: int) -> np.ndarray:
    """Exact law of the sampled graph on [n], indexed by motif code (cells are equally likely)."""
    from itertools import product

    lo, hi = mt.pair_arrays(n)
    bits = mt.decode(np.arange(2 ** mt.n_pairs(n)), n, 2)
    out = np.zeros(bits.shape[0])
    for cells in product(range(graphon.k), repeat=n):
        c = np.asarray(cells)
        p = graphon.grid[c[lo], c[hi]]
        out += np.prod(np.where(bits == 1, p, 1 - p), axis=1)
    return out / graphon.k ** n


def rewiring_fidi_probs(kernel: RewiringKernel, n: int) -> np.ndarray:
    """Exact law of the sampled rewiring map on [n], indexed by base-4 code."""
    from itertools import product

    lo, hi = mt.pair_arrays(n)
    states = mt.decode(np.arange(4 ** mt.n_pairs(n)), n, 4)
    out = np.zeros(states.shape[0])
    for cells in product(range(kernel.k), repeat=n):
        c = np.asarray(cells)
        g = kernel.grid[c[lo], c[hi]]
        out += np.prod(np.take_along_axis(g[None], states[..., None], axis=2)[..., 0], axis=1)
    return out / kernel.k ** n


def _bit_codes(rows: np.ndarray, base: int = 2) -> np.ndarray:
    return mt.encode(rows, base)


def sampler_law_suite(samples: int = 100_000, seed=0, *, n: int = 3) -> list[TestReport]:
    """Goodness of fit of every sampler against its exact law, plus fault controls.

    Reports whose name starts with ``control:`` use a deliberately wrong
    reference law and are expected to fail.
    """
    from .kernels import Graphon, beta_fidi_prob, er_fidi_prob, sample_beta_mixture, sample_graphs
    from .graphs import enumerate_graphs

    rng = make_rng(seed)
    r_er, r_step, r_beta, r_rew = rng.spawn(4)
    motifs = enumerate_graphs(n)
    size = len(motifs)
    reports = []

    er = _bit_codes(sample_graphs(Graphon.constant(0.3), n, samples, r_er))
    er_counts = np.bincount(er, minlength=size)
    reports.append(check_sampler_law(er_counts, [er_fidi_prob(0.3, F) for F in motifs],
                                     name="law:erdos-renyi", seed=seed))
    reports.append(check_sampler_law(er_counts, [er_fidi_prob(0.33, F) for F in motifs],
                                     name="control:erdos-renyi-wrong-p", seed=seed))

    step = Graphon([[0.8, 0.1], [0.1, 0.5]])
    st_counts = np.bincount(_bit_codes(sample_graphs(step, n, samples, r_step)), minlength=size)
    reports.append(check_sampler_law(st_counts, graphon_fidi_probs(step, n), name="law:step-graphon", seed=seed))
    reports.append(check_sampler_law(st_counts, graphon_fidi_probs(Graphon.constant(0.375), n),
                                     name="control:step-graphon-as-er", seed=seed))

    a, b = 2.0, 3.0
    bm_counts = np.bincount(_bit_codes(sample_beta_mixture(a, b, n, samples, r_beta)), minlength=size)
    reports.append(check_sampler_law(bm_counts, [float(beta_fidi_prob(a, b, F)) for F in motifs],
                                     name="law:beta-mixture", seed=seed))
    reports.append(check_sampler_law(bm_counts, [er_fidi_prob(a / (a + b), F) for F in motifs],
                                     name="control:beta-mixture-as-er", seed=seed))

    kern = RewiringKernel.product_er(0.2, 0.6)
    rw = np.array([sample_rewiring(kern, n, r).states for r in r_rew.spawn(samples)])
    rw_counts = np.bincount(_bit_codes(rw, 4), minlength=4 ** mt.n_pairs(n))
    reports.append(check_sampler_law(rw_counts, rewiring_fidi_probs(kern, n), name="law:rewiring-kernel", seed=seed))
    reports.append(check_sampler_law(rw_counts, rewiring_fidi_probs(RewiringKernel.product_er(0.3, 0.6), n),
                                     name="control:rewiring-wrong-p0", seed=seed))
    return reports
