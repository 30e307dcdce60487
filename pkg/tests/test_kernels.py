from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs_of, perms_of, rising
from exchgraph import (FiniteGraph, Graphon, LevyItoIntensity, RewiringKernel, RewiringMap, StochasticMatrix2,
                       apply, beta_fidi_prob, enumerate_graphs, er_fidi_prob, sample_beta_mixture, sample_graph,
                       sample_graphs, sample_rewiring, sample_vertex_update)
from exchgraph._motifs import pair_index
from exchgraph.kernels import rising as pkg_rising
from exchgraph.rewiring import level_rewiring_densities


def rng(seed=0):
    return np.random.default_rng(seed)


class TestGraphon:
    def test_validation(self):
        with pytest.raises(ValueError):
            Graphon([[0.5, 0.2], [0.1, 0.5]])
        with pytest.raises(ValueError):
            Graphon([[1.2]])
        with pytest.raises(ValueError):
            Graphon([0.2, 0.3])

    @pytest.mark.parametrize("p, expect", [(1.0, "complete"), (0.0, "empty")])
    def test_constant_extremes(self, p, expect):
        G = sample_graph(Graphon.constant(p), 12, rng())
        assert G == getattr(FiniteGraph, expect)(12)

    def test_half_density_concentrates(self):
        G = sample_graph(Graphon.constant(0.5), 1000, rng(5))
        assert abs(G.edge_density() - 0.5) < 0.01

    def test_deterministic(self):
        g = Graphon([[0.9, 0.1], [0.1, 0.4]])
        assert sample_graph(g, 30, rng(3)) == sample_graph(g, 30, rng(3))

    def test_prefix_consistent(self):
        g = Graphon([[0.9, 0.1], [0.1, 0.4]])
        for seed in range(20):
            assert sample_graph(g, 15, rng(seed)).restrict(6) == sample_graph(g, 6, rng(seed))

    def test_batch_matches_law_mean(self):
        g = Graphon([[0.9, 0.1], [0.1, 0.4]])
        rows = sample_graphs(g, 5, 20_000, rng(1))
        assert rows.shape == (20_000, 10)
        assert abs(rows.mean() - 0.375) < 0.01

    def test_dissociation(self):
        rows = sample_graphs(Graphon([[0.9, 0.1], [0.1, 0.4]]), 4, 50_000, rng(2))
        a, b = rows[:, 0].astype(float), rows[:, 5].astype(float)  # pairs {0,1} and {2,3}
        assert abs(np.corrcoef(a, b)[0, 1]) < 4 / np.sqrt(50_000)


class TestClosedForms:
    def test_er_triangle(self):
        assert er_fidi_prob(0.5, FiniteGraph.complete(3)) == 0.125

    def test_er_complete_p1(self):
        assert er_fidi_prob(1.0, FiniteGraph.complete(4)) == 1.0

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_er_normalised(self, n):
        assert sum(er_fidi_prob(0.3, F) for F in enumerate_graphs(n)) == pytest.approx(1.0, abs=1e-14)

    def test_beta_examples(self):
        assert beta_fidi_prob(1, 1, FiniteGraph.complete(2)) == Fraction(1, 2)
        assert beta_fidi_prob(1, 1, FiniteGraph.complete(3)) == Fraction(1, 4)

    @pytest.mark.parametrize("a, b", [(1, 1), (2, 3), (Fraction(1, 2), Fraction(5, 2))])
    def test_beta_normalised(self, a, b):
        for n in (2, 3):
            assert sum(beta_fidi_prob(a, b, F) for F in enumerate_graphs(n)) == 1

    def test_beta_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            beta_fidi_prob(0, 1, FiniteGraph.empty(2))

    @given(st.data())
    def test_beta_exchangeable(self, data):
        F = data.draw(graphs_of(4))
        s = data.draw(perms_of(4))
        assert beta_fidi_prob(2, 3, F) == beta_fidi_prob(2, 3, F.relabel(s))

    def test_rising_matches_oracle(self):
        for x in (Fraction(1, 3), 2, Fraction(7, 2)):
            for j in range(6):
                assert pkg_rising(x, j) == rising(x, j)
        assert pkg_rising(1.5, 100) == pytest.approx(float(rising(Fraction(3, 2), 100)), rel=1e-12)

    def test_beta_large_graph_is_finite(self):
        # C(60, 2) = 1770 pairs: factors overflow a double, the ratio does not
        F = FiniteGraph.from_edges(60, [(0, j) for j in range(1, 60)])
        p = beta_fidi_prob(2.0, 3.0, F)
        n1, n0 = 59, 1770 - 59
        expected = float(rising(Fraction(2), n1) * rising(Fraction(3), n0) / rising(Fraction(5), 1770))
        assert p == pytest.approx(expected, rel=1e-9)

    def test_float_inputs_evaluated_exactly_when_small(self):
        assert beta_fidi_prob(1.0, 1.0, FiniteGraph.complete(3)) == 0.25


class TestRewiringKernel:
    def test_validation(self):
        with pytest.raises(ValueError):
            RewiringKernel.constant([0.5, 0.5, 0.5, 0.0])
        with pytest.raises(ValueError):
            RewiringKernel.constant([1.5, -0.5, 0, 0])
        asym = np.zeros((2, 2, 4))
        asym[..., 1] = 1
        asym[0, 1] = [1, 0, 0, 0]
        with pytest.raises(ValueError):
            RewiringKernel(asym)

    def test_identity_kernel(self):
        assert sample_rewiring(RewiringKernel.identity(), 9, rng()) == RewiringMap.identity(9)

    def test_product_er_marginals(self):
        W = sample_rewiring(RewiringKernel.product_er(0.2, 0.6), 400, rng(4))
        se = np.sqrt(0.25 / W.w0.size)
        assert abs(W.w0.mean() - 0.2) < 4 * se
        assert abs(W.w1.mean() - 0.6) < 4 * se

    def test_pattern_densities_converge(self):
        probs = np.array([0.1, 0.5, 0.15, 0.25])
        W = sample_rewiring(RewiringKernel.constant(probs), 500, rng(6))
        dens = level_rewiring_densities(W, 2)
        assert np.abs(dens - probs).max() < 0.01

    def test_prefix_consistent(self):
        grid = np.zeros((2, 2, 4))
        grid[0, 0] = [0.1, 0.6, 0.2, 0.1]
        grid[1, 1] = [0.3, 0.3, 0.3, 0.1]
        grid[0, 1] = grid[1, 0] = [0.0, 1.0, 0.0, 0.0]
        k = RewiringKernel(grid)
        for seed in range(10):
            assert sample_rewiring(k, 12, rng(seed)).restrict(5) == sample_rewiring(k, 5, rng(seed))

    def test_transition_matrices(self):
        t = RewiringKernel.product_er(0.2, 0.6).transition_matrices()[0, 0]
        np.testing.assert_allclose(t, [[0.8, 0.2], [0.4, 0.6]], atol=1e-15)


class TestVertexUpdates:
    def test_stochastic_matrix_validation(self):
        with pytest.raises(ValueError):
            StochasticMatrix2(((0.5, 0.6), (0, 1)))
        with pytest.raises(ValueError):
            StochasticMatrix2(((1.2, -0.2), (0, 1)))

    def test_identity_matrix_is_identity(self):
        W = sample_vertex_update([(1.0, StochasticMatrix2.identity())], 2, 6, rng())
        assert W.is_identity()

    def test_all_ones(self):
        W = sample_vertex_update([(1.0, StochasticMatrix2(((0, 1), (0, 1))))], 1, 5, rng())
        assert sorted(apply(W, FiniteGraph.empty(5)).edges()) == [(0, 1), (1, 2), (1, 3), (1, 4)]

    def test_row_frequencies(self):
        n = 10_000
        S = StochasticMatrix2(((0.7, 0.3), (0.2, 0.8)))
        W = sample_vertex_update([(1.0, S)], 0, n, rng(8))
        idx = np.array([pair_index(0, j) for j in range(1, n)])
        se = np.sqrt(0.3 * 0.7 / (n - 1))
        assert abs(W.w0[idx].mean() - 0.3) < 3 * se
        assert abs(W.w1[idx].mean() - 0.8) < 3 * np.sqrt(0.16 / (n - 1))

    def test_mixture_weights_validated(self):
        with pytest.raises(ValueError):
            sample_vertex_update([(0.5, StochasticMatrix2.identity())], 0, 3, rng())
        with pytest.raises(ValueError):
            sample_vertex_update([(1.0, StochasticMatrix2.identity())], 3, 3, rng())


class TestIntensity:
    @pytest.mark.parametrize("kw", [{"e0": -1}, {"v": float("nan")}, {"e1": float("inf")}])
    def test_rejects_bad_rates(self, kw):
        with pytest.raises(ValueError):
            LevyItoIntensity(**kw)

    def test_rejects_bad_upsilon(self):
        with pytest.raises(ValueError):
            LevyItoIntensity(upsilon=((0.0, RewiringKernel.identity()),))
        with pytest.raises(TypeError):
            LevyItoIntensity(upsilon=((1.0, "kernel"),))

    def test_restricted_rate(self):
        I = LevyItoIntensity(e0=0.5, e1=0.25, v=2.0, upsilon=((3.0, RewiringKernel.identity()),))
        assert I.restricted_rate(4) == 6 * 0.75 + 8 + 3


def test_beta_sampler_mean():
    rows = sample_beta_mixture(2.0, 3.0, 3, 50_000, rng(9))
    assert abs(rows.mean() - 0.4) < 0.01
    with pytest.raises(ValueError):
        sample_beta_mixture(0.0, 1.0, 3, 1, rng())


def test_graphon_law_matches_oracle():
    from exchgraph.verify import graphon_fidi_probs

    g = np.array([[0.9, 0.1], [0.1, 0.4]])
    law = graphon_fidi_probs(Graphon(g), 3)
    for F in enumerate_graphs(3):
        p = 0.0
        for cells in product(range(2), repeat=3):
            q = 1.0
            for a in range(3):
                for b in range(a + 1, 3):
                    e = g[cells[a], cells[b]]
                    q *= e if F[a, b] else 1 - e
            p += q / 8
        assert law[F.code] == pytest.approx(p, abs=1e-15)
    assert law.sum() == pytest.approx(1.0, abs=1e-14)
