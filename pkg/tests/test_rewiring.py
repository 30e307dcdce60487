from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs_of, maps_of, perms_of
from exchgraph import (FiniteGraph, RewiringMap, apply, compose, graph_metric, rewiring_density,
                       single_edge_map, vertex_update_map)
from exchgraph.rewiring import level_rewiring_densities


def brute_rewiring_density(V: RewiringMap, W: RewiringMap) -> Fraction:
    hits = total = 0
    for phi in permutations(range(W.n), V.n):
        total += 1
        hits += all(W[phi[a], phi[b]] == V[a, b] for a in range(V.n) for b in range(a + 1, V.n))
    return Fraction(hits, total)


class TestMaps:
    def test_identity_entries(self):
        I = RewiringMap.identity(4)
        assert I.is_identity() and I.entries() == []
        assert all(I[i, j] == (0, 1) for i in range(4) for j in range(4) if i != j)
        assert I[2, 2] == (0, 0)

    def test_symmetric_lookup(self):
        W = RewiringMap.from_entries(3, [(0, 2, 1, 0)])
        assert W[0, 2] == W[2, 0] == (1, 0)

    def test_from_entries_validation(self):
        with pytest.raises(ValueError):
            RewiringMap.from_entries(3, [(0, 0, 1, 1)])
        with pytest.raises(ValueError):
            RewiringMap.from_entries(3, [(0, 1, 2, 1)])
        with pytest.raises(ValueError):
            RewiringMap.from_states(2, [4])

    def test_apply_identity(self, path3):
        assert apply(RewiringMap.identity(3), path3) == path3

    def test_apply_removes_edge(self):
        W = RewiringMap.from_entries(2, [(0, 1, 1, 0)])
        assert apply(W, FiniteGraph.complete(2)) == FiniteGraph.empty(2)

    def test_apply_constant_map(self):
        W = RewiringMap.from_entries(2, [(0, 1, 1, 1)])
        for G in (FiniteGraph.empty(2), FiniteGraph.complete(2)):
            assert apply(W, G) == FiniteGraph.complete(2)

    def test_apply_size_mismatch(self):
        with pytest.raises(ValueError):
            apply(RewiringMap.identity(3), FiniteGraph.empty(2))

    def test_compose_example(self):
        W = RewiringMap.from_entries(2, [(0, 1, 1, 0)])
        Wp = RewiringMap.from_entries(2, [(0, 1, 0, 0)])
        assert compose(Wp, W)[0, 1] == (0, 0)

    def test_compose_size_mismatch(self):
        with pytest.raises(ValueError):
            compose(RewiringMap.identity(2), RewiringMap.identity(3))

    @given(st.data())
    def test_compose_definition(self, data):
        n = data.draw(st.integers(1, 5))
        W, Wp, G = data.draw(maps_of(n)), data.draw(maps_of(n)), data.draw(graphs_of(n))
        assert apply(compose(Wp, W), G) == apply(Wp, apply(W, G))

    @given(st.data())
    def test_compose_associative_with_unit(self, data):
        n = data.draw(st.integers(1, 5))
        a, b, c = (data.draw(maps_of(n)) for _ in range(3))
        assert compose(a, compose(b, c)) == compose(compose(a, b), c)
        I = RewiringMap.identity(n)
        assert compose(I, a) == a == compose(a, I)

    @given(st.data())
    def test_equivariance(self, data):
        n = data.draw(st.integers(1, 6))
        W, G, s = data.draw(maps_of(n)), data.draw(graphs_of(n)), data.draw(perms_of(n))
        assert apply(W.relabel(s), G.relabel(s)) == apply(W, G).relabel(s)

    @given(st.data())
    def test_restriction_commutes(self, data):
        n = data.draw(st.integers(1, 6))
        m = data.draw(st.integers(1, n))
        W, G = data.draw(maps_of(n)), data.draw(graphs_of(n))
        assert apply(W, G).restrict(m) == apply(W.restrict(m), G.restrict(m))

    @given(st.data())
    def test_lipschitz(self, data):
        n = data.draw(st.integers(1, 6))
        W, G, H = data.draw(maps_of(n)), data.draw(graphs_of(n)), data.draw(graphs_of(n))
        assert graph_metric(apply(W, G), apply(W, H)) <= graph_metric(G, H)


class TestSpecialMaps:
    def test_single_edge_insert(self):
        G = apply(single_edge_map(4, 0, 1, 1), FiniteGraph.empty(4))
        assert G.edges() == [(0, 1)]

    def test_single_edge_delete(self):
        G = FiniteGraph.from_edges(4, [(0, 1), (2, 3)])
        assert apply(single_edge_map(4, 1, 0, 0), G).edges() == [(2, 3)]

    def test_single_edge_noop(self):
        G = FiniteGraph.from_edges(3, [(0, 1)])
        assert apply(single_edge_map(3, 0, 1, 1), G) == G

    @pytest.mark.parametrize("args", [(3, 1, 1, 0), (3, 0, 3, 1), (3, 0, 1, 2)])
    def test_single_edge_errors(self, args):
        with pytest.raises(ValueError):
            single_edge_map(*args)

    def test_vertex_update_identity(self, path3):
        W = vertex_update_map(3, 1, np.zeros(3), np.ones(3))
        assert W.is_identity() and apply(W, path3) == path3

    def test_vertex_update_connects(self):
        W = vertex_update_map(5, 2, np.ones(5), np.ones(5))
        G = apply(W, FiniteGraph.empty(5))
        assert sorted(G.edges()) == [(0, 2), (1, 2), (2, 3), (2, 4)]

    def test_vertex_update_errors(self):
        with pytest.raises(ValueError):
            vertex_update_map(3, 3, np.zeros(3), np.ones(3))
        with pytest.raises(ValueError):
            vertex_update_map(3, 0, np.zeros(2), np.ones(3))

    @given(st.data())
    def test_vertex_update_is_local(self, data):
        n = data.draw(st.integers(2, 7))
        i = data.draw(st.integers(0, n - 1))
        x0 = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
        x1 = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
        G = data.draw(graphs_of(n))
        H = apply(vertex_update_map(n, i, x0, x1), G)
        for a in range(n):
            for b in range(a + 1, n):
                if i not in (a, b):
                    assert H[a, b] == G[a, b]
                else:
                    j = b if a == i else a
                    assert H[a, b] == (x0[j] if G[a, b] == 0 else x1[j])


class TestRewiringDensity:
    def test_identity(self):
        d = rewiring_density(RewiringMap.identity(2), RewiringMap.identity(5))
        assert d.exact and d.value == 1

    def test_spec_example(self):
        V = RewiringMap.from_entries(2, [(0, 1, 1, 1)])
        assert rewiring_density(V, single_edge_map(3, 0, 1, 1)).value == Fraction(1, 3)

    def test_too_large(self):
        with pytest.raises(ValueError):
            rewiring_density(RewiringMap.identity(4), RewiringMap.identity(3))

    @settings(max_examples=60)
    @given(st.data())
    def test_matches_brute_force(self, data):
        n = data.draw(st.integers(2, 5))
        m = data.draw(st.integers(1, min(n, 3)))
        W, V = data.draw(maps_of(n)), data.draw(maps_of(m))
        assert rewiring_density(V, W).value == brute_rewiring_density(V, W)

    @given(st.data())
    def test_level_sums_to_one(self, data):
        n = data.draw(st.integers(2, 6))
        W = data.draw(maps_of(n))
        dens = level_rewiring_densities(W, 2)
        assert dens.size == 4 and dens.sum() == pytest.approx(1.0, abs=1e-12)

    def test_sampled_path(self):
        W = RewiringMap.from_states(6, np.arange(15) % 4)
        V = W.restrict(4)
        d = rewiring_density(V, W, samples=5000, rng=np.random.default_rng(0))
        assert not d.exact and 0 <= d.value <= 1
