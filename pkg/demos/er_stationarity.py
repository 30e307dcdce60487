"""Watch the product Erdos-Renyi rewiring chain forget its starting point.

Every step resamples each pair independently: an absent edge appears with
probability p0 and a present edge survives with probability p1. Whatever
graph we start from, the edge density settles at q = p0 / (1 - p1 + p0).
We start one copy empty and one complete. Both copies share the same seed
and therefore the same rewiring maps, so they coalesce pair by pair.
"""
import numpy as np

from exchgraph import DiscreteChainConfig, FiniteGraph, RewiringKernel, er_stationary_density, run_chain

P0, P1, N, STEPS = 0.2, 0.6, 150, 12

kernel = RewiringKernel.product_er(P0, P1)
config = DiscreteChainConfig(N, STEPS, ((1.0, kernel),), seed=2024)
q = er_stationary_density(P0, P1)

empty = run_chain(config, FiniteGraph.empty(N))
full = run_chain(config, FiniteGraph.complete(N))

print(f"stationary edge density q = {q:.4f}\n")
print(f"{'step':>4}  {'from empty':>10}  {'from complete':>13}  {'predicted gap':>13}")
for t, (a, b) in enumerate(zip(empty.graphs, full.graphs)):
    # the gap between the two expected densities contracts by (p1 - p0) per step
    print(f"{t:>4}  {a.edge_density():>10.4f}  {b.edge_density():>13.4f}  {(P1 - P0) ** t:>13.4f}")

tail = np.array([g.edge_density() for g in empty.graphs[-5:]])
print(f"\nlast five steps from empty average {tail.mean():.4f}; the chain has mixed.")
