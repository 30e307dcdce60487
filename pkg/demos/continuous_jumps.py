"""Three ways a continuous-time graph process can jump.

Edge clocks flip one pair at a time. Vertex clocks resample every pair
touching a single vertex at once. Global rewirings move a positive fraction of
all pairs simultaneously. We drive one process of each kind and tally how the
classifier labels the jumps, then look at how far the edge density moves in a
single jump of each kind.
"""
from collections import Counter

import numpy as np

from exchgraph import (FiniteGraph, JumpType, LevyItoIntensity, RewiringKernel, StochasticMatrix2,
                       classify_events, simulate)

N = 80
rng = np.random.default_rng(7)
coin = StochasticMatrix2(((0.5, 0.5), (0.5, 0.5)))
processes = {
    "edge clocks": LevyItoIntensity(e0=0.05, e1=0.05),
    "vertex clocks": LevyItoIntensity(v=0.5, sigma=((1.0, coin),)),
    "global rewiring": LevyItoIntensity(upsilon=((3.0, RewiringKernel.constant([0.2, 0.5, 0.1, 0.2])),)),
}

npairs = N * (N - 1) / 2
for name, intensity in processes.items():
    traj = simulate(intensity, FiniteGraph.empty(N), 2.0, rng.spawn(1)[0])
    labelled = classify_events(traj)
    tally = Counter(k.value for _, k, _ in labelled)
    moved = [c / npairs for _, k, c in labelled if k is not JumpType.SILENT]
    biggest = max(moved, default=0.0)
    print(f"{name:<16} events={len(labelled):<4} {dict(sorted(tally.items()))}")
    print(f"{'':<16} largest single-jump change in edge density: {biggest:.4f}")

print("\nOnly global rewirings move the density by an amount that does not vanish as N grows;")
print("for the kernel above each pair changes with probability 0.3 regardless of its state.")
