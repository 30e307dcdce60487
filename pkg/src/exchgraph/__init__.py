"""Exchangeable Markov processes on finite labelled graphs and their graph limits."""
from .continuous import (ContinuousTrajectory, EventKind, EventRecord, JumpType, classify_events,
                         classify_jump, drive, restrict_trajectory, simulate)
from .discrete import (DiscreteChainConfig, Trajectory, er_stationary_density, reversible_stationary_prob,
                       reversible_step, reversible_transition_prob, run_chain, run_replicas)
from .graphs import (Density, FiniteGraph, Injection, density, enumerate_graphs, graph_metric,
                     level_densities, subgraph_count)
from .kernels import (Graphon, LevyItoIntensity, RewiringKernel, StochasticMatrix2, beta_fidi_prob,
                      er_fidi_prob, sample_beta_mixture, sample_graph, sample_graphs, sample_rewiring,
                      sample_vertex_update)
from .limits import (GraphLimitVector, RewiringLimitMatrix, act, empirical_limit, kernel_limit_matrix,
                     limit_distance, map_limit_matrix, predict_vs_empirical)
from .rewiring import (RewiringMap, apply, compose, rewiring_density, single_edge_map,
                       vertex_update_map)

__all__ = [
    "ContinuousTrajectory", "EventKind", "EventRecord", "JumpType", "classify_events", "classify_jump",
    "drive", "restrict_trajectory", "simulate",
    "DiscreteChainConfig", "Trajectory", "er_stationary_density", "reversible_stationary_prob",
    "reversible_step", "reversible_transition_prob", "run_chain", "run_replicas",
    "Density", "FiniteGraph", "Injection", "density", "enumerate_graphs", "graph_metric",
    "level_densities", "subgraph_count",
    "Graphon", "LevyItoIntensity", "RewiringKernel", "StochasticMatrix2", "beta_fidi_prob",
    "er_fidi_prob", "sample_beta_mixture", "sample_graph", "sample_graphs", "sample_rewiring",
    "sample_vertex_update",
    "GraphLimitVector", "RewiringLimitMatrix", "act", "empirical_limit", "kernel_limit_matrix",
    "limit_distance", "map_limit_matrix", "predict_vs_empirical",
    "RewiringMap", "apply", "compose", "rewiring_density", "single_edge_map", "vertex_update_map",
]
