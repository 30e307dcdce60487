"""Event-driven simulation of exchangeable jump processes on G_[n].

Jumps come from a race of exponential clocks with a finite-activity
intensity (see :class:`~exchgraph.kernels.LevyItoIntensity`):

* two aggregate edge clocks of rate C(n,2)*e0 and C(n,2)*e1, each picking a
  uniform pair and forcing it to 0 or 1;
* a vertex clock of rate n*v, picking a uniform vertex and resampling its
  incident pairs with a 2x2 stochastic matrix drawn from sigma;
* one clock per global rewiring kernel, applying a fresh rewiring map on [n].

Every atom is recorded, including those that leave the state unchanged
(``silent``), so a trajectory is its own audit log and can be restricted or
replayed exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

import numpy as np

from . import _motifs as mt
from .graphs import FiniteGraph
from .kernels import LevyItoIntensity, draw_vertex_update, sample_rewiring
from .rewiring import RewiringMap, single_edge_map, vertex_update_map


class EventKind(str, enum.Enum):
    EDGE_FLIP = "EdgeFlip"
    VERTEX_UPDATE = "VertexUpdate"
    GLOBAL_REWIRE = "GlobalRewire"


class JumpType(str, enum.Enum):
    SILENT = "Silent"
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III = "TypeIII"


@dataclass(frozen=True, eq=False)
class EventRecord:
    """One atom of the driving point process.

    Payload by kind: ``pair``/``bit`` for edge flips; ``vertex``,
    ``matrix_index``, ``x0``, ``x1`` for vertex updates; ``kernel_index`` and
    ``rewiring`` for global rewirings.  A ``None`` pair or vertex means the
    event acts as the identity (it was restricted away).
    """

    time: float
    kind: EventKind
    silent: bool = False
    pair: tuple[int, int] | None = None
    bit: int = 0
    vertex: int | None = None
    matrix_index: int = 0
    x0: np.ndarray | None = None
    x1: np.ndarray | None = None
    kernel_index: int = 0
    rewiring: RewiringMap | None = None

    def as_map(self, n: int) -> RewiringMap:
        if self.kind is EventKind.EDGE_FLIP:
            if self.pair is None:
                return RewiringMap.identity(n)
            return single_edge_map(n, *self.pair, self.bit)
        if self.kind is EventKind.VERTEX_UPDATE:
            if self.vertex is None:
                return RewiringMap.identity(n)
            return vertex_update_map(n, self.vertex, self.x0[:n], self.x1[:n])
        return self.rewiring.restrict(n)

    def restrict(self, m: int) -> "EventRecord":
        if self.kind is EventKind.EDGE_FLIP:
            pair = self.pair if self.pair is not None and max(self.pair) < m else None
            return replace(self, pair=pair)
        if self.kind is EventKind.VERTEX_UPDATE:
            if self.vertex is None or self.vertex >= m:
                return replace(self, vertex=None, x0=None, x1=None)
            return replace(self, x0=self.x0[:m], x1=self.x1[:m])
        return replace(self, rewiring=self.rewiring.restrict(m))

    def relabel(self, sigma: Sequence[int]) -> "EventRecord":
        """The event acting on relabelled graphs: (W(G))^sigma = W^sigma(G^sigma)."""
        sigma = np.asarray(sigma, dtype=np.int64)
        inv = np.argsort(sigma)
        if self.kind is EventKind.EDGE_FLIP:
            if self.pair is None:
                return self
            i, j = (int(inv[v]) for v in self.pair)
            return replace(self, pair=(min(i, j), max(i, j)))
        if self.kind is EventKind.VERTEX_UPDATE:
            if self.vertex is None:
                return self
            return replace(self, vertex=int(inv[self.vertex]), x0=self.x0[sigma], x1=self.x1[sigma])
        return replace(self, rewiring=self.rewiring.relabel(sigma))


@dataclass
class ContinuousTrajectory:
    initial: FiniteGraph
    events: list[EventRecord]
    horizon: float

    @property
    def n(self) -> int:
        return self.initial.n

    def states(self) -> Iterator[tuple[EventRecord, FiniteGraph, FiniteGraph]]:
        """Yield ``(event, before, after)`` for every event, by replay."""
        cur = self.initial.bits.copy()
        for ev in self.events:
            before = FiniteGraph(self.n, cur)
            _apply_event(cur, ev, self.n)
            yield ev, before, FiniteGraph(self.n, cur)

    def path(self) -> list[tuple[float, FiniteGraph]]:
        out = [(0.0, self.initial)]
        out.extend((ev.time, after) for ev, _, after in self.states())
        return out

    def final(self) -> FiniteGraph:
        cur = self.initial.bits.copy()
        for ev in self.events:
            _apply_event(cur, ev, self.n)
        return FiniteGraph(self.n, cur)

    def state_at(self, t: float) -> FiniteGraph:
        """Right-continuous state at time t."""
        cur = self.initial.bits.copy()
        for ev in self.events:
            if ev.time > t:
                break
            _apply_event(cur, ev, self.n)
        return FiniteGraph(self.n, cur)

    def jump_times(self) -> list[float]:
        return [ev.time for ev in self.events if not ev.silent]


_INCIDENT_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}


def _incident(n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices of pairs incident to i and the opposite endpoints."""
    key = (n, i)
    hit = _INCIDENT_CACHE.get(key)
    if hit is None:
        others = np.array([j for j in range(n) if j != i], dtype=np.int64)
        lo = np.minimum(others, i)
        hi = np.maximum(others, i)
        hit = (hi * (hi - 1) // 2 + lo, others)
        if len(_INCIDENT_CACHE) > 100_000:
            _INCIDENT_CACHE.clear()
        _INCIDENT_CACHE[key] = hit
    return hit


def _apply_event(cur: np.ndarray, ev: EventRecord, n: int) -> bool:
    """Apply ``ev`` (restricted to [n]) to the pair bits in place; return True if anything changed."""
    if ev.kind is EventKind.EDGE_FLIP:
        if ev.pair is None or max(ev.pair) >= n:
            return False
        p = mt.pair_index(*ev.pair)
        changed = cur[p] != ev.bit
        cur[p] = ev.bit
        return bool(changed)
    if ev.kind is EventKind.VERTEX_UPDATE:
        if ev.vertex is None or ev.vertex >= n:
            return False
        idx, others = _incident(n, ev.vertex)
        old = cur[idx]
        new = np.where(old == 0, ev.x0[others], ev.x1[others])
        cur[idx] = new
        return bool(np.any(new != old))
    w = ev.rewiring if ev.rewiring.n == n else ev.rewiring.restrict(n)
    new = np.where(cur == 0, w.w0, w.w1)
    changed = bool(np.any(new != cur))
    cur[:] = new
    return changed


def simulate(intensity: LevyItoIntensity, G0: FiniteGraph, T: float,
             rng: np.random.Generator) -> ContinuousTrajectory:
    """Simulate the jump process from ``G0`` on [0, T]."""
    if not math.isfinite(T) or T < 0:
        raise ValueError(f"horizon must be finite and nonnegative, got {T}")
    n = G0.n
    npairs = mt.n_pairs(n)
    rates = np.array([npairs * intensity.e0, npairs * intensity.e1, n * intensity.v]
                     + [r for r, _ in intensity.upsilon], dtype=float)
    if not np.all(np.isfinite(rates)):
        raise ValueError("intensity rates must be finite")
    total = rates.sum()
    cur = G0.bits.copy()
    events: list[EventRecord] = []
    t = 0.0
    if total <= 0:
        return ContinuousTrajectory(G0, events, T)
    cum = np.cumsum(rates) / total
    while True:
        t += rng.exponential(1.0 / total)
        if t > T:
            break
        channel = min(int(np.searchsorted(cum, rng.random(), side="right")), len(rates) - 1)
        if channel in (0, 1):
            p = int(rng.integers(npairs))
            lo, hi = mt.pair_arrays(n)
            ev = EventRecord(t, EventKind.EDGE_FLIP, pair=(int(lo[p]), int(hi[p])), bit=channel)
        elif channel == 2:
            i = int(rng.integers(n))
            idx, x0, x1 = draw_vertex_update(intensity.sigma, n, rng.spawn(1)[0])
            ev = EventRecord(t, EventKind.VERTEX_UPDATE, vertex=i, matrix_index=idx, x0=x0, x1=x1)
        else:
            k = channel - 3
            w = sample_rewiring(intensity.upsilon[k][1], n, rng.spawn(1)[0])
            ev = EventRecord(t, EventKind.GLOBAL_REWIRE, kernel_index=k, rewiring=w)
        changed = _apply_event(cur, ev, n)
        events.append(replace(ev, silent=not changed))
    return ContinuousTrajectory(G0, events, T)


def drive(G0: FiniteGraph, events: Sequence[EventRecord], horizon: float) -> ContinuousTrajectory:
    """Run the process on [G0.n] from an externally given event stream.

    Events are restricted to [G0.n] and silent flags are recomputed for the
    restricted state.
    """
    n = G0.n
    cur = G0.bits.copy()
    out = []
    for ev in events:
        ev = ev.restrict(n)
        changed = _apply_event(cur, ev, n)
        out.append(replace(ev, silent=not changed))
    return ContinuousTrajectory(G0, out, horizon)


def restrict_trajectory(traj: ContinuousTrajectory, m: int) -> ContinuousTrajectory:
    """The [m]-process: restricted initial state driven by restricted events."""
    if not 1 <= m <= traj.n:
        raise ValueError(f"cannot restrict a trajectory on {traj.n} vertices to {m}")
    return drive(traj.initial.restrict(m), traj.events, traj.horizon)


def classify_jump(before: FiniteGraph, after: FiniteGraph, incident_hint: int | None = None) -> JumpType:
    """Classify a transition by the pairs it changes.

    Silent if nothing changed, TypeI for exactly one pair, TypeII when several
    pairs changed and all share one vertex (the hint, if given), else TypeIII.
    """
    if before.n != after.n:
        raise ValueError(f"graph sizes differ: {before.n} vs {after.n}")
    diff = np.flatnonzero(before.bits != after.bits)
    if diff.size == 0:
        return JumpType.SILENT
    if diff.size == 1:
        return JumpType.TYPE_I
    lo, hi = mt.pair_arrays(before.n)
    common = {int(lo[diff[0]]), int(hi[diff[0]])}
    for p in diff[1:]:
        common &= {int(lo[p]), int(hi[p])}
        if not common:
            return JumpType.TYPE_III
    if incident_hint is not None and incident_hint not in common:
        return JumpType.TYPE_III
    return JumpType.TYPE_II


def classify_events(traj: ContinuousTrajectory) -> list[tuple[EventRecord, JumpType, int]]:
    """(event, jump type, number of changed pairs) for every event in the trajectory."""
    out = []
    for ev, before, after in traj.states():
        hint = ev.vertex if ev.kind is EventKind.VERTEX_UPDATE else None
        changed = int(np.count_nonzero(before.bits != after.bits))
        out.append((ev, classify_jump(before, after, hint), changed))
    return out
