"""Serialisation of graphs, rewiring maps, kernels, event logs and density tables.

All file formats use 1-based vertex labels; the Python API is 0-based.
Motif ids in density tables are written ``"k:code"`` where ``code`` is the
colex bit code of the labelled graph on [k] (bit p = status of pair p in the
order {1,2}, {1,3}, {2,3}, {1,4}, ...).
"""
from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .continuous import EventKind, EventRecord
from .graphs import FiniteGraph
from .kernels import Graphon, RewiringKernel, StochasticMatrix2
from .rewiring import RewiringMap


class FormatError(ValueError):
    """Malformed serialised input."""


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    return obj[key]


def _vertex_count(obj: dict, where: str) -> int:
    n = _require(obj, "n", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"{where}: 'n' must be a positive integer, got {n!r}")
    return n


# -- graphs -----------------------------------------------------------------

def graph_to_dict(G: FiniteGraph) -> dict:
    return {"n": G.n, "edges": [[i + 1, j + 1] for i, j in G.edges()]}


def graph_from_dict(obj: dict) -> FiniteGraph:
    n = _vertex_count(obj, "graph")
    edges = _require(obj, "edges", "graph")
    out = []
    for e in edges:
        if len(e) != 2:
            raise FormatError(f"graph: edge {e!r} must have two endpoints")
        i, j = int(e[0]), int(e[1])
        if not (1 <= i < j <= n):
            raise FormatError(f"graph: edge {e!r} must satisfy 1 <= i < j <= {n}")
        out.append((i - 1, j - 1))
    return FiniteGraph.from_edges(n, out)


def graph_to_edgelist(G: FiniteGraph) -> str:
    lines = [f"n {G.n}"] + [f"{i + 1} {j + 1}" for i, j in G.edges()]
    return "\n".join(lines) + "\n"


def graph_from_edgelist(text: str) -> FiniteGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2 or rows[0][0] != "n":
        raise FormatError("edge list must start with a header line 'n <N>'")
    try:
        n = int(rows[0][1])
        edges = [[int(a), int(b)] for a, b in rows[1:]]
    except ValueError as exc:
        raise FormatError(f"edge list: {exc}") from None
    return graph_from_dict({"n": n, "edges": [sorted(e) for e in edges]})


# -- rewiring maps ----------------------------------------------------------

def rewiring_to_dict(W: RewiringMap) -> dict:
    return {"n": W.n, "entries": [[i + 1, j + 1, a, b] for i, j, a, b in W.entries()]}


def rewiring_from_dict(obj: dict) -> RewiringMap:
    n = _vertex_count(obj, "rewiring map")
    entries = []
    for e in _require(obj, "entries", "rewiring map"):
        if len(e) != 4:
            raise FormatError(f"rewiring map: entry {e!r} must be [i, j, w0, w1]")
        i, j, a, b = (int(x) for x in e)
        if not (1 <= i < j <= n):
            raise FormatError(f"rewiring map: entry {e!r} must satisfy 1 <= i < j <= {n}")
        entries.append((i - 1, j - 1, a, b))
    try:
        return RewiringMap.from_entries(n, entries)
    except ValueError as exc:
        raise FormatError(f"rewiring map: {exc}") from None


# -- kernels ------------------------------------------------------------------

def _grid(obj, where: str) -> np.ndarray:
    try:
        return np.asarray(_require(obj, "grid", where), dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: grid is not numeric ({exc})") from None


def graphon_from_dict(obj: dict) -> Graphon:
    try:
        return Graphon(_grid(obj, "graphon"))
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"graphon: {exc}") from None


def kernel_from_dict(obj: dict) -> RewiringKernel:
    """A rewiring kernel given by ``grid`` (k x k x 4, or a single 4-vector) or ``product_er: [p0, p1]``."""
    try:
        if isinstance(obj, dict) and "product_er" in obj:
            p0, p1 = obj["product_er"]
            return RewiringKernel.product_er(float(p0), float(p1))
        return RewiringKernel(_grid(obj, "kernel"))
    except FormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(f"kernel: {exc}") from None


def kernel_to_dict(kernel: RewiringKernel) -> dict:
    return {"grid": kernel.grid.tolist()}


def stochastic_matrix_from(obj) -> StochasticMatrix2:
    try:
        return StochasticMatrix2(tuple(tuple(r) for r in obj))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"stochastic matrix: {exc}") from None


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_kernel(path: str | Path) -> RewiringKernel:
    return kernel_from_dict(load_json(path))


def load_graphon(path: str | Path) -> Graphon:
    return graphon_from_dict(load_json(path))


# -- event logs -----------------------------------------------------------------

def event_to_dict(ev: EventRecord) -> dict:
    if ev.kind is EventKind.EDGE_FLIP:
        payload = {"pair": None if ev.pair is None else [ev.pair[0] + 1, ev.pair[1] + 1], "bit": ev.bit}
    elif ev.kind is EventKind.VERTEX_UPDATE:
        payload = {"vertex": None if ev.vertex is None else ev.vertex + 1,
                   "matrix_index": ev.matrix_index,
                   "x0": None if ev.x0 is None else ev.x0.tolist(),
                   "x1": None if ev.x1 is None else ev.x1.tolist()}
    else:
        payload = {"kernel_index": ev.kernel_index, "rewiring": rewiring_to_dict(ev.rewiring)}
    return {"time": ev.time, "kind": ev.kind.value, "payload": payload, "silent": ev.silent}


def event_from_dict(obj: dict) -> EventRecord:
    try:
        kind = EventKind(obj["kind"])
        p = obj["payload"]
        base = {"time": float(obj["time"]), "kind": kind, "silent": bool(obj.get("silent", False))}
        if kind is EventKind.EDGE_FLIP:
            pair = None if p["pair"] is None else (int(p["pair"][0]) - 1, int(p["pair"][1]) - 1)
            return EventRecord(**base, pair=pair, bit=int(p["bit"]))
        if kind is EventKind.VERTEX_UPDATE:
            vertex = None if p["vertex"] is None else int(p["vertex"]) - 1
            x0 = None if p["x0"] is None else np.asarray(p["x0"], dtype=np.uint8)
            x1 = None if p["x1"] is None else np.asarray(p["x1"], dtype=np.uint8)
            return EventRecord(**base, vertex=vertex, matrix_index=int(p["matrix_index"]), x0=x0, x1=x1)
        return EventRecord(**base, kernel_index=int(p["kernel_index"]), rewiring=rewiring_from_dict(p["rewiring"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"event record: {exc}") from None


def write_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def read_events(text: str) -> list[EventRecord]:
    return [event_from_dict(json.loads(ln)) for ln in text.splitlines() if ln.strip()]


# -- density tables ---------------------------------------------------------------

TABLE_FIELDS = ("index", "motif", "value", "exact")


def motif_id(k: int, code: int) -> str:
    return f"{k}:{code}"


def density_rows(index, levels: dict[int, np.ndarray], exact: bool) -> list[dict]:
    """Flat rows (index, motif id, value, exact) for one snapshot; ``index`` is a step or a time."""
    rows = []
    for k in sorted(levels):
        for code, v in enumerate(levels[k]):
            rows.append({"index": index, "motif": motif_id(k, code), "value": float(v), "exact": bool(exact)})
    return rows


def format_table(rows: list[dict], fmt: str, index_name: str = "step") -> str:
    """Render density rows as CSV (``fmt='csv'``) or line-delimited JSON (``fmt='json'``)."""
    renamed = [{index_name if k == "index" else k: v for k, v in r.items()} for r in rows]
    if fmt == "json":
        return write_jsonl(renamed)
    if fmt == "csv":
        buf = _io.StringIO()
        fields = [index_name if f == "index" else f for f in TABLE_FIELDS]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in renamed:
            w.writerow({**r, "value": repr(r["value"]), "exact": int(r["exact"])})
        return buf.getvalue()
    raise ValueError(f"unknown table format {fmt!r}; use 'csv' or 'json'")
