"""Command-line front end.

Configuration precedence, lowest to highest: built-in defaults, the JSON file
given by ``--config``, then explicit flags.  A seed is mandatory.  Every run
writes ``manifest.json`` (the fully resolved configuration) into ``--out``
alongside its artifacts; nothing time-dependent is recorded, so equal
(config, seed) pairs give byte-identical output.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from . import verify as V
from ._rng import replica_seeds
from .continuous import simulate
from .discrete import DiscreteChainConfig, run_chain
from .graphs import FiniteGraph
from .kernels import Graphon, LevyItoIntensity, sample_beta_mixture, sample_graph, sample_graphs
from .limits import GraphLimitVector, RewiringLimitMatrix, act, empirical_limit, kernel_limit_matrix

MODES = ("sample", "run-discrete", "run-continuous", "limits", "verify")
SUITES = ("reversible", "consistency", "exchangeability", "stationarity", "samplers", "all")

DEFAULTS = {
    "sample": {"model": "er", "p": 0.5, "alpha": 1.0, "beta": 1.0, "grid": None, "graphon_file": None,
               "n": 10, "count": 10, "m_max": 3},
    "run-discrete": {"n": 50, "steps": 10, "kernels": [{"weight": 1.0, "product_er": [0.2, 0.6]}],
                     "initial": "empty", "replicas": 1, "threads": 1, "m_max": 2},
    "run-continuous": {"n": 20, "horizon": 1.0, "e0": 0.0, "e1": 0.0, "v": 0.0, "sigma": None,
                       "upsilon": [], "grid_step": None, "initial": "empty", "replicas": 1,
                       "threads": 1, "m_max": 2},
    "limits": {"kernels": [{"weight": 1.0, "product_er": [0.2, 0.6]}], "level": 2, "steps": 5,
               "initial": {"er": 0.0}, "samples": None},
    "verify": {"suite": "all", "alpha": 1.5, "beta": 0.5, "p0": 0.2, "p1": 0.6, "n": 100,
               "steps": 300, "replicas": 20, "threads": 1, "replicates": 10_000, "samples": 100_000},
}

# flag name -> config key
FLAG_KEYS = {"n": "n", "steps": "steps", "horizon": "horizon", "replicas": "replicas", "threads": "threads",
             "suite": "suite", "alpha": "alpha", "beta": "beta", "p0": "p0", "p1": "p1"}


class ConfigError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exchgraph", description="Exchangeable graph-valued processes.")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--seed", type=int, help="random seed (required here or in the config)")
        p.add_argument("--n", type=int)
        p.add_argument("--steps", type=int)
        p.add_argument("--horizon", type=float)
        p.add_argument("--out", type=Path, required=mode != "verify", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None, help="density table format")
        p.add_argument("--replicas", type=int)
        p.add_argument("--threads", type=int)
        if mode == "verify":
            p.add_argument("--suite", choices=SUITES)
            for name in ("alpha", "beta", "p0", "p1"):
                p.add_argument(f"--{name}", type=float)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS[args.mode])
    if args.config is not None:
        try:
            loaded = fio.load_json(args.config)
        except fio.FormatError as exc:
            raise ConfigError(str(exc)) from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - set(cfg) - {"seed", "format"}
        if unknown:
            raise ConfigError(f"unknown config keys for {args.mode}: {sorted(unknown)}")
        cfg.update(loaded)
    for flag, key in FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            cfg[key] = value
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.format is not None:
        cfg["format"] = args.format
    cfg.setdefault("format", "csv")
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {cfg['format']!r}")
    if "seed" not in cfg or not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool):
        raise ConfigError("an integer seed is required (--seed or 'seed' in the config)")
    for key in ("n", "steps", "replicas", "threads", "count", "level", "m_max"):
        if key in cfg and cfg[key] is not None and (not isinstance(cfg[key], int) or cfg[key] < 0):
            raise ConfigError(f"{key} must be a nonnegative integer, got {cfg[key]!r}")
    if cfg.get("n") is not None and cfg["n"] < 1:
        raise ConfigError("n must be positive")
    return cfg


# -- config interpretation ----------------------------------------------------

def _kernel_spec(spec: dict):
    if "file" in spec:
        return fio.load_kernel(spec["file"])
    return fio.kernel_from_dict(spec)


def _kernel_mixture(specs) -> tuple:
    if not isinstance(specs, list) or not specs:
        raise ConfigError("'kernels' must be a non-empty list")
    return tuple((float(s.get("weight", 1.0)), _kernel_spec(s)) for s in specs)


def _initial_graph(spec, n: int, seed: int) -> FiniteGraph:
    if spec == "empty":
        return FiniteGraph.empty(n)
    if spec == "complete":
        return FiniteGraph.complete(n)
    if isinstance(spec, dict) and "er" in spec:
        return sample_graph(Graphon.constant(float(spec["er"])), n, np.random.default_rng([seed, 1]))
    if isinstance(spec, dict) and "graph" in spec:
        G = fio.graph_from_dict(spec["graph"])
        if G.n != n:
            raise ConfigError(f"initial graph has {G.n} vertices, n={n}")
        return G
    raise ConfigError(f"unsupported initial state {spec!r}")


def _intensity(cfg: dict) -> LevyItoIntensity:
    kwargs = {k: cfg[k] for k in ("e0", "e1", "v")}
    if cfg.get("sigma"):
        kwargs["sigma"] = tuple((float(s.get("weight", 1.0)), fio.stochastic_matrix_from(s["matrix"]))
                                for s in cfg["sigma"])
    kwargs["upsilon"] = tuple((float(u["rate"]), _kernel_spec(u)) for u in cfg.get("upsilon") or [])
    return LevyItoIntensity(**kwargs)


def _levels_for(n: int, m_max: int) -> int:
    return max(1, min(m_max, n))


# -- modes --------------------------------------------------------------------

def _write(out: Path, name: str, text: str) -> None:
    (out / name).write_text(text)


def run_sample(cfg: dict, out: Path) -> int:
    n, count, model = cfg["n"], cfg["count"], cfg["model"]
    rng = np.random.default_rng(cfg["seed"])
    if model == "er":
        rows = sample_graphs(Graphon.constant(float(cfg["p"])), n, count, rng)
    elif model == "graphon":
        if cfg["graphon_file"]:
            g = fio.load_graphon(cfg["graphon_file"])
        elif cfg["grid"] is not None:
            g = fio.graphon_from_dict(cfg)
        else:
            raise ConfigError("graphon model needs 'grid' or 'graphon_file'")
        rows = sample_graphs(g, n, count, rng)
    elif model == "beta":
        rows = sample_beta_mixture(float(cfg["alpha"]), float(cfg["beta"]), n, count, rng)
    else:
        raise ConfigError(f"unknown model {model!r}; use er, graphon or beta")
    graphs = [FiniteGraph(n, r) for r in rows]
    _write(out, "graphs.jsonl", fio.write_jsonl({"sample": i, "graph": fio.graph_to_dict(G)}
                                                 for i, G in enumerate(graphs)))
    m = _levels_for(n, cfg["m_max"])
    rows_ = []
    for i, G in enumerate(graphs):
        D = empirical_limit(G, m, rng=np.random.default_rng([cfg["seed"], 2, i]))
        rows_ += fio.density_rows(i, D.levels, D.exact)
    _write(out, f"densities.{_ext(cfg)}", fio.format_table(rows_, cfg["format"], "sample"))
    return 0


def _ext(cfg: dict) -> str:
    return "csv" if cfg["format"] == "csv" else "jsonl"


def run_discrete(cfg: dict, out: Path) -> int:
    n = cfg["n"]
    config = DiscreteChainConfig(n, cfg["steps"], _kernel_mixture(cfg["kernels"]), cfg["seed"])
    G0 = _initial_graph(cfg["initial"], n, cfg["seed"])
    m = _levels_for(n, cfg["m_max"])
    seeds = replica_seeds(cfg["seed"], cfg["replicas"])

    def one(seed):
        c = DiscreteChainConfig(n, config.steps, config.kernel_mixture, seed)
        return run_chain(c, G0, retain_maps=False)

    trajs = _parallel(one, seeds, cfg["threads"])
    for r, traj in enumerate(trajs):
        _write(out, f"trajectory_r{r}.jsonl",
               fio.write_jsonl({"step": s, "graph": fio.graph_to_dict(g)} for s, g in traj))
        rows = []
        for s, g in traj:
            D = empirical_limit(g, m, rng=np.random.default_rng([cfg["seed"], 3, r, s]))
            rows += fio.density_rows(s, D.levels, D.exact)
        _write(out, f"densities_r{r}.{_ext(cfg)}", fio.format_table(rows, cfg["format"], "step"))
    return 0


def run_continuous(cfg: dict, out: Path) -> int:
    n, T = cfg["n"], cfg["horizon"]
    if T is None or T < 0:
        raise ConfigError("horizon must be nonnegative")
    intensity = _intensity(cfg)
    G0 = _initial_graph(cfg["initial"], n, cfg["seed"])
    m = _levels_for(n, cfg["m_max"])
    step = cfg["grid_step"] if cfg["grid_step"] else (T / 10 if T > 0 else 1.0)
    grid = np.round(np.arange(0.0, T + step / 2, step), 12)
    seeds = replica_seeds(cfg["seed"], cfg["replicas"])
    trajs = _parallel(lambda s: simulate(intensity, G0, T, np.random.default_rng(s)), seeds, cfg["threads"])
    for r, traj in enumerate(trajs):
        _write(out, f"events_r{r}.jsonl", fio.write_jsonl(fio.event_to_dict(e) for e in traj.events))
        rows = []
        for i, t in enumerate(grid):
            D = empirical_limit(traj.state_at(float(t)), m, rng=np.random.default_rng([cfg["seed"], 4, r, i]))
            rows += fio.density_rows(float(t), D.levels, D.exact)
        _write(out, f"densities_r{r}.{_ext(cfg)}", fio.format_table(rows, cfg["format"], "time"))
    return 0


def run_limits(cfg: dict, out: Path) -> int:
    level = cfg["level"]
    mixture = _kernel_mixture(cfg["kernels"])
    rng = np.random.default_rng(cfg["seed"])
    mats = []
    for (w, k), r in zip(mixture, rng.spawn(len(mixture))):
        mats.append(w * kernel_limit_matrix(k, level, cfg["samples"], r if cfg["samples"] else None).entries)
    ups = RewiringLimitMatrix(level, sum(mats))
    init = cfg["initial"]
    if isinstance(init, dict) and "er" in init:
        D = GraphLimitVector.erdos_renyi(float(init["er"]), level)
    elif isinstance(init, dict) and "graph" in init:
        D = empirical_limit(fio.graph_from_dict(init["graph"]), level)
    else:
        raise ConfigError(f"unsupported initial limit {init!r}")
    _write(out, "matrix.json", json.dumps({"level": level, "entries": ups.entries.tolist()}) + "\n")
    rows = fio.density_rows(0, D.levels, D.exact)
    for s in range(1, cfg["steps"] + 1):
        D = act(D, ups)
        rows += fio.density_rows(s, D.levels, cfg["samples"] is None and D.exact)
    _write(out, f"densities.{_ext(cfg)}", fio.format_table(rows, cfg["format"], "step"))
    return 0


def _parallel(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_verify(cfg: dict, out: Path | None) -> int:
    suite, seed = cfg["suite"], cfg["seed"]
    a, b = float(cfg["alpha"]), float(cfg["beta"])
    reports: list[V.TestReport] = []
    controls: list[V.TestReport] = []
    if suite in ("reversible", "all"):
        reports += [V.check_detailed_balance(a, b, 2), V.check_detailed_balance(a, b, 3)]
        controls.append(V.check_detailed_balance(a, b, 3, perturb=1e-6))
    if suite in ("consistency", "all"):
        reports.append(V.check_consistency(a, b))
        controls.append(V.check_consistency(a, b, perturb=1e-6))
    if suite in ("exchangeability", "all"):
        for name in ("product-er", "vertex-update", "reversible"):
            reports.append(V.check_exchangeability(name, replicates=cfg["replicates"], seed=seed))
        controls.append(V.check_exchangeability("biased-control", replicates=cfg["replicates"], seed=seed))
    if suite in ("stationarity", "all"):
        reports.append(V.check_er_stationarity(cfg["p0"], cfg["p1"], cfg["n"], cfg["steps"], cfg["replicas"],
                                               seed=seed, threads=cfg["threads"]))
    if suite in ("samplers", "all"):
        for r in V.sampler_law_suite(cfg["samples"], seed):
            (controls if r.name.startswith("control:") else reports).append(r)
    for c in controls:
        if not c.name.startswith("control:"):
            c.name = f"control:{c.name}"
    ok = all(r.passed for r in reports) and not any(c.passed for c in controls)
    print(V.summary_table(reports))
    if controls:
        print("-- fault controls (expected to FAIL)")
        print(V.summary_table(controls))
    print("OK" if ok else "VERIFICATION FAILED")
    if out is not None:
        _write(out, "reports.jsonl", "".join(r.to_json() + "\n" for r in reports + controls))
    return 0 if ok else 1


RUNNERS = {"sample": run_sample, "run-discrete": run_discrete, "run-continuous": run_continuous,
           "limits": run_limits}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        out = args.out
        if out is not None:
            try:
                out.mkdir(parents=True, exist_ok=True)
                _write(out, "manifest.json", json.dumps({"mode": args.mode, **cfg}, sort_keys=True,
                                                        indent=2, default=str) + "\n")
            except OSError as exc:
                raise ConfigError(f"cannot write to {out}: {exc.strerror}") from None
        if args.mode == "verify":
            return run_verify(cfg, out)
        return RUNNERS[args.mode](cfg, out)
    except (ConfigError, fio.FormatError, ValueError, TypeError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"exchgraph: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
