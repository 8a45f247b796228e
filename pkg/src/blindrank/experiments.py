"""Config-driven experiment runner producing plot-ready tables.

Presets reproduce the synthetic and karate-club studies:

``fig2a``  ER(n=500, p) for p in 0.1..0.9, Spearman against N.
``fig2b``  ER(n, 4 ln n / n) for several n, Spearman against N ln n / n.
``fig2c``  sorted true centralities of ER(500, ln n / n) and BA(500, 3, 3).
``fig2d``  BA(500, 4, 4), Spearman in blocks of 100 nodes of similar centrality.
``fig3``   karate club, samples sufficient to rank each node within +-1.

Every random draw comes from a stream keyed by ``master_seed`` and the
task's indices, so a table depends only on the config, never on the number
of workers or the order in which tasks finish.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .errors import BlindRankError, ConfigError, ParameterError
from .estimator import infer_centrality
from .evaluation import (
    SufficiencyProtocol,
    correct_rank_rate,
    spearman,
    sufficiency_from_rates,
    windowed_spearman,
)
from .graph import Graph, eigenvector_centrality, generate_ba, generate_er, load_graph, load_karate
from .rng import substream
from .signals import NOISE_LAWS, GraphFilter, generate_signals, make_normalized_filter, make_polynomial_filter

PRESETS = ("fig2a", "fig2b", "fig2c", "fig2d", "fig3", "custom")
MODELS = ("er", "ba", "karate", "file")
OUTPUT_DIR_ENV = "BLINDRANK_OUTPUT_DIR"


@dataclass
class ExperimentConfig:
    """Flat experiment description; every field maps to one JSON key."""

    preset: str = "custom"
    model: str = "er"
    n: int = 500
    p: Optional[float] = 0.1
    m: int = 3
    m0: int = 3
    graph_path: Optional[str] = None
    p_values: Optional[list] = None  # fig2a sweep
    n_values: Optional[list] = None  # fig2b sweep
    p_scale: float = 4.0  # fig2b: p = p_scale * ln(n) / n
    filter: str = "normalized"
    order: int = 4
    coefficients: Optional[list] = None
    noise_law: str = "gaussian"
    sample_grid: list = field(default_factory=lambda: [10, 100, 1000])
    normalized_grid: Optional[list] = None  # fig2b, in units of N ln n / n
    runs: int = 10
    master_seed: int = 0
    window: int = 100
    stride: Optional[int] = None
    trials_per_point: int = 100
    rank_tolerance: int = 1
    probability_threshold: float = 0.95
    out: Optional[str] = None
    format: str = "csv"
    workers: int = 1

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown config field")
        base = preset_config(data["preset"]) if "preset" in data else cls()
        cfg = replace(base, **data)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
        return cls.from_dict(data)

    def validate(self) -> None:
        if self.preset not in PRESETS:
            raise ConfigError("preset", f"must be one of {PRESETS}, got {self.preset!r}")
        if self.model not in MODELS:
            raise ConfigError("model", f"must be one of {MODELS}, got {self.model!r}")
        if self.model == "file" and not self.graph_path:
            raise ConfigError("graph_path", "required when model is 'file'")
        if not isinstance(self.runs, int) or self.runs < 1:
            raise ConfigError("runs", "must be an integer >= 1")
        _check_grid("sample_grid", self.sample_grid, integer=True)
        if self.normalized_grid is not None:
            _check_grid("normalized_grid", self.normalized_grid, integer=False)
        if self.noise_law not in NOISE_LAWS:
            raise ConfigError("noise_law", f"must be one of {NOISE_LAWS}")
        if self.filter not in ("normalized", "polynomial"):
            raise ConfigError("filter", "must be 'normalized' or 'polynomial'")
        if self.filter == "polynomial" and not self.coefficients:
            raise ConfigError("coefficients", "required for a polynomial filter")
        if self.order < 0:
            raise ConfigError("order", "must be >= 0")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "must be 'csv' or 'json'")
        if self.window < 2:
            raise ConfigError("window", "must be >= 2")
        if self.stride is not None and self.stride < 1:
            raise ConfigError("stride", "must be >= 1")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError("master_seed", "must be a nonnegative integer")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if self.p is not None and not 0 <= self.p <= 1:
            raise ConfigError("p", "must lie in [0, 1]")
        for v in self.p_values or ():
            if not 0 <= v <= 1:
                raise ConfigError("p_values", f"{v} is not a probability")
        if self.preset == "fig3":
            try:
                self.protocol()
            except ParameterError as exc:
                raise ConfigError("sample_grid", str(exc)) from None

    def protocol(self) -> SufficiencyProtocol:
        return SufficiencyProtocol(
            rank_tolerance=self.rank_tolerance,
            probability_threshold=self.probability_threshold,
            max_samples=self.sample_grid[-1],
            sample_grid=tuple(self.sample_grid),
            trials_per_point=self.trials_per_point,
            noise_law=self.noise_law,
        )


def _check_grid(name: str, grid, integer: bool) -> None:
    if not grid:
        raise ConfigError(name, "must be non-empty")
    if integer and any(int(g) != g or g < 1 for g in grid):
        raise ConfigError(name, "entries must be positive integers")
    if not integer and any(g <= 0 for g in grid):
        raise ConfigError(name, "entries must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(name, "must be strictly increasing")


def preset_config(name: str) -> ExperimentConfig:
    if name == "fig2a":
        return ExperimentConfig(
            preset="fig2a", model="er", n=500, p=None,
            p_values=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            sample_grid=[10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000],
        )
    if name == "fig2b":
        return ExperimentConfig(
            preset="fig2b", model="er", p=None, n_values=[200, 400, 800], p_scale=4.0,
            normalized_grid=[0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
        )
    if name == "fig2c":
        return ExperimentConfig(preset="fig2c", model="er", n=500, p=None, m=3, m0=3)
    if name == "fig2d":
        return ExperimentConfig(
            preset="fig2d", model="ba", n=500, p=None, m=4, m0=4, window=100,
            sample_grid=[10, 25, 50, 100, 200, 300, 600, 1200, 2500, 5000],
        )
    if name == "fig3":
        return ExperimentConfig(
            preset="fig3", model="karate", n=34, p=None, runs=1,
            sample_grid=list(range(10, 1001, 10)), trials_per_point=100,
        )
    if name == "custom":
        return ExperimentConfig()
    raise ConfigError("preset", f"must be one of {PRESETS}, got {name!r}")


@dataclass
class ResultsTable:
    columns: list
    rows: list  # list of dicts keyed by column
    metadata: dict = field(default_factory=dict)

    def column(self, name: str, **where) -> list:
        return [r[name] for r in self.select(**where)]

    def select(self, **where) -> list:
        return [r for r in self.rows if all(r[k] == v for k, v in where.items())]


def build_graph(cfg: ExperimentConfig, rng) -> Graph:
    if cfg.model == "er":
        return generate_er(cfg.n, cfg.p, rng)
    if cfg.model == "ba":
        return generate_ba(cfg.n, cfg.m, cfg.m0, rng)
    if cfg.model == "karate":
        return load_karate()
    return load_graph(cfg.graph_path)


def build_filter(cfg: ExperimentConfig, graph: Graph) -> GraphFilter:
    if cfg.filter == "normalized":
        return make_normalized_filter(graph, cfg.order)
    return make_polynomial_filter(graph, cfg.coefficients)


def _spearman_curve(cfg, graph, filt, sizes, stream):
    u = eigenvector_centrality(graph).values
    out = []
    for g, N in enumerate(sizes):
        batch = generate_signals(filt, int(N), cfg.noise_law, (*stream, g))
        out.append(spearman(u, infer_centrality(batch).values))
    return out


def _task_fig2a(cfg, p_idx, run):
    p = cfg.p_values[p_idx]
    graph = generate_er(cfg.n, p, substream(cfg.master_seed, run, p_idx, 0))
    filt = build_filter(cfg, graph)
    vals = _spearman_curve(cfg, graph, filt, cfg.sample_grid, (cfg.master_seed, run, p_idx, 1))
    return [{"p": p, "N": N, "run": run, "spearman": v} for N, v in zip(cfg.sample_grid, vals)]


def _task_fig2b(cfg, n_idx, run):
    n = cfg.n_values[n_idx]
    p = min(1.0, cfg.p_scale * math.log(n) / n)
    graph = generate_er(n, p, substream(cfg.master_seed, run, n_idx, 0))
    filt = build_filter(cfg, graph)
    sizes = [max(1, round(s * n / math.log(n))) for s in cfg.normalized_grid]
    vals = _spearman_curve(cfg, graph, filt, sizes, (cfg.master_seed, run, n_idx, 1))
    return [
        {"n": n, "normalized_N": s, "N": N, "run": run, "spearman": v}
        for s, N, v in zip(cfg.normalized_grid, sizes, vals)
    ]


def _task_fig2c(cfg, model_idx, run):
    rng = substream(cfg.master_seed, run, model_idx, 0)
    if model_idx == 0:
        graph = generate_er(cfg.n, math.log(cfg.n) / cfg.n, rng)
    else:
        graph = generate_ba(cfg.n, cfg.m, cfg.m0, rng)
    u = np.sort(eigenvector_centrality(graph).values)[::-1]
    model = ("er", "ba")[model_idx]
    return [{"model": model, "run": run, "position": i, "centrality": float(v)} for i, v in enumerate(u)]


def _task_fig2d(cfg, run):
    graph = generate_ba(cfg.n, cfg.m, cfg.m0, substream(cfg.master_seed, run, 0, 0))
    filt = build_filter(cfg, graph)
    u = eigenvector_centrality(graph).values
    rows = []
    for g, N in enumerate(cfg.sample_grid):
        batch = generate_signals(filt, N, cfg.noise_law, (cfg.master_seed, run, 0, 1, g))
        u_hat = infer_centrality(batch).values
        for start, v in windowed_spearman(u, u_hat, cfg.window, cfg.stride):
            rows.append({"N": N, "run": run, "window_start": start, "spearman": v})
    return rows


def _task_fig3(cfg, g):
    graph = build_graph(cfg, substream(cfg.master_seed, 0, 0, 0))
    filt = build_filter(cfg, graph)
    r_true = eigenvector_centrality(graph).ranks
    return correct_rank_rate(r_true, filt, cfg.sample_grid[g], cfg.protocol(), cfg.master_seed)


def _task_custom(cfg, run):
    graph = build_graph(cfg, substream(cfg.master_seed, run, 0, 0))
    filt = build_filter(cfg, graph)
    vals = _spearman_curve(cfg, graph, filt, cfg.sample_grid, (cfg.master_seed, run, 0, 1))
    return [{"N": N, "run": run, "spearman": v} for N, v in zip(cfg.sample_grid, vals)]


_TASKS = {
    "fig2a": _task_fig2a,
    "fig2b": _task_fig2b,
    "fig2c": _task_fig2c,
    "fig2d": _task_fig2d,
    "fig3": _task_fig3,
    "custom": _task_custom,
}


def _task_list(cfg) -> list[tuple]:
    runs = range(cfg.runs)
    if cfg.preset == "fig2a":
        return [(i, r) for i in range(len(cfg.p_values)) for r in runs]
    if cfg.preset == "fig2b":
        return [(i, r) for i in range(len(cfg.n_values)) for r in runs]
    if cfg.preset == "fig2c":
        return [(i, r) for i in range(2) for r in runs]
    if cfg.preset == "fig3":
        return [(g,) for g in range(len(cfg.sample_grid))]
    return [(r,) for r in runs]


def _call(args):
    cfg, task = args
    try:
        return _TASKS[cfg.preset](cfg, *task)
    except BlindRankError as exc:
        raise type(exc)(f"{cfg.preset} task {task}: {exc}") from exc


def _with_means(rows: list, keys: list, value: str) -> list:
    groups: dict = {}
    for r in rows:
        groups.setdefault(tuple(r[k] for k in keys), []).append(r[value])
    means = []
    for key, vals in groups.items():
        row = dict(zip(keys, key))
        row["run"] = "mean"
        finite = [v for v in vals if not math.isnan(v)]
        row[value] = float(np.mean(finite)) if finite else float("nan")
        means.append(row)
    return rows + means


def _sort_key(keys):
    def key(row):
        run = row.get("run")
        tail = (1, 0) if run == "mean" else (0, run if run is not None else 0)
        return (*[row[k] for k in keys], *tail)

    return key


def run_experiment(config: ExperimentConfig) -> ResultsTable:
    """Execute every (run, grid point) of a config and assemble the table."""
    config.validate()
    tasks = _task_list(config)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_call, [(config, t) for t in tasks]))
    else:
        results = [_call((config, t)) for t in tasks]

    echo = {k: v for k, v in config.to_dict().items() if k != "workers"}
    meta = {"config": echo, "seed": config.master_seed, "version": __version__}
    preset = config.preset
    if preset == "fig3":
        return _fig3_table(config, np.array(results), meta)

    rows = [row for chunk in results for row in chunk]
    if preset == "fig2a":
        keys, value, cols = ["p", "N"], "spearman", ["p", "N", "run", "spearman"]
    elif preset == "fig2b":
        keys, value, cols = ["n", "normalized_N", "N"], "spearman", ["n", "normalized_N", "N", "run", "spearman"]
    elif preset == "fig2c":
        keys, value, cols = ["model", "position"], "centrality", ["model", "position", "run", "centrality"]
    elif preset == "fig2d":
        keys, value, cols = ["N", "window_start"], "spearman", ["N", "window_start", "run", "spearman"]
    else:
        keys, value, cols = ["N"], "spearman", ["N", "run", "spearman"]
    rows = sorted(_with_means(rows, keys, value), key=_sort_key(keys))
    return ResultsTable(cols, rows, meta)


def _fig3_table(cfg: ExperimentConfig, rates: np.ndarray, meta: dict) -> ResultsTable:
    graph = build_graph(cfg, substream(cfg.master_seed, 0, 0, 0))
    profile = eigenvector_centrality(graph)
    suff = sufficiency_from_rates(rates, cfg.protocol())
    rows = [
        {
            "node": i,
            "label": graph.labels[i] or "",
            "centrality": float(profile.values[i]),
            "true_rank": int(profile.ranks[i]),
            "sufficiency": int(suff[i]),
        }
        for i in range(graph.n)
    ]
    meta["rates"] = {"sample_grid": list(cfg.sample_grid), "rates": np.round(rates, 6).tolist()}
    return ResultsTable(["node", "label", "centrality", "true_rank", "sufficiency"], rows, meta)


def _fmt(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def _json_safe(v: Any) -> Any:
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def render(table: ResultsTable, fmt: str = "csv") -> str:
    """Serialize a table. CSV carries metadata as leading ``#`` lines."""
    meta = _json_safe(table.metadata)
    if fmt == "json":
        rows = [{c: _json_safe(r[c]) for c in table.columns} for r in table.rows]
        doc = {"metadata": meta, "columns": list(table.columns), "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "csv":
        raise ParameterError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(r[c]) for c in table.columns])
    return buf.getvalue()


def default_output_path(config: ExperimentConfig) -> Path:
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return base / f"{config.preset}.{config.format}"


def emit_results(table: ResultsTable, path, fmt: str = "csv") -> Path:
    path = Path(path)
    text = render(table, fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc
    return path
