"""Command-line entry point.

    blindrank run --preset fig2a --seed 3 --out fig2a.csv
    blindrank run --config my_experiment.json --workers 4
    blindrank infer --signals batch.npy --out profile.csv
    blindrank bound --mu 1 --t 1 --alpha 0.1 --m 10 --n 100 --beta1 25 --kappa 5 --C 1
    blindrank graph --model ba --n 500 --m 4 --m0 4 --seed 1 --out ba.edgelist
    blindrank signals --model karate --N 1000 --seed 7 --out batch.npy

Exit status: 0 on success, 1 on usage or configuration errors, 2 on
runtime failures.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bounds import BoundInputs, er_kappa_bound, er_sample_bound, sample_bound
from .errors import BlindRankError, ConfigError
from .estimator import infer_centrality, write_profile
from .experiments import (
    PRESETS,
    ExperimentConfig,
    build_filter,
    build_graph,
    default_output_path,
    emit_results,
    preset_config,
    run_experiment,
)
from .graph import eigenvector_centrality, write_edgelist
from .signals import NOISE_LAWS, generate_signals, load_batch, save_batch


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _graph_args(p):
    p.add_argument("--model", choices=("er", "ba", "karate", "file"), default="karate")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--m0", type=int, default=3)
    p.add_argument("--graph-path")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blindrank", description="Blind eigenvector-centrality ranking from graph signals.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    run = sub.add_parser("run", help="run an experiment preset or config file")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON config file")
    src.add_argument("--preset", choices=PRESETS)
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--out", help="output file")
    run.add_argument("--format", choices=("csv", "json"))
    run.add_argument("--runs", type=int)
    run.add_argument("--workers", type=int)

    inf = sub.add_parser("infer", help="rank nodes from a stored signal batch")
    inf.add_argument("--signals", required=True, help=".npy or .csv batch (rows are signals)")
    inf.add_argument("--out", help="CSV of node, centrality, rank (default: stdout)")
    inf.add_argument("--method", choices=("power", "dense"), default="power")

    bnd = sub.add_parser("bound", help="evaluate a sample-complexity bound")
    bnd.add_argument("--kind", choices=("sample", "er-kappa", "er-samples"), default="sample")
    for name in ("mu", "kappa", "beta1", "m", "alpha", "p"):
        bnd.add_argument(f"--{name}", type=float)
    bnd.add_argument("--n", type=int)
    bnd.add_argument("--t", type=float, default=1.0)
    bnd.add_argument("--C", type=float, default=1.0)

    gr = sub.add_parser("graph", help="generate or inspect a graph")
    _graph_args(gr)
    gr.add_argument("--out", help="write the edge list here")
    gr.add_argument("--top", type=int, default=5, help="number of most central nodes to list")

    sig = sub.add_parser("signals", help="synthesize a signal batch for replay with `infer`")
    _graph_args(sig)
    sig.add_argument("--N", type=int, required=True)
    sig.add_argument("--noise-law", choices=NOISE_LAWS, default="gaussian")
    sig.add_argument("--order", type=int, default=4)
    sig.add_argument("--out", required=True)
    return parser


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_file(args.config) if args.config else preset_config(args.preset)
    overrides = {"master_seed": args.seed, "out": args.out, "format": args.format,
                 "runs": args.runs, "workers": args.workers}
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    cfg.validate()
    table = run_experiment(cfg)
    path = emit_results(table, cfg.out or default_output_path(cfg), cfg.format)
    print(f"wrote {len(table.rows)} rows to {path}")
    return 0


def _cmd_infer(args) -> int:
    batch = load_batch(args.signals)
    profile = infer_centrality(batch, method=args.method)
    if args.out:
        write_profile(profile, args.out)
    else:
        print("node,centrality,rank")
        for i, (v, r) in enumerate(zip(profile.values, profile.ranks)):
            print(f"{i},{float(v)!r},{int(r)}")
    return 0


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"bound --kind {args.kind} requires {', '.join(missing)}")


def _cmd_bound(args) -> int:
    if args.kind == "sample":
        _require(args, "mu", "kappa", "beta1", "m", "n", "alpha")
        inputs = BoundInputs(mu=args.mu, kappa=args.kappa, beta1=args.beta1, m=args.m,
                             n=args.n, alpha=args.alpha, t=args.t, C=args.C)
        print(sample_bound(inputs))
    elif args.kind == "er-kappa":
        _require(args, "n", "p")
        print(repr(er_kappa_bound(args.n, args.p, args.C)))
    else:
        _require(args, "n", "m")
        print(er_sample_bound(args.n, args.m, args.t, args.C))
    return 0


def _graph_from_args(args):
    cfg = ExperimentConfig(model=args.model, n=args.n, p=args.p, m=args.m, m0=args.m0,
                           graph_path=args.graph_path, master_seed=args.seed)
    return cfg, build_graph(cfg, args.seed)


def _cmd_graph(args) -> int:
    _, graph = _graph_from_args(args)
    summary = {"n": graph.n, "edges": graph.n_edges, "connected": graph.is_connected(),
               "max_degree": int(graph.degrees.max(initial=0))}
    if graph.n_edges:
        profile = eigenvector_centrality(graph)
        top = np.argsort(-profile.values, kind="stable")[: args.top]
        summary["top_nodes"] = [
            {"node": int(i), "label": graph.labels[i], "centrality": round(float(profile.values[i]), 6)}
            for i in top
        ]
    if args.out:
        write_edgelist(graph, args.out)
        summary["written"] = args.out
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_signals(args) -> int:
    cfg, graph = _graph_from_args(args)
    cfg.order = args.order
    batch = generate_signals(build_filter(cfg, graph), args.N, args.noise_law, args.seed)
    path = save_batch(batch, args.out)
    print(f"wrote {batch.N} signals of length {batch.n} to {path}")
    return 0


COMMANDS = {
    "run": _cmd_run,
    "infer": _cmd_infer,
    "bound": _cmd_bound,
    "graph": _cmd_graph,
    "signals": _cmd_signals,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"blindrank: config error: {exc}", file=sys.stderr)
        return 1
    except (BlindRankError, OSError) as exc:
        print(f"blindrank: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
