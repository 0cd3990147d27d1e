"""Command-line frontend: ingestion -> scattering -> aggregation -> reports.

Subcommands: ``scatter``, ``validate-frame``, ``perturb``, ``energy``,
``aggregate``, ``fit``.  Exit codes: 0 success, 1 assertion or bound
failure, 2 input error.  Progress goes to standard error; errors are a
single machine-parsable ``error: ...`` line.  All randomness flows from the
configured seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfg
from .aggregation import FLOAT_FORMAT
from .core import Signal, build_space
from .datasets import synthetic_molecules
from .errors import GraphScatterError
from .io import (
    load_graph_dataset,
    load_molecules,
    load_targets,
    read_edge_list,
    write_feature_json,
)
from .kernels import frame_bounds_on_interval
from .ml import cross_validate, fit_krr, model_dump
from .perturbation import operator_perturbation_experiment
from .pipelines import (
    graph_signal_features,
    graph_signal_trees,
    molecule_feature_matrix,
)
from .scattering import energy_decay_certificate, layer_energy, scatter


def _progress(msg: str):
    print(msg, file=sys.stderr)


def _fmt(x: float) -> str:
    return FLOAT_FORMAT % x


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate_frame(args) -> int:
    if args.preset:
        bank = cfg.bank_from_config({"preset": args.preset})
    elif args.config:
        bank = cfg.bank_from_config(args.config)
    else:
        raise GraphScatterError("validate-frame needs --preset or --config")
    a, b = frame_bounds_on_interval(bank, (args.interval[0], args.interval[1]),
                                    n_grid=args.grid)
    tight = abs(b - a) <= 1e-8 * max(1.0, abs(b))
    print(f"A = {_fmt(a)}")
    print(f"B = {_fmt(b)}")
    print(f"tight = {'true' if tight else 'false'}")
    if a <= 0:
        _progress("lower frame bound is not positive")
        return 1
    return 0


def _load_records(run: cfg.RunConfig):
    if run.dataset_path is None:
        raise GraphScatterError("config has no dataset section")
    if not Path(run.dataset_path).exists():
        raise FileNotFoundError(run.dataset_path)
    return load_graph_dataset(run.dataset_path, run.dataset_format)


def _arch_spec(run: cfg.RunConfig, args) -> cfg.ArchitectureSpec:
    return cfg.architecture_spec(run.architecture,
                                 depth_override=args.depth,
                                 preset_override=args.preset)


def cmd_scatter(args) -> int:
    run = cfg.load_run_config(args.config)
    _apply_overrides(run, args)
    records = _load_records(run)
    spec = _arch_spec(run, args)
    out_dir = Path(run.out or "features")
    out_dir.mkdir(parents=True, exist_ok=True)

    def work(record):
        trees = graph_signal_trees(record, spec, run.descriptors)
        lines = ["signal,layer,path,vertex,re,im"]
        for name in sorted(trees):
            tree = trees[name]
            for n, layer in enumerate(tree.layers, 1):
                for path in sorted(layer.outputs):
                    path_str = "-".join(map(str, path)) if path else "root"
                    values = layer.outputs[path]
                    for v_idx, val in enumerate(np.ravel(values)):
                        lines.append(
                            f"{name},{n},{path_str},{v_idx},"
                            f"{_fmt(val.real)},{_fmt(val.imag)}"
                        )
        (out_dir / f"{record.id}.csv").write_text("\n".join(lines) + "\n")
        return record.id

    for rid in _map_jobs(work, records, run.jobs):
        _progress(f"scattered graph {rid}")
    _progress(f"wrote {len(records)} feature files to {out_dir}")
    return 0


def cmd_aggregate(args) -> int:
    run = cfg.load_run_config(args.config)
    _apply_overrides(run, args)
    records = _load_records(run)
    spec = _arch_spec(run, args)

    def work(record):
        feats = graph_signal_features(record, spec, run.descriptors,
                                      run.aggregation_mode, run.aggregation_p,
                                      run.normalize_first)
        rows = []
        for name in sorted(feats):
            for layer, path_str, comp, val in feats[name].rows():
                rows.append(f"{record.id},{name},{layer},{path_str},{comp},{_fmt(val)}")
        return record.id, rows

    all_rows = ["graph,signal,layer,path,component,value"]
    for rid, rows in _map_jobs(work, records, run.jobs):
        all_rows.extend(rows)
        _progress(f"aggregated graph {rid}")
    text = "\n".join(all_rows) + "\n"
    if run.out:
        Path(run.out).write_text(text)
        _progress(f"wrote graph-level features to {run.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_energy(args) -> int:
    run = cfg.load_run_config(args.config)
    _apply_overrides(run, args)
    if run.graph_path is None:
        raise GraphScatterError("config has no graph section")
    if not Path(run.graph_path).exists():
        raise FileNotFoundError(run.graph_path)
    adjacency, weights = read_edge_list(run.graph_path)
    extras = run.extras.get("energy", {})
    depth = args.depth or int(extras.get("depth", 6))
    n_signals = int(extras.get("signals", 10))
    spec = cfg.architecture_spec(run.architecture, depth_override=depth,
                                 preset_override=args.preset)
    arch = cfg.build_architecture(spec, adjacency, weights)
    cert = energy_decay_certificate(arch)
    rng = np.random.default_rng(run.seed)
    space = build_space(adjacency.shape[0], weights)
    ratios = np.zeros(depth + 1)
    for _ in range(n_signals):
        v = rng.standard_normal(space.size) + 1j * rng.standard_normal(space.size)
        f = Signal(space, v / space.norm(v))
        tree = scatter(arch, f)
        for n in range(depth + 1):
            ratios[n] = max(ratios[n], layer_energy(tree, n))
    lines = ["n,W_n,bound_n"]
    ok = True
    for n in range(1, depth + 1):
        bound = cert.cumulative_text(n)
        lines.append(f"{n},{_fmt(ratios[n])},{_fmt(bound)}")
        ok = ok and ratios[n] <= bound + 1e-8
    text = "\n".join(lines) + "\n"
    if run.out:
        Path(run.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not ok:
        _progress("energy exceeded the certified bound")
        return 1
    return 0


def cmd_perturb(args) -> int:
    run = cfg.load_run_config(args.config)
    _apply_overrides(run, args)
    if run.graph_path is None:
        raise GraphScatterError("config has no graph section")
    if not Path(run.graph_path).exists():
        raise FileNotFoundError(run.graph_path)
    adjacency, weights = read_edge_list(run.graph_path)
    extras = run.extras.get("perturb", {})
    trials = int(extras.get("trials", 20))
    delta_max = float(extras.get("delta_max", 0.1))
    spec = cfg.architecture_spec(run.architecture, depth_override=args.depth,
                                 preset_override=args.preset)
    arch = cfg.build_architecture(spec, adjacency, weights)
    space = build_space(adjacency.shape[0], weights)
    rng = np.random.default_rng(run.seed)

    worst_margin = float("inf")
    worst_ratio = 0.0
    violations = 0
    reports = []
    print("trial,delta,empirical,bound,margin")
    for t in range(trials):
        adj_t = perturbed_adjacency(adjacency, rng, delta_max)
        arch_t = cfg.build_architecture(spec, adj_t, weights)
        v = rng.standard_normal(space.size) + 1j * rng.standard_normal(space.size)
        report = operator_perturbation_experiment(arch, arch_t, [Signal(space, v)])
        reports.append(report.to_dict())
        worst_margin = min(worst_margin, report.margin)
        worst_ratio = max(worst_ratio, report.empirical_max_ratio)
        violations += report.violations
        sample = report.samples[0]
        print(f"{t},{_fmt(report.delta)},{_fmt(sample.empirical)},"
              f"{_fmt(sample.bound)},{_fmt(sample.margin)}")
    print(f"theoretical_bound = {_fmt(reports[-1]['constant']) if reports else 'nan'}")
    print(f"empirical_max_ratio = {_fmt(worst_ratio)}")
    print(f"margin = {_fmt(worst_margin)}")
    print(f"violations = {violations}")
    if run.out:
        write_feature_json(run.out, {"trials": reports})
        _progress(f"wrote JSON report to {run.out}")
    return 1 if violations else 0


def perturbed_adjacency(adjacency: np.ndarray, rng, delta_max: float) -> np.ndarray:
    """Rescale existing edge weights by small random factors."""
    n = adjacency.shape[0]
    noise = rng.uniform(-1.0, 1.0, size=(n, n)) * delta_max / max(1, n)
    noise = np.triu(noise, 1)
    noise = noise + noise.T
    out = adjacency * (1.0 + noise)
    return np.maximum(out, 0.0)


def cmd_fit(args) -> int:
    run = cfg.load_run_config(args.config)
    _apply_overrides(run, args)
    extras = run.extras.get("fit", {})
    p = int(extras.get("p", 5))
    if run.molecules_path is not None:
        if not Path(run.molecules_path).exists():
            raise FileNotFoundError(run.molecules_path)
        molecules = load_molecules(run.molecules_path)
        targets_map = load_targets(run.targets_path) if run.targets_path else {}
        targets = np.array([targets_map[m.id] for m in molecules])
    else:
        count = int(extras.get("synthetic", 200))
        molecules, targets = synthetic_molecules(count, seed=run.seed)
        _progress(f"generated {count} synthetic molecules")
    spec = cfg.architecture_spec(run.architecture, depth_override=args.depth,
                                 preset_override=args.preset or "architecture_II")
    _progress("computing composite node + edge scattering features")
    features = molecule_feature_matrix(molecules, spec, spec, p=p,
                                       normalize_first=False)
    folds = int(extras.get("folds", 10))
    report = cross_validate(features, targets, task="regression", folds=folds,
                            seed=run.seed)
    print(report.summary())
    gamma, ridge = report.chosen[int(np.argmin(report.fold_metrics))]
    model = fit_krr(features, targets, gamma, ridge)
    if run.out:
        out = Path(run.out)
        out.mkdir(parents=True, exist_ok=True)
        lines = ["fold,metric"]
        lines.extend(f"{i},{_fmt(m)}" for i, m in enumerate(report.fold_metrics))
        (out / "metrics.csv").write_text("\n".join(lines) + "\n")
        (out / "model.json").write_text(json.dumps(model_dump(model)) + "\n")
        _progress(f"wrote metrics and model dump to {out}")
    return 0


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def _map_jobs(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _apply_overrides(run: cfg.RunConfig, args):
    if getattr(args, "seed", None) is not None:
        run.seed = args.seed
    if getattr(args, "jobs", None) is not None:
        run.jobs = args.jobs
    if getattr(args, "out", None) is not None:
        run.out = args.out


def _add_common(parser):
    parser.add_argument("--config", help="TOML run configuration")
    parser.add_argument("--preset", choices=("architecture_I", "architecture_II"))
    parser.add_argument("--depth", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphscatter",
        description="Graph scattering transforms with certified stability checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-frame", help="frame constants of a filter bank")
    p.add_argument("--config")
    p.add_argument("--preset", choices=("architecture_I", "architecture_II"))
    p.add_argument("--interval", nargs=2, type=float, default=(0.0, 1.0))
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(fn=cmd_validate_frame)

    for name, fn, help_text in (
        ("scatter", cmd_scatter, "per-graph scattering feature files"),
        ("aggregate", cmd_aggregate, "graph-level aggregated feature CSV"),
        ("energy", cmd_energy, "layer energy curve against the decay bound"),
        ("perturb", cmd_perturb, "operator perturbation stability report"),
        ("fit", cmd_fit, "kernel ridge regression over scattering features"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "validate-frame" and not args.config:
        print("error: --config is required", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: dataset not found: {exc}", file=sys.stderr)
        return 2
    except GraphScatterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
