"""TOML configuration surface for banks, architectures, and CLI runs.

A filter bank is either a preset name or explicit kernel tables::

    preset = "architecture_II"
    # or
    filters = [
        {kind = "sin_scaled", scale = 1.5707963267948966, amplitude = 1.0},
    ]
    output = {kind = "identity_fn"}

An architecture is a depth plus either a single ``[layer]`` table (the
``repeat`` shorthand, replicated depth times) or a ``[[layers]]`` array::

    depth = 4
    [layer]
    nonlinearity = "absolute"
    connecting = "identity"          # or a path to a matrix CSV
    operator = "rescaled_laplacian"  # laplacian | normalized_laplacian | CSV path
    [layer.bank]
    preset = "architecture_I"

The operator rule is instantiated per input graph by
:func:`build_architecture`.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .core import ShiftOperator, build_space, laplacian, rescaled_laplacian
from .edges import EdgeShiftOperator
from .kernels import PRESET_BANKS, FilterBank, FilterKernel
from .scattering import (
    IDENTITY_CONNECTOR,
    ConnectingOperator,
    LayerModule,
    Nonlinearity,
    ScatteringArchitecture,
)

OPERATOR_RULES = ("laplacian", "normalized_laplacian", "rescaled_laplacian")


def load_toml(source) -> dict:
    """Parse a TOML file path or already-parsed mapping."""
    if isinstance(source, dict):
        return source
    with open(source, "rb") as fh:
        return _toml.load(fh)


# ---------------------------------------------------------------------------
# banks
# ---------------------------------------------------------------------------

def bank_from_config(config) -> FilterBank:
    data = load_toml(config)
    preset = data.get("preset")
    if preset is not None:
        if preset not in PRESET_BANKS:
            raise ValueError(f"unknown preset {preset!r}")
        return PRESET_BANKS[preset]()
    if "filters" not in data or "output" not in data:
        raise ValueError("bank config needs 'preset' or 'filters' plus 'output'")
    filters = tuple(_kernel_from_table(t) for t in data["filters"])
    return FilterBank(_kernel_from_table(data["output"]), filters)


def _kernel_from_table(table: dict) -> FilterKernel:
    kwargs = dict(table)
    kind = kwargs.pop("kind")
    if "coeffs" in kwargs:
        kwargs["coeffs"] = tuple(kwargs["coeffs"])
    if "samples" in kwargs:
        kwargs["samples"] = tuple((complex(p), complex(v)) for p, v in kwargs["samples"])
    return FilterKernel(kind, **kwargs)


# ---------------------------------------------------------------------------
# architectures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LayerSpec:
    nonlinearity: str = "absolute"
    connecting: str = "identity"
    operator: str = "rescaled_laplacian"
    bank: FilterBank = None  # type: ignore[assignment]


@dataclass(frozen=True)
class ArchitectureSpec:
    depth: int
    layers: tuple


def architecture_spec(config, depth_override: int | None = None,
                      preset_override: str | None = None) -> ArchitectureSpec:
    data = dict(load_toml(config))
    if preset_override is not None:
        data = {"depth": data.get("depth", 4),
                "layer": {"bank": {"preset": preset_override}}}
    depth = int(depth_override if depth_override is not None else data.get("depth", 4))
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if "layers" in data:
        tables = list(data["layers"])
        if depth_override is not None:
            tables = (tables * depth)[:depth] if tables else []
        if len(tables) != depth:
            raise ValueError(f"{len(tables)} layer tables for depth {depth}")
    else:
        tables = [data.get("layer", {})] * depth
    layers = tuple(_layer_spec_from_table(t) for t in tables)
    return ArchitectureSpec(depth, layers)


def _layer_spec_from_table(table: dict) -> LayerSpec:
    bank_cfg = table.get("bank", {"preset": "architecture_I"})
    return LayerSpec(
        nonlinearity=table.get("nonlinearity", "absolute"),
        connecting=table.get("connecting", "identity"),
        operator=table.get("operator", "rescaled_laplacian"),
        bank=bank_from_config(bank_cfg),
    )


def _operator_from_rule(rule: str, adjacency: np.ndarray, space) -> ShiftOperator:
    if rule == "rescaled_laplacian":
        return rescaled_laplacian(adjacency, space)
    if rule == "laplacian":
        return laplacian(adjacency, space)
    if rule == "normalized_laplacian":
        return laplacian(adjacency, space, normalized=True)
    matrix = np.loadtxt(Path(rule), delimiter=",", ndmin=2)
    op_space = build_space(matrix.shape[0])
    return ShiftOperator(op_space, matrix)


def build_architecture(spec: ArchitectureSpec, adjacency, weights=None,
                       edge_level: bool = False) -> ScatteringArchitecture:
    """Instantiate an architecture spec on one graph.

    Operator rules are applied to the given adjacency; with ``edge_level``
    the resulting shift operators act on edge signals by left multiplication.
    """
    adjacency = np.asarray(adjacency, dtype=float)
    space = build_space(adjacency.shape[0], weights)
    layers = []
    for ls in spec.layers:
        shift = _operator_from_rule(ls.operator, adjacency, space)
        if edge_level:
            shift = EdgeShiftOperator(shift)
        if ls.connecting == "identity":
            connector = IDENTITY_CONNECTOR
        else:
            matrix = np.loadtxt(Path(ls.connecting), delimiter=",", ndmin=2)
            connector = ConnectingOperator("matrix", matrix)
        layers.append(LayerModule(Nonlinearity(ls.nonlinearity), ls.bank,
                                  connector, shift))
    return ScatteringArchitecture(tuple(layers))


# ---------------------------------------------------------------------------
# CLI run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    dataset_path: str | None = None
    dataset_format: str = "edge_list_multi"
    architecture: dict = field(default_factory=dict)
    aggregation_mode: str = "pnorm"
    aggregation_p: int = 5
    normalize_first: bool = True
    descriptors: tuple | None = None
    graph_path: str | None = None
    targets_path: str | None = None
    molecules_path: str | None = None
    extras: dict = field(default_factory=dict)


def load_run_config(path) -> RunConfig:
    data = load_toml(path)
    cfg = RunConfig()
    cfg.seed = int(data.get("seed", 0))
    cfg.jobs = int(data.get("jobs", 1))
    cfg.out = data.get("out")
    ds = data.get("dataset", {})
    cfg.dataset_path = ds.get("path")
    cfg.dataset_format = ds.get("format", "edge_list_multi")
    arch = data.get("architecture", {})
    if "path" in arch:
        arch = load_toml(arch["path"])
    cfg.architecture = arch
    agg = data.get("aggregation", {})
    cfg.aggregation_mode = agg.get("mode", "pnorm")
    cfg.aggregation_p = int(agg.get("p", 5))
    cfg.normalize_first = bool(agg.get("normalize_first", True))
    sig = data.get("signals", {})
    if "descriptors" in sig:
        cfg.descriptors = tuple(sig["descriptors"])
    graph = data.get("graph", {})
    cfg.graph_path = graph.get("path")
    cfg.targets_path = data.get("targets", {}).get("path")
    cfg.molecules_path = data.get("molecules", {}).get("path")
    cfg.extras = {k: v for k, v in data.items()
                  if k not in ("seed", "jobs", "out", "dataset", "architecture",
                               "aggregation", "signals", "graph", "targets",
                               "molecules")}
    return cfg
