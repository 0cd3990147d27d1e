"""File formats: edge lists, multi-graph datasets, molecules, feature dumps.

Single-graph edge lists are UTF-8 text with one ``i j w`` edge per line
(0-based vertex ids, real weight), ``#`` comment lines, an optional
``weights: w0 w1 ...`` header carrying vertex weights, and no duplicate
edges.  Multi-graph datasets separate records with ``graph <id> [label]``
header lines followed by ``i j`` pairs of unit weight.  Molecules are
``Z x y z`` lines per atom with blank lines between molecules; targets are a
``molecule_id,energy_kcal_per_mol`` CSV.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DuplicateEdge, ParseError


@dataclass(frozen=True, eq=False)
class GraphRecord:
    id: str
    adjacency: np.ndarray
    label: float | int | None = None


@dataclass(frozen=True, eq=False)
class Molecule:
    id: str
    charges: np.ndarray
    positions: np.ndarray  # (n_atoms, 3)


def _numeric(token: str, line_no: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad {what} token {token!r}", line_no) from None


def _int_token(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad {what} token {token!r}", line_no) from None


def read_edge_list(source) -> tuple[np.ndarray, np.ndarray | None]:
    """Parse a single-graph edge list into (adjacency, vertex_weights).

    ``source`` is a path or raw text.  Vertex count is inferred from the
    largest id seen, or from the optional weights header.
    """
    if isinstance(source, Path):
        text = source.read_text()
    elif isinstance(source, str) and "\n" not in source and len(source) < 4096 \
            and Path(source).exists():
        text = Path(source).read_text()
    else:
        text = str(source)
    weights = None
    edges: dict[tuple[int, int], float] = {}
    max_id = -1
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("weights:"):
            tokens = line[len("weights:"):].split()
            weights = np.array([_numeric(t, line_no, "weight") for t in tokens])
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"expected 'i j w', got {line!r}", line_no)
        i = _int_token(tokens[0], line_no, "vertex")
        j = _int_token(tokens[1], line_no, "vertex")
        w = _numeric(tokens[2], line_no, "weight")
        if i < 0 or j < 0:
            raise ParseError("vertex ids must be non-negative", line_no)
        key = (min(i, j), max(i, j))
        if key in edges:
            raise DuplicateEdge(f"edge {key} appears twice (line {line_no})")
        edges[key] = w
        max_id = max(max_id, i, j)
    n = max_id + 1
    if weights is not None:
        n = max(n, weights.size)
    if n <= 0:
        raise ParseError("edge list defines no vertices", None)
    adjacency = np.zeros((n, n))
    for (i, j), w in edges.items():
        adjacency[i, j] = adjacency[j, i] = w
    return adjacency, weights


def load_graph_dataset(path, fmt: str = "edge_list_multi") -> list[GraphRecord]:
    """Load a dataset of graphs, ordered deterministically by record id."""
    if fmt == "edge_list_multi":
        records = _load_edge_list_multi(Path(path))
    elif fmt == "adjacency_csv":
        records = _load_adjacency_csv(Path(path))
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")
    return sorted(records, key=lambda r: r.id)


def _parse_label(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def _load_edge_list_multi(path: Path) -> list[GraphRecord]:
    records = []
    current_id = None
    current_label = None
    current_edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    max_id = -1

    def flush():
        nonlocal current_id, current_label, current_edges, seen, max_id
        if current_id is None:
            return
        n = max_id + 1
        adjacency = np.zeros((max(n, 1), max(n, 1)))
        for i, j in current_edges:
            adjacency[i, j] = adjacency[j, i] = 1.0
        records.append(GraphRecord(current_id, adjacency, current_label))
        current_id, current_label = None, None
        current_edges, seen, max_id = [], set(), -1

    for line_no, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "graph":
            if len(tokens) not in (2, 3):
                raise ParseError("expected 'graph <id> [label]'", line_no)
            flush()
            current_id = tokens[1]
            current_label = _parse_label(tokens[2]) if len(tokens) == 3 else None
            continue
        if current_id is None:
            raise ParseError("edge line before any 'graph' header", line_no)
        if len(tokens) != 2:
            raise ParseError(f"expected 'i j', got {line!r}", line_no)
        i = _int_token(tokens[0], line_no, "vertex")
        j = _int_token(tokens[1], line_no, "vertex")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"edge {key} appears twice (line {line_no})")
        seen.add(key)
        current_edges.append((i, j))
        max_id = max(max_id, i, j)
    flush()
    return records


def _load_adjacency_csv(path: Path) -> list[GraphRecord]:
    records = []
    for file in sorted(path.glob("*.csv")):
        try:
            matrix = np.loadtxt(file, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise ParseError(f"{file.name}: {exc}", None) from None
        records.append(GraphRecord(file.stem, matrix, None))
    return records


# ---------------------------------------------------------------------------
# molecules
# ---------------------------------------------------------------------------

def load_molecules(path) -> list[Molecule]:
    """Parse blank-line separated ``Z x y z`` molecule records.

    Molecule ids are the 0-based record index as a string.
    """
    molecules = []
    atoms: list[list[float]] = []

    def flush():
        nonlocal atoms
        if atoms:
            arr = np.array(atoms)
            molecules.append(Molecule(str(len(molecules)), arr[:, 0], arr[:, 1:]))
            atoms = []

    for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush()
            continue
        tokens = line.split()
        if len(tokens) != 4:
            raise ParseError(f"expected 'Z x y z', got {line!r}", line_no)
        atoms.append([_numeric(t, line_no, "atom field") for t in tokens])
    flush()
    return molecules


def load_targets(path) -> dict[str, float]:
    """Read a ``molecule_id,energy_kcal_per_mol`` CSV into a dict."""
    out: dict[str, float] = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ParseError(f"expected 'id,value', got {line!r}", line_no)
        if line_no == 1 and parts[1] and not _is_number(parts[1]):
            continue  # header row
        out[parts[0]] = _numeric(parts[1], line_no, "target")
    return out


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# feature dumps
# ---------------------------------------------------------------------------

def write_feature_csv(path, rows, header: str):
    """Write pre-formatted feature rows under the given header."""
    lines = [header]
    lines.extend(rows)
    Path(path).write_text("\n".join(lines) + "\n")


def write_feature_json(path, payload: dict):
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
