"""Edge-level (2-tensor) signals and scattering over l2(E).

Edge signals are |G| x |G| complex matrices with inner product
<F, H> = sum_ij conj(F_ij) H_ij mu_ij.  At unit edge weights a self-adjoint
node operator acts on l2(E) by left matrix multiplication and stays
self-adjoint, so the whole scattering machinery applies unchanged: an
:class:`EdgeShiftOperator` exposes the same ``space`` / ``filter_values``
surface as a node shift operator and plugs straight into
:func:`graphscatter.scattering.scatter`.

Higher tensor orders follow the same recipe: a k-tensor in C^{|G|^k} is
filtered by applying the node functional-calculus matrix along the first
axis (flatten the remaining k-1 axes into columns, left multiply, reshape).
Only k in {1, 2} ships here; the flattening hook is ``filter_values`` on a
2-d array, which already treats every column independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ShiftOperator
from .errors import CoincidentAtoms, SizeMismatch, SpaceMismatch, WeightBelowOne
from .kernels import FilterKernel
from .scattering import ScatteringArchitecture, scatter


@dataclass(frozen=True, eq=False)
class EdgeSignalSpace:
    """Edge set of a |G|-vertex graph with weights mu_ij >= 1."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.size == 0:
            raise SizeMismatch("edge weights must form a square matrix")
        if np.any(w <= 0):
            raise WeightBelowOne("edge weights must be strictly positive")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def node_count(self) -> int:
        return int(self.weights.shape[0])

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def mu_total(self) -> float:
        """mu_E = sum_ij mu_ij."""
        return float(self.weights.sum())

    @property
    def weights_flat(self) -> np.ndarray:
        return self.weights.ravel()

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return complex(np.sum(np.conj(f) * g * self.weights))

    def norm(self, values: np.ndarray) -> float:
        contrib = np.sort((np.abs(values) ** 2 * self.weights).ravel())
        return float(np.sqrt(contrib.sum()))

    def compatible(self, other) -> bool:
        return self is other or (
            isinstance(other, EdgeSignalSpace)
            and np.array_equal(self.weights, other.weights)
        )


def build_edge_space(node_count: int, weights=None) -> EdgeSignalSpace:
    if weights is None:
        weights = np.ones((node_count, node_count))
    return EdgeSignalSpace(np.asarray(weights, dtype=float))


@dataclass(frozen=True, eq=False)
class EdgeSignal:
    """Complex |G| x |G| edge signal."""

    space: EdgeSignalSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.space.node_count
        if m.shape != (n, n):
            raise SizeMismatch(f"edge signal shape {m.shape}, expected ({n}, {n})")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def values(self) -> np.ndarray:
        return self.matrix

    def norm(self) -> float:
        return self.space.norm(self.matrix)


class EdgeShiftOperator:
    """A node shift operator acting on edge signals by left multiplication.

    Requires unit edge weights, under which self-adjointness on the node
    space transfers verbatim to l2(E).
    """

    def __init__(self, node_op: ShiftOperator, edge_space: EdgeSignalSpace | None = None):
        n = node_op.size
        if edge_space is None:
            edge_space = build_edge_space(n)
        if edge_space.node_count != n:
            raise SizeMismatch("edge space does not match the node operator")
        if not np.allclose(edge_space.weights, 1.0):
            raise SpaceMismatch(
                "edge-level filtering is defined for unit edge weights"
            )
        self.node_op = node_op
        self.space = edge_space
        self.kind = node_op.kind

    @property
    def matrix(self) -> np.ndarray:
        """The node-level matrix that left-multiplies edge signals."""
        return self.node_op.matrix

    @property
    def size(self) -> int:
        return self.space.size

    def decomposition(self):
        return self.node_op.decomposition()

    @property
    def spectrum(self) -> np.ndarray:
        return self.node_op.spectrum

    def operator_norm(self) -> float:
        return self.node_op.operator_norm()

    def filter_values(self, kernel: FilterKernel, values: np.ndarray) -> np.ndarray:
        return self.node_op.filter_values(kernel, values)


def edge_apply_filter(kernel: FilterKernel, op: EdgeShiftOperator, f: EdgeSignal) -> EdgeSignal:
    """g(Delta) F by left multiplication; equivalently columnwise filtering."""
    if not op.space.compatible(f.space):
        raise SpaceMismatch("edge signal does not live on the operator's space")
    return EdgeSignal(op.space, op.filter_values(kernel, f.matrix))


def edge_scatter(arch: ScatteringArchitecture, f: EdgeSignal):
    """Scattering transform over edge signals; same tree layout as nodes."""
    return scatter(arch, f)


# ---------------------------------------------------------------------------
# molecular input
# ---------------------------------------------------------------------------

def coulomb_matrix(charges, positions, divisor: float = 10.0):
    """Coulomb matrix of a molecule: edge signal plus adjacency.

    Off-diagonal entries are Z_i Z_j / |R_i - R_j| and diagonal entries
    0.5 Z_i^2.4.  Returns ``(edge_signal_matrix, adjacency)`` where the edge
    signal is the full matrix divided by ``divisor`` and the adjacency is the
    undivided off-diagonal part (feed it to a Laplacian constructor).

    ``positions`` is an (n_atoms, 3) array; a (3, n_atoms) array is accepted
    and transposed.
    """
    z = np.asarray(charges, dtype=float)
    r = np.asarray(positions, dtype=float)
    if r.ndim != 2:
        raise SizeMismatch("positions must be a 2-d array")
    if r.shape[0] == 3 and r.shape[1] != 3:
        r = r.T
    if r.shape != (z.size, 3):
        raise SizeMismatch(
            f"positions shape {r.shape} does not match {z.size} charges"
        )
    if np.any(z <= 0):
        raise WeightBelowOne("charges must be positive")
    n = z.size
    diff = r[:, None, :] - r[None, :, :]
    dist = np.sqrt(np.sum(diff**2, axis=-1))
    off = ~np.eye(n, dtype=bool)
    if n > 1 and dist[off].min() <= 1e-12:
        raise CoincidentAtoms("two atoms share a position")
    c = np.zeros((n, n))
    c[off] = (z[:, None] * z[None, :])[off] / dist[off]
    np.fill_diagonal(c, 0.5 * z**2.4)
    adjacency = c.copy()
    np.fill_diagonal(adjacency, 0.0)
    return c / divisor, adjacency
