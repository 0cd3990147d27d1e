"""Weighted graph signal spaces, shift operators, and spectral decompositions.

A signal space on a vertex set of size n carries per-vertex weights mu_i >= 1
and the inner product  <f, g> = sum_i conj(f_i) g_i mu_i.  Every operator-level
quantity in this package (adjoints, Frobenius and operator norms, normality,
eigenvector orthonormality) is taken with respect to that inner product.  The
similarity transform  M -> diag(mu)^{1/2} M diag(mu)^{-1/2}  turns all of them
into their plain Euclidean counterparts, which is how they are computed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    AsymmetricAdjacency,
    DegenerateGraph,
    IsolatedVertexInNormalized,
    NegativeWeight,
    NonzeroDiagonal,
    NormalizedNeedsUnitWeights,
    NotNormal,
    SizeMismatch,
    SpaceMismatch,
    WeightBelowOne,
)

#: Relative tolerance for the normality defect ||DD* - D*D||_F <= tol ||D||_F^2.
NORMALITY_TOLERANCE = 1e-10

#: Absolute tolerance (on unit-scale matrices) for spectral reconstruction,
#: Gram defects, and spectrum-range checks.
EIGEN_TOLERANCE = 1e-8

#: An eigenvalue counts as zero when |lambda| <= this factor times max|lambda|.
ZERO_EIGENVALUE_RTOL = 1e-9


# ---------------------------------------------------------------------------
# spaces and signals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GraphSignalSpace:
    """Vertex set with weights mu_i defining the weighted l2 inner product."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise SizeMismatch("weights must be a non-empty 1-d vector")
        if np.any(w <= 0):
            raise WeightBelowOne("vertex weights must be strictly positive")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def mu_total(self) -> float:
        """Total weight mu_G = sum_i mu_i."""
        return float(self.weights.sum())

    @property
    def weights_flat(self) -> np.ndarray:
        return self.weights

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        """<f, g> = sum conj(f_i) g_i mu_i, conjugate linear in f."""
        return complex(np.sum(np.conj(f) * g * self.weights))

    def norm(self, values: np.ndarray) -> float:
        contrib = np.sort((np.abs(values) ** 2 * self.weights).ravel())
        return float(np.sqrt(contrib.sum()))

    def compatible(self, other: "GraphSignalSpace") -> bool:
        return self is other or (
            self.size == other.size and np.array_equal(self.weights, other.weights)
        )


def build_space(size: int, weights=None, *, min_weight: float = 1.0) -> GraphSignalSpace:
    """Create a signal space, defaulting every weight to 1.

    ``min_weight`` is an escape hatch for sub-unit weights; the default keeps
    the standing assumption mu_i >= 1.
    """
    if size < 1:
        raise SizeMismatch("space size must be a positive integer")
    if weights is None:
        w = np.ones(size)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (size,):
            raise SizeMismatch(f"expected {size} weights, got shape {w.shape}")
        if np.any(w < min_weight - 1e-15):
            raise WeightBelowOne(f"vertex weights must be >= {min_weight}")
    return GraphSignalSpace(w)


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex node signal living on a :class:`GraphSignalSpace`."""

    space: GraphSignalSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.space.size,):
            raise SizeMismatch(
                f"signal of length {v.shape} on a space of size {self.space.size}"
            )
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return self.space.norm(self.values)


def inner_product(f: Signal, g: Signal) -> complex:
    """Weighted inner product of two signals on the same space."""
    if not f.space.compatible(g.space):
        raise SpaceMismatch("signals live on different spaces")
    return f.space.inner(f.values, g.values)


# ---------------------------------------------------------------------------
# weighted matrix helpers
# ---------------------------------------------------------------------------

def _sym_transform(matrix: np.ndarray, space: GraphSignalSpace) -> np.ndarray:
    """diag(mu)^{1/2} M diag(mu)^{-1/2}; Euclidean-izes the weighted geometry."""
    s = np.sqrt(space.weights)
    return (s[:, None] * matrix) / s[None, :]


def weighted_adjoint(matrix: np.ndarray, space_in: GraphSignalSpace,
                     space_out: GraphSignalSpace) -> np.ndarray:
    """Adjoint of M: space_in -> space_out w.r.t. the weighted inner products."""
    return (matrix.conj().T * space_out.weights[None, :]) / space_in.weights[:, None]


def weighted_operator_norm(matrix: np.ndarray, space_in: GraphSignalSpace,
                           space_out: GraphSignalSpace) -> float:
    """Operator norm of M: space_in -> space_out in the weighted norms."""
    m = (np.sqrt(space_out.weights)[:, None] * matrix) / np.sqrt(space_in.weights)[None, :]
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, ord=2))


def weighted_frobenius_norm(matrix: np.ndarray, space: GraphSignalSpace) -> float:
    """Frobenius norm Tr(M* M)^{1/2} with the weighted adjoint."""
    return float(np.linalg.norm(_sym_transform(matrix, space), ord="fro"))


# ---------------------------------------------------------------------------
# spectral decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a normal operator, orthonormal in the weighted sense.

    ``eigenvectors`` columns phi_i satisfy Phi^dagger Phi = I where the dagger
    is the weighted adjoint; eigenvalues are sorted ascending by (Re, Im), and
    each column's first significant entry is rotated to the positive real axis.
    Degenerate eigenspaces carry no canonical basis beyond that.
    """

    space: GraphSignalSpace
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    reconstruction_defect: float = 0.0
    gram_defect: float = 0.0

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        """Analysis map: entry i is <phi_i, v> (columns for 2-d input)."""
        if values.ndim == 1:
            return self.eigenvectors.conj().T @ (self.space.weights * values)
        return self.eigenvectors.conj().T @ (self.space.weights[:, None] * values)

    def apply_function(self, fvals: np.ndarray, values: np.ndarray) -> np.ndarray:
        """g(Delta) v = sum_i g(lambda_i) <phi_i, v> phi_i.

        2-d input is filtered columnwise, i.e. left multiplication by g(Delta).
        """
        coeffs = self.coefficients(values)
        shaped = fvals.reshape((-1,) + (1,) * (values.ndim - 1))
        return self.eigenvectors @ (shaped * coeffs)

    def function_matrix(self, fvals: np.ndarray) -> np.ndarray:
        """Dense matrix of g(Delta) = Phi diag(g(lambda)) Phi^dagger."""
        analysis = self.eigenvectors.conj().T * self.space.weights[None, :]
        return self.eigenvectors @ (fvals[:, None] * analysis)

    @property
    def zero_tolerance(self) -> float:
        """Scale below which an eigenvalue counts as zero."""
        top = float(np.max(np.abs(self.eigenvalues))) if self.eigenvalues.size else 0.0
        return ZERO_EIGENVALUE_RTOL * max(top, 1e-30)


def _spectral_order(eigvals: np.ndarray) -> np.ndarray:
    """Ascending (Re, Im) order, robust to round-off in the primary key.

    Real parts within a relative tolerance of each other form one cluster and
    are ordered by imaginary part, so noise like 1e-17 cannot flip the
    ordering of genuinely equal real parts.
    """
    scale = float(np.abs(eigvals).max()) if eigvals.size else 0.0
    tol = 1e-9 * max(scale, 1e-30)
    idx = np.argsort(eigvals.real, kind="stable")
    out = []
    i = 0
    while i < idx.size:
        j = i
        while j + 1 < idx.size and eigvals.real[idx[j + 1]] - eigvals.real[idx[i]] <= tol:
            j += 1
        cluster = idx[i:j + 1]
        cluster = cluster[np.argsort(eigvals.imag[cluster], kind="stable")]
        out.extend(cluster.tolist())
        i = j + 1
    return np.asarray(out, dtype=int)


def _fix_eigenvector_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant entry is positive real."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12 * max(1.0, np.abs(col).max()))
        if idx.size:
            pivot = col[idx[0]]
            out[:, j] = col * (np.conj(pivot) / abs(pivot))
    return out


# ---------------------------------------------------------------------------
# shift operators
# ---------------------------------------------------------------------------

class ShiftOperator:
    """A normal operator on a weighted graph signal space.

    The spectral decomposition is computed once on demand and cached under a
    lock, so a ShiftOperator can be shared read-only across threads.  The
    matrix is validated for normality (w.r.t. the weighted inner product) at
    construction time.
    """

    def __init__(self, space: GraphSignalSpace, matrix, kind: str = "custom", *,
                 normality_tolerance: float = NORMALITY_TOLERANCE):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (space.size, space.size):
            raise SizeMismatch(
                f"operator of shape {m.shape} on a space of size {space.size}"
            )
        m = m.copy()
        m.flags.writeable = False
        self.space = space
        self.matrix = m
        self.kind = kind
        self._decomposition: SpectralDecomposition | None = None
        self._lock = threading.Lock()

        adj = weighted_adjoint(m, space, space)
        scale = weighted_frobenius_norm(m, space)
        defect = weighted_frobenius_norm(m @ adj - adj @ m, space)
        self.normality_defect = defect
        if defect > normality_tolerance * max(scale**2, 1e-30):
            raise NotNormal(
                f"normality defect {defect:.3e} exceeds tolerance on scale {scale:.3e}"
            )
        # Hermitian in the weighted sense iff diag(mu) M is Hermitian plain.
        dm = space.weights[:, None] * m
        self.self_adjoint = bool(
            np.linalg.norm(dm - dm.conj().T) <= 1e-12 * max(1.0, np.linalg.norm(dm))
        )

    @property
    def size(self) -> int:
        return self.space.size

    def decomposition(self) -> SpectralDecomposition:
        dec = self._decomposition
        if dec is None:
            with self._lock:
                dec = self._decomposition
                if dec is None:
                    dec = self._compute_decomposition()
                    self._decomposition = dec
        return dec

    @property
    def spectrum(self) -> np.ndarray:
        return self.decomposition().eigenvalues

    def operator_norm(self) -> float:
        return weighted_operator_norm(self.matrix, self.space, self.space)

    def filter_values(self, kernel, values: np.ndarray) -> np.ndarray:
        """Apply a scalar kernel through the functional calculus.

        Discontinuous-at-zero kernels see the decomposition's zero tolerance,
        so the numerically perturbed lambda = 0 of a Laplacian still counts.
        """
        from .kernels import kernel_values  # local import, no cycle at module load

        dec = self.decomposition()
        fvals = kernel_values(kernel, dec.eigenvalues, zero_tol=dec.zero_tolerance)
        return dec.apply_function(fvals, values)

    def kernel_matrix(self, kernel) -> np.ndarray:
        from .kernels import kernel_values

        dec = self.decomposition()
        fvals = kernel_values(kernel, dec.eigenvalues, zero_tol=dec.zero_tolerance)
        return dec.function_matrix(fvals)

    def absolute_matrix(self) -> np.ndarray:
        """|Delta| through the functional calculus."""
        dec = self.decomposition()
        return dec.function_matrix(np.abs(dec.eigenvalues))

    def _compute_decomposition(self) -> SpectralDecomposition:
        sym = _sym_transform(self.matrix, self.space)
        if self.self_adjoint:
            herm = 0.5 * (sym + sym.conj().T)
            eigvals, vecs = np.linalg.eigh(herm)
            eigvals = eigvals.astype(complex)
        else:
            # Schur of a normal matrix is diagonal up to round-off; keep the
            # diagonal and discard the numerically tiny strict upper triangle.
            t, q = scipy.linalg.schur(sym, output="complex")
            eigvals = np.diag(t).copy()
            vecs = q
        order = _spectral_order(eigvals)
        eigvals = eigvals[order]
        vecs = vecs[:, order]
        phi = _fix_eigenvector_phases(vecs / np.sqrt(self.space.weights)[:, None])

        analysis = phi.conj().T * self.space.weights[None, :]
        gram_defect = float(np.linalg.norm(analysis @ phi - np.eye(self.size)))
        recon = phi @ (eigvals[:, None] * analysis)
        recon_defect = weighted_frobenius_norm(self.matrix - recon, self.space)
        scale = max(1.0, weighted_frobenius_norm(self.matrix, self.space))
        if recon_defect > EIGEN_TOLERANCE * scale or gram_defect > EIGEN_TOLERANCE * scale:
            raise NotNormal(
                f"decomposition defects (recon {recon_defect:.3e}, gram {gram_defect:.3e}) "
                "exceed tolerance; operator is not numerically normal"
            )
        return SpectralDecomposition(self.space, eigvals, phi, recon_defect, gram_defect)

    def _with_cached(self, matrix: np.ndarray, kind: str,
                     eigvals: np.ndarray, phi: np.ndarray) -> "ShiftOperator":
        op = ShiftOperator(self.space, matrix, kind)
        op._decomposition = SpectralDecomposition(self.space, eigvals, phi)
        return op


def decompose(op: ShiftOperator) -> SpectralDecomposition:
    """Spectral decomposition of a normal shift operator (cached)."""
    return op.decomposition()


def frobenius_distance(a: ShiftOperator, b: ShiftOperator) -> float:
    """||a - b||_F with the weighted adjoint; dominates the operator norm."""
    if not a.space.compatible(b.space):
        raise SpaceMismatch("operators live on different spaces")
    return weighted_frobenius_norm(a.matrix - b.matrix, a.space)


# ---------------------------------------------------------------------------
# Laplacian constructors
# ---------------------------------------------------------------------------

def _validate_adjacency(adjacency: np.ndarray, size: int) -> np.ndarray:
    w = np.asarray(adjacency, dtype=float)
    if w.shape != (size, size):
        raise SizeMismatch(f"adjacency shape {w.shape} does not match size {size}")
    scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
    if np.abs(w - w.T).max() > 1e-12 * scale:
        raise AsymmetricAdjacency("adjacency must be symmetric")
    if w.min() < 0:
        raise NegativeWeight("adjacency entries must be non-negative")
    if np.abs(np.diag(w)).max() > 1e-12 * scale:
        raise NonzeroDiagonal("adjacency must have a zero diagonal")
    return w


def laplacian(adjacency, space: GraphSignalSpace, normalized: bool = False) -> ShiftOperator:
    """Graph Laplacian as a shift operator on the given space.

    The unnormalized kind is the weighted form
    (Delta f)_i = (1/mu_i) sum_j W_ij (f_i - f_j), which reduces to D - W at
    unit weights and is self-adjoint in the weighted inner product.  The
    normalized kind 1 - D^{-1/2} W D^{-1/2} is restricted to unit weights.
    """
    w = _validate_adjacency(adjacency, space.size)
    degrees = w.sum(axis=1)
    if normalized:
        if not np.allclose(space.weights, 1.0):
            raise NormalizedNeedsUnitWeights(
                "normalized Laplacian requires unit vertex weights"
            )
        if np.any(degrees <= 0):
            raise IsolatedVertexInNormalized("zero-degree vertex")
        dinv = 1.0 / np.sqrt(degrees)
        mat = np.eye(space.size) - dinv[:, None] * w * dinv[None, :]
        return ShiftOperator(space, mat, kind="normalized_laplacian")
    mat = (np.diag(degrees) - w) / space.weights[:, None]
    return ShiftOperator(space, mat, kind="laplacian")


def rescaled_laplacian(adjacency, space: GraphSignalSpace) -> ShiftOperator:
    """Laplacian divided by its largest eigenvalue; spectrum lands in [0, 1]."""
    base = laplacian(adjacency, space)
    dec = base.decomposition()
    lam_max = float(np.max(dec.eigenvalues.real))
    if lam_max <= EIGEN_TOLERANCE:
        raise DegenerateGraph("graph has no edges, largest eigenvalue is zero")
    return base._with_cached(
        base.matrix / lam_max, "rescaled_laplacian",
        dec.eigenvalues / lam_max, dec.eigenvectors,
    )


def adjacency_operator(adjacency, space: GraphSignalSpace) -> ShiftOperator:
    """Adjacency matrix as a shift operator (unit-weight spaces)."""
    w = _validate_adjacency(adjacency, space.size)
    return ShiftOperator(space, w / space.weights[:, None], kind="adjacency")


def degree_operator(adjacency, space: GraphSignalSpace) -> ShiftOperator:
    w = _validate_adjacency(adjacency, space.size)
    return ShiftOperator(space, np.diag(w.sum(axis=1)), kind="degree")
