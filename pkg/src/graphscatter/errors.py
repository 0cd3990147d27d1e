"""Exception hierarchy shared by all graphscatter modules."""

from __future__ import annotations


class GraphScatterError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------------------
# signal spaces and operators
# ---------------------------------------------------------------------------

class WeightBelowOne(GraphScatterError):
    """A vertex (or edge) weight violates the mu_i >= 1 assumption."""


class SizeMismatch(GraphScatterError):
    """Vector or matrix dimensions do not match the owning space."""


class SpaceMismatch(GraphScatterError):
    """Two objects that must share a signal space do not."""


class AsymmetricAdjacency(GraphScatterError):
    """Adjacency input is not symmetric."""


class NegativeWeight(GraphScatterError):
    """Adjacency input carries a negative entry."""


class NonzeroDiagonal(GraphScatterError):
    """Adjacency input carries self loops."""


class NormalizedNeedsUnitWeights(GraphScatterError):
    """The normalized Laplacian is only defined on unit-weight spaces here."""


class IsolatedVertexInNormalized(GraphScatterError):
    """Zero-degree vertex makes D^{-1/2} undefined."""


class DegenerateGraph(GraphScatterError):
    """The graph has no edges, so the rescaled Laplacian is undefined."""


class NotNormal(GraphScatterError):
    """Operator fails the normality check in the weighted inner product."""


# ---------------------------------------------------------------------------
# kernels, frames, scattering
# ---------------------------------------------------------------------------

class EmptySpectrum(GraphScatterError):
    """Frame bounds requested over an empty set of spectral points."""


class SampleOutOfRange(GraphScatterError):
    """A custom_samples kernel was evaluated too far from any table point."""


class ShapeMismatch(GraphScatterError):
    """Two feature trees (or aggregated feature sets) differ in shape."""


class IndexOutOfRange(GraphScatterError):
    """Layer or filter index outside the architecture."""


class NonPositiveEigenvector(GraphScatterError):
    """No strictly positive eigenvector is available at the chosen level."""


class GapAssumptionViolated(GraphScatterError):
    """The energy-decay assumption B_n * m_n >= eta_n fails."""


class MissingLipschitzBound(GraphScatterError):
    """A kernel without a declared Lipschitz (or lower Lipschitz) bound was
    handed to a harness that needs one."""


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

class DegenerateGroundState(GraphScatterError):
    """The lowest eigenvalue is not simple (disconnected graph)."""


class NoZeroEigenvalue(GraphScatterError):
    """Low-pass aggregation needs a zero lowest eigenvalue."""


# ---------------------------------------------------------------------------
# higher order input
# ---------------------------------------------------------------------------

class CoincidentAtoms(GraphScatterError):
    """Two atoms share a position, so 1/|R_i - R_j| blows up."""


# ---------------------------------------------------------------------------
# perturbation harness
# ---------------------------------------------------------------------------

class OmegaInSpectrum(GraphScatterError):
    """Resolvent point too close to the spectrum of one of the operators."""


class NotHolomorphic(GraphScatterError):
    """Contour-integral machinery applied to a non-holomorphic kernel."""


# ---------------------------------------------------------------------------
# descriptors and IO
# ---------------------------------------------------------------------------

class DisconnectedForEccentricity(GraphScatterError):
    """Eccentricity requested on a disconnected graph."""


class CliqueCapExceeded(GraphScatterError):
    """Graph too large for maximal-clique enumeration."""


class ParseError(GraphScatterError):
    """Malformed input file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdge(GraphScatterError):
    """The same edge appears twice in an edge list."""


# ---------------------------------------------------------------------------
# kernel machine
# ---------------------------------------------------------------------------

class DimMismatch(GraphScatterError):
    """Feature dimensions disagree."""


class SingularSystem(GraphScatterError):
    """Ridge-free kernel system is rank deficient."""


class TooFewSamples(GraphScatterError):
    """Not enough samples for the requested fit or fold count."""
