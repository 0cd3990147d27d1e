"""Filter kernel functions, functional-calculus filtering, and frame bounds.

A filter bank is an output-generating kernel chi plus a family {g_gamma}.  Its
frame sum  S(c) = |chi(c)|^2 + sum_gamma |g_gamma(c)|^2  evaluated over the
spectrum of a shift operator yields frame constants A = min S, B = max S, and
then  A ||f||^2 <= sum ||g(Delta) f||^2 <= B ||f||^2  for every signal f.

Two discontinuous kernels are supported alongside the smooth ones:
``delta_zero`` (1 at zero, 0 elsewhere) and ``cosbar_scaled`` (0 at zero,
cos(scale*c) elsewhere).  When applied to a spectrum they treat eigenvalues
within the operator's zero tolerance as exact zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Signal, ShiftOperator
from .errors import EmptySpectrum, SampleOutOfRange, SpaceMismatch

KERNEL_KINDS = (
    "sin_scaled",
    "cos_scaled",
    "cosbar_scaled",
    "delta_zero",
    "constant",
    "identity_fn",
    "polynomial",
    "custom_samples",
)

_HOLOMORPHIC_DEFAULT = {
    "sin_scaled": True,
    "cos_scaled": True,
    "cosbar_scaled": False,
    "delta_zero": False,
    "constant": True,
    "identity_fn": True,
    "polynomial": True,
    "custom_samples": False,
}


@dataclass(frozen=True)
class FilterKernel:
    """Scalar kernel c -> amplitude * base(scale * c).

    ``lipschitz_bound`` overrides the analytic default; polynomial and
    custom_samples kernels have no default and must declare one before the
    operator-perturbation harness will accept them.  For ``delta_zero`` the
    default transfer constant is 0 and for ``cosbar_scaled`` it matches the
    plain cosine; both are valid when the compared operators are (rescaled)
    Laplacians of connected graphs on a common vertex set, where the zero
    eigenprojectors coincide.
    """

    kind: str
    scale: float = 1.0
    amplitude: float = 1.0
    lipschitz_bound: float | None = None
    holomorphic: bool | None = None
    coeffs: tuple = ()
    samples: tuple = ()
    sample_tolerance: float = 1e-6

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "polynomial" and not self.coeffs:
            raise ValueError("polynomial kernel needs coefficients")
        if self.kind == "custom_samples" and not self.samples:
            raise ValueError("custom_samples kernel needs a (point, value) table")
        if self.holomorphic and self.kind in ("delta_zero", "cosbar_scaled", "custom_samples"):
            raise ValueError(f"{self.kind} is discontinuous and cannot be holomorphic")

    @property
    def is_holomorphic(self) -> bool:
        if self.holomorphic is not None:
            return self.holomorphic
        return _HOLOMORPHIC_DEFAULT[self.kind]

    @property
    def lipschitz(self) -> float | None:
        """Declared or analytic Lipschitz constant; None when unknown."""
        if self.lipschitz_bound is not None:
            return self.lipschitz_bound
        a = abs(self.scale) * abs(self.amplitude)
        return {
            "sin_scaled": a,
            "cos_scaled": a,
            "cosbar_scaled": a,
            "delta_zero": 0.0,
            "constant": 0.0,
            "identity_fn": a,
            "polynomial": None,
            "custom_samples": None,
        }[self.kind]


def kernel_values(kernel: FilterKernel, points, zero_tol: float = 0.0) -> np.ndarray:
    """Vectorized kernel evaluation; |c| <= zero_tol counts as c = 0."""
    c = np.atleast_1d(np.asarray(points, dtype=complex))
    x = kernel.scale * c
    kind = kernel.kind
    if kind == "sin_scaled":
        base = np.sin(x)
    elif kind == "cos_scaled":
        base = np.cos(x)
    elif kind == "cosbar_scaled":
        base = np.where(np.abs(c) <= zero_tol, 0.0, np.cos(x))
    elif kind == "delta_zero":
        base = np.where(np.abs(c) <= zero_tol, 1.0, 0.0).astype(complex)
    elif kind == "constant":
        base = np.ones_like(c)
    elif kind == "identity_fn":
        base = x
    elif kind == "polynomial":
        base = np.polyval(list(kernel.coeffs[::-1]), x)
    else:  # custom_samples
        pts = np.asarray([p for p, _ in kernel.samples], dtype=complex)
        vals = np.asarray([v for _, v in kernel.samples], dtype=complex)
        dist = np.abs(c[:, None] - pts[None, :])
        nearest = dist.argmin(axis=1)
        worst = dist[np.arange(c.size), nearest].max()
        if worst > kernel.sample_tolerance:
            raise SampleOutOfRange(
                f"point {worst:.3e} away from the nearest table entry"
            )
        base = vals[nearest]
    return kernel.amplitude * base


def evaluate_kernel(kernel: FilterKernel, c, zero_tol: float = 0.0) -> complex:
    """Pointwise kernel value at a single (complex) point."""
    return complex(kernel_values(kernel, [c], zero_tol=zero_tol)[0])


def apply_filter(kernel: FilterKernel, op: ShiftOperator, f: Signal) -> Signal:
    """g(Delta) f = sum_i g(lambda_i) <phi_i, f> phi_i."""
    if not op.space.compatible(f.space):
        raise SpaceMismatch("signal does not live on the operator's space")
    return Signal(op.space, op.filter_values(kernel, f.values))


# ---------------------------------------------------------------------------
# filter banks and frame bounds
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class FilterBank:
    """Output kernel chi plus a non-empty family of filters {g_gamma}."""

    output_kernel: FilterKernel
    filters: tuple
    frame_bounds: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        self.filters = tuple(self.filters)
        if not self.filters:
            raise ValueError("filter bank needs at least one filter")
        if self.frame_bounds is not None:
            a, b = self.frame_bounds
            if not (0 < a <= b):
                raise ValueError("frame bounds must satisfy 0 < A <= B")

    @property
    def kernels(self) -> tuple:
        """Output kernel first, then the filters."""
        return (self.output_kernel,) + self.filters

    def frame_sum(self, points, zero_tol: float = 0.0) -> np.ndarray:
        """S(c) = |chi(c)|^2 + sum_gamma |g_gamma(c)|^2."""
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        total = np.zeros(pts.shape, dtype=float)
        for k in self.kernels:
            total += np.abs(kernel_values(k, pts, zero_tol=zero_tol)) ** 2
        return total

    def lipschitz_budget(self) -> float | None:
        """sqrt(L_chi^2 + sum L_g^2); None when any constant is undeclared."""
        total = 0.0
        for k in self.kernels:
            lip = k.lipschitz
            if lip is None:
                return None
            total += lip**2
        return math.sqrt(total)


def frame_bounds(bank: FilterBank, spectrum) -> tuple[float, float]:
    """Frame constants (A, B) of the bank over a concrete spectrum.

    Eigenvalues within the relative zero tolerance of the largest magnitude
    count as zero for the discontinuous kernels.  The bounds are stored on
    the bank.
    """
    spec = np.atleast_1d(np.asarray(spectrum, dtype=complex))
    if spec.size == 0:
        raise EmptySpectrum("frame bounds need a non-empty spectrum")
    ztol = 1e-9 * max(float(np.abs(spec).max()), 1e-30)
    s = bank.frame_sum(spec, zero_tol=ztol)
    a, b = float(s.min()), float(s.max())
    bank.frame_bounds = (a, b)
    return a, b


def frame_bounds_on_interval(bank: FilterBank, interval=(0.0, 1.0),
                             n_grid: int = 10_000) -> tuple[float, float]:
    """Grid variant of :func:`frame_bounds` over [lo, hi], plus the point 0.

    The point 0 is always included exactly because delta_zero and
    cosbar_scaled are discontinuous there.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (hi >= lo):
        raise ValueError("empty interval")
    grid = np.linspace(lo, hi, n_grid)
    grid = np.append(grid, 0.0)
    s = bank.frame_sum(grid, zero_tol=0.0)
    a, b = float(s.min()), float(s.max())
    bank.frame_bounds = (a, b)
    return a, b


@dataclass(frozen=True)
class FrameCheck:
    lower_ok: bool
    upper_ok: bool
    energy_ratio: float


def frame_inequality_check(bank: FilterBank, op: ShiftOperator, f: Signal,
                           slack: float = 1e-8) -> FrameCheck:
    """Check A ||f||^2 <= sum ||g(Delta) f||^2 <= B ||f||^2 on a signal."""
    if not op.space.compatible(f.space):
        raise SpaceMismatch("signal does not live on the operator's space")
    if bank.frame_bounds is None:
        frame_bounds(bank, op.spectrum)
    a, b = bank.frame_bounds
    nf2 = f.norm() ** 2
    if nf2 == 0.0:
        return FrameCheck(True, True, 0.0)
    total = sum(
        op.space.norm(op.filter_values(k, f.values)) ** 2 for k in bank.kernels
    )
    return FrameCheck(
        total >= a * nf2 - slack * max(1.0, nf2),
        total <= b * nf2 + slack * max(1.0, nf2),
        total / nf2,
    )


# ---------------------------------------------------------------------------
# preset banks
# ---------------------------------------------------------------------------

def architecture_i_bank() -> FilterBank:
    """Half-amplitude trig bank with the zero line carved out.

    Filters {1/2 sin(pi/2 x), 1/2 cosbar(pi/2 x), 1/2 sin(pi x),
    1/2 cosbar(pi x)} and output chi = delta_zero / sqrt(2).  The frame sum is
    identically 1/2 on [0, 1], a tight frame: away from zero the two
    scaled Pythagorean pairs contribute 1/4 each, and at zero only the output
    kernel fires with |1/sqrt(2)|^2 = 1/2.
    """
    half = 0.5
    return FilterBank(
        output_kernel=FilterKernel("delta_zero", amplitude=1.0 / math.sqrt(2.0)),
        filters=(
            FilterKernel("sin_scaled", scale=math.pi / 2, amplitude=half),
            FilterKernel("cosbar_scaled", scale=math.pi / 2, amplitude=half),
            FilterKernel("sin_scaled", scale=math.pi, amplitude=half),
            FilterKernel("cosbar_scaled", scale=math.pi, amplitude=half),
        ),
    )


def architecture_ii_bank() -> FilterBank:
    """Full-amplitude trig bank with the identity as output.

    Filters {sin(pi/2 x), cos(pi/2 x), sin(pi x), cos(pi x)}, chi(x) = x.
    Frame sum S(c) = 2 + c^2, so (A, B) = (2, 3) on [0, 1].
    """
    return FilterBank(
        output_kernel=FilterKernel("identity_fn"),
        filters=(
            FilterKernel("sin_scaled", scale=math.pi / 2),
            FilterKernel("cos_scaled", scale=math.pi / 2),
            FilterKernel("sin_scaled", scale=math.pi),
            FilterKernel("cos_scaled", scale=math.pi),
        ),
    )


PRESET_BANKS = {
    "architecture_I": architecture_i_bank,
    "architecture_II": architecture_ii_bank,
}
