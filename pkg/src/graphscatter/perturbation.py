"""Stability certification: operator perturbations and vertex-set changes.

Two regimes are covered.  Same-space perturbations compare two architectures
whose layer operators differ by at most delta in Frobenius norm; the feature
distance is then bounded by

    sqrt(2 (2^N - 1)) * sqrt(max{B, 1/2}^(N-1)) * D * delta * ||f||,

with D^2 bounding the per-layer sum of squared kernel Lipschitz constants
(for B <= 1/2 the constant improves to sqrt(2 (1 - B^N)/(1 - B)) * D <= 2 D).

Vertex-set changes go through identification operators J, J~ between the two
signal spaces.  The spaces are delta-quasi-unitarily equivalent when

    ||J f|| <= 2 ||f||,            ||(J - J~*) f|| <= delta ||f||,
    ||f - J~ J f||^2 <= delta^2 (||f||^2 + <f, |Delta| f>),
    ||u - J J~ u||^2 <= delta^2 (||u||^2 + <u, |Delta~| u>),

and the operators are omega-delta-close when the resolvents R = (Delta -
omega)^{-1} intertwine up to delta: ||R~ J - J R||_op <= delta.  Every defect
here is computed exactly as a (generalized) singular value problem in the
weighted geometry, so the reports are certificates rather than estimates.
For a holomorphic kernel g the commutators transfer as
||g(Delta~) J - J g(Delta)||_op <= C_g * delta with the contour constant
C_g = 2 (K+1)^2 / pi * loop integral of |g| over the circle of radius K + 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    GraphSignalSpace,
    ShiftOperator,
    Signal,
    build_space,
    laplacian,
    weighted_adjoint,
    weighted_frobenius_norm,
    weighted_operator_norm,
)
from .errors import (
    MissingLipschitzBound,
    NotHolomorphic,
    OmegaInSpectrum,
    SizeMismatch,
    SpaceMismatch,
)
from .kernels import FilterKernel, frame_bounds, kernel_values
from .scattering import ScatteringArchitecture, feature_distance, scatter

RESOLVENT_MARGIN = 0.1
QUADRATURE_TOLERANCE = 1e-6


# ---------------------------------------------------------------------------
# identification operators and defect reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IdentificationPair:
    """Linear maps J: l2(G) -> l2(G~) and J~ back."""

    space: GraphSignalSpace
    space_tilde: GraphSignalSpace
    forward: np.ndarray
    backward: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.forward, dtype=complex)
        jt = np.asarray(self.backward, dtype=complex)
        if j.shape != (self.space_tilde.size, self.space.size):
            raise SizeMismatch("forward map shape does not match the spaces")
        if jt.shape != (self.space.size, self.space_tilde.size):
            raise SizeMismatch("backward map shape does not match the spaces")
        if not (np.all(np.isfinite(j)) and np.all(np.isfinite(jt))):
            raise SizeMismatch("identification operators must be finite")
        object.__setattr__(self, "forward", j)
        object.__setattr__(self, "backward", jt)


@dataclass(frozen=True)
class EquivalenceReport:
    norm_defect: float
    adjoint_defect: float
    roundtrip_defect_source: float
    roundtrip_defect_target: float

    @property
    def certified_delta(self) -> float:
        """Smallest delta the three delta-scaled inequalities certify.

        Infinite when the delta-free bound ||J f|| <= 2 ||f|| fails.
        """
        if self.norm_defect > 0:
            return math.inf
        return max(self.adjoint_defect,
                   self.roundtrip_defect_source,
                   self.roundtrip_defect_target)

    def to_dict(self) -> dict:
        return {
            "norm_defect": self.norm_defect,
            "adjoint_defect": self.adjoint_defect,
            "roundtrip_defect_source": self.roundtrip_defect_source,
            "roundtrip_defect_target": self.roundtrip_defect_target,
            "certified_delta": self.certified_delta,
        }


@dataclass(frozen=True)
class ClosenessReport:
    omega: complex
    resolvent_defect: float
    bound_k: float
    delta: float | None = None

    @property
    def certified(self) -> bool | None:
        if self.delta is None:
            return None
        return self.resolvent_defect <= self.delta

    def to_dict(self) -> dict:
        return {
            "omega": [self.omega.real, self.omega.imag],
            "resolvent_defect": self.resolvent_defect,
            "bound_k": self.bound_k,
            "delta": self.delta,
            "certified": self.certified,
        }


def _quadratic_form_sup(matrix: np.ndarray, space_out: GraphSignalSpace,
                        form: np.ndarray) -> float:
    """sup_f ||M f||_out / sqrt(f^H Q f) for a Hermitian PD form Q."""
    num = matrix.conj().T @ (space_out.weights[:, None] * matrix)
    num = 0.5 * (num + num.conj().T)
    form = 0.5 * (form + form.conj().T)
    vals = scipy.linalg.eigh(num, form, eigvals_only=True)
    return float(math.sqrt(max(float(vals[-1]), 0.0)))


def equivalence_defects(pair: IdentificationPair, op: ShiftOperator,
                        op_tilde: ShiftOperator) -> EquivalenceReport:
    """Exact defects of the four quasi-unitary-equivalence inequalities."""
    if not pair.space.compatible(op.space) or not pair.space_tilde.compatible(op_tilde.space):
        raise SpaceMismatch("identification pair does not match the operators")
    j, jt = pair.forward, pair.backward
    sp, spt = pair.space, pair.space_tilde

    norm_defect = max(0.0, weighted_operator_norm(j, sp, spt) - 2.0)
    jt_star = weighted_adjoint(jt, spt, sp)
    adjoint_defect = weighted_operator_norm(j - jt_star, sp, spt)

    # sup ||(I - J~J) f|| / sqrt(<f, (1 + |Delta|) f>), and the mirrored one.
    q_src = sp.weights[:, None] * (np.eye(sp.size) + op.absolute_matrix())
    src = _quadratic_form_sup(np.eye(sp.size) - jt @ j, sp, q_src)
    q_tgt = spt.weights[:, None] * (np.eye(spt.size) + op_tilde.absolute_matrix())
    tgt = _quadratic_form_sup(np.eye(spt.size) - j @ jt, spt, q_tgt)
    return EquivalenceReport(norm_defect, adjoint_defect, src, tgt)


def closeness_defect(pair: IdentificationPair, op: ShiftOperator,
                     op_tilde: ShiftOperator, omega: complex,
                     delta: float | None = None,
                     resolvent_margin: float = RESOLVENT_MARGIN) -> ClosenessReport:
    """Resolvent intertwining defect ||R~ J - J R||_op at the point omega."""
    omega = complex(omega)
    dist = min(
        float(np.abs(op.spectrum - omega).min()),
        float(np.abs(op_tilde.spectrum - omega).min()),
    )
    if dist < resolvent_margin:
        raise OmegaInSpectrum(
            f"omega within {dist:.3e} of a spectrum (margin {resolvent_margin})"
        )
    n, m = op.size, op_tilde.size
    r = np.linalg.solve(op.matrix - omega * np.eye(n), np.eye(n))
    rt = np.linalg.solve(op_tilde.matrix - omega * np.eye(m), np.eye(m))
    defect = weighted_operator_norm(
        rt @ pair.forward - pair.forward @ r, pair.space, pair.space_tilde
    )
    k = max(op.operator_norm(), op_tilde.operator_norm())
    return ClosenessReport(omega, defect, k, delta)


# ---------------------------------------------------------------------------
# the split-vertex worked pair
# ---------------------------------------------------------------------------

DEFAULT_SPLIT_ADJACENCY = np.array([
    # 6-cycle with one chord; the last vertex is the one that gets split
    [0, 1, 1, 0, 0, 1],
    [1, 0, 1, 0, 0, 0],
    [1, 1, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 1],
    [1, 0, 0, 0, 1, 0],
], dtype=float)


@dataclass(frozen=True, eq=False)
class SplitVertexPair:
    space: GraphSignalSpace
    space_tilde: GraphSignalSpace
    op: ShiftOperator
    op_tilde: ShiftOperator
    pair: IdentificationPair
    delta: float


def split_vertex_pair(delta: float, adjacency=None) -> SplitVertexPair:
    """Split the last (weight-2) vertex into two unit vertices joined by a
    strong edge of weight 1/delta^2.

    The source graph has n vertices with mu = (1, ..., 1, 2); the target
    graph has n + 1 unit-weight vertices, keeps every source edge, and adds
    the edge (n-1, n) with weight 1/delta^2.  J duplicates the last
    coordinate, J~ = J* averages the two split coordinates back.  The two
    spaces are delta-quasi-unitarily equivalent and the weighted Laplacians
    are (-1)-(12 delta)-close.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    w = np.asarray(DEFAULT_SPLIT_ADJACENCY if adjacency is None else adjacency,
                   dtype=float)
    n = w.shape[0]
    mu = np.ones(n)
    mu[-1] = 2.0
    space = build_space(n, mu)

    w_tilde = np.zeros((n + 1, n + 1))
    w_tilde[:n, :n] = w
    w_tilde[n - 1, n] = w_tilde[n, n - 1] = 1.0 / delta**2
    space_tilde = build_space(n + 1)

    forward = np.zeros((n + 1, n))
    forward[:n, :n] = np.eye(n)
    forward[n, n - 1] = 1.0
    backward = weighted_adjoint(forward, space, space_tilde)
    pair = IdentificationPair(space, space_tilde, forward, backward)

    return SplitVertexPair(
        space, space_tilde,
        laplacian(w, space), laplacian(w_tilde, space_tilde),
        pair, float(delta),
    )


# ---------------------------------------------------------------------------
# contour constant for holomorphic kernels
# ---------------------------------------------------------------------------

def cg_constant(kernel: FilterKernel, bound_k: float, omega: complex = -1.0,
                tol: float = QUADRATURE_TOLERANCE, n_start: int = 512,
                max_doublings: int = 12) -> float:
    """Commutator transfer constant 2 (K+1)^2 / pi * loop |g| over S_{K+1}.

    The circle radius enlarges to cover |omega| when needed (a bigger circle
    still encloses the spectrum, so the constant stays valid).  The arclength
    integral is evaluated by the trapezoid rule on the circle and the point
    count doubles until the value is stable to ``tol`` relative to
    max(1, |C_g|).
    """
    if not kernel.is_holomorphic:
        raise NotHolomorphic(f"kernel {kernel.kind!r} is not holomorphic")
    k_eff = max(float(bound_k), abs(complex(omega)))
    radius = k_eff + 1.0

    def integral(n: int) -> float:
        theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        z = radius * np.exp(1j * theta)
        vals = np.abs(kernel_values(kernel, z))
        return float(vals.mean() * 2.0 * math.pi * radius)

    n = n_start
    prev = integral(n)
    for _ in range(max_doublings):
        n *= 2
        cur = integral(n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            prev = cur
            break
        prev = cur
    return 2.0 * radius**2 / math.pi * prev


def kernel_commutator_norm(kernel: FilterKernel, pair: IdentificationPair,
                           op: ShiftOperator, op_tilde: ShiftOperator) -> float:
    """||g(Delta~) J - J g(Delta)||_op in the weighted norms."""
    return weighted_operator_norm(
        op_tilde.kernel_matrix(kernel) @ pair.forward
        - pair.forward @ op.kernel_matrix(kernel),
        pair.space, pair.space_tilde,
    )


# ---------------------------------------------------------------------------
# operator perturbation experiment (same spaces)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleRecord:
    empirical: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound / self.empirical if self.empirical > 0 else math.inf


@dataclass(frozen=True)
class OperatorPerturbationReport:
    delta: float
    lipschitz_budget: float
    frame_upper: float
    constant: float
    samples: tuple
    slack: float

    @property
    def empirical_max_ratio(self) -> float:
        """max over samples of empirical distance / (delta ||f||)."""
        return max((s.empirical / s.bound * self.constant for s in self.samples
                    if s.bound > 0), default=0.0)

    @property
    def theoretical_bound(self) -> float:
        return self.constant

    @property
    def margin(self) -> float:
        return min((s.margin for s in self.samples), default=math.inf)

    @property
    def violations(self) -> int:
        return sum(1 for s in self.samples if s.empirical > s.bound + self.slack)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "lipschitz_budget": self.lipschitz_budget,
            "frame_upper": self.frame_upper,
            "constant": self.constant,
            "empirical_max_ratio": self.empirical_max_ratio,
            "theoretical_bound": self.theoretical_bound,
            "margin": self.margin,
            "violations": self.violations,
            "ok": self.ok,
            "samples": [
                {"empirical": s.empirical, "bound": s.bound, "margin": s.margin}
                for s in self.samples
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _stability_constant(n_layers: int, b: float, d: float) -> float:
    if b <= 0.5:
        return math.sqrt(2.0 * (1.0 - b**n_layers) / (1.0 - b)) * d
    return math.sqrt(2.0 * (2.0**n_layers - 1.0)) * math.sqrt(b ** (n_layers - 1)) * d


def _check_same_modules(arch: ScatteringArchitecture, arch_tilde: ScatteringArchitecture):
    if arch.depth != arch_tilde.depth:
        raise SpaceMismatch("architectures have different depths")
    for i, (a, b) in enumerate(zip(arch.layers, arch_tilde.layers), 1):
        if a.nonlinearity != b.nonlinearity:
            raise SpaceMismatch(f"layer {i}: different nonlinearities")
        if a.bank.kernels != b.bank.kernels:
            raise SpaceMismatch(f"layer {i}: different filter banks")
        if a.connecting.kind != b.connecting.kind:
            raise SpaceMismatch(f"layer {i}: different connecting operators")


def operator_perturbation_experiment(arch: ScatteringArchitecture,
                                     arch_tilde: ScatteringArchitecture,
                                     signals, *,
                                     lipschitz_budget: float | None = None,
                                     slack: float = 1e-8) -> OperatorPerturbationReport:
    """Compare two same-module architectures against the closed-form bound.

    delta is the largest per-layer weighted Frobenius distance of the shift
    operators.  ``lipschitz_budget`` overrides the per-layer
    sqrt(L_chi^2 + sum L_g^2) computed from the kernels' declared constants
    (undeclared constants raise).
    """
    _check_same_modules(arch, arch_tilde)
    delta = 0.0
    b_max = 0.0
    d_max = 0.0
    for i, (lay, lay_t) in enumerate(zip(arch.layers, arch_tilde.layers), 1):
        delta = max(delta, weighted_frobenius_norm(
            lay.shift.matrix - lay_t.shift.matrix, lay.shift.space))
        spec = np.concatenate([lay.shift.spectrum, lay_t.shift.spectrum])
        _, b = frame_bounds(lay.bank, spec)
        b_max = max(b_max, b)
        if lipschitz_budget is None:
            d_layer = lay.bank.lipschitz_budget()
            if d_layer is None:
                raise MissingLipschitzBound(
                    f"layer {i} bank carries a kernel with no Lipschitz bound"
                )
            d_max = max(d_max, d_layer)
    d = lipschitz_budget if lipschitz_budget is not None else d_max
    constant = _stability_constant(arch.depth, b_max, d)

    records = []
    for f in signals:
        t = scatter(arch, f)
        t_tilde = scatter(arch_tilde, f)
        emp = feature_distance(t, t_tilde)
        records.append(SampleRecord(emp, constant * delta * f.space.norm(f.values)))
    return OperatorPerturbationReport(delta, d, b_max, constant, tuple(records), slack)


# ---------------------------------------------------------------------------
# graph perturbation experiment (vertex sets may change)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphPerturbationReport:
    applicable: bool
    reason: str
    delta: float
    bound_k: float
    lipschitz_budget: float
    frame_upper: float
    branch: str
    constant: float
    rho_defect: float
    p_defect: float
    samples: tuple
    slack: float

    @property
    def margin(self) -> float:
        return min((s.margin for s in self.samples), default=math.inf)

    @property
    def violations(self) -> int:
        return sum(1 for s in self.samples if s.empirical > s.bound + self.slack)

    @property
    def ok(self) -> bool:
        return (not self.applicable) or self.violations == 0

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "delta": self.delta,
            "bound_k": self.bound_k,
            "lipschitz_budget": self.lipschitz_budget,
            "frame_upper": self.frame_upper,
            "branch": self.branch,
            "constant": self.constant,
            "rho_defect": self.rho_defect,
            "p_defect": self.p_defect,
            "margin": self.margin,
            "violations": self.violations,
            "ok": self.ok,
            "samples": [
                {"empirical": s.empirical, "bound": s.bound, "margin": s.margin}
                for s in self.samples
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _vertex_change_constant(n_layers: int, b: float, d: float, branch: str) -> float:
    # sqrt(2 D^2 + c B) is computed hypot-style so astronomically large (but
    # finite) contour constants do not overflow when squared
    if branch == "exact":
        return _stability_constant(n_layers, b, d)
    if branch == "one_sided":
        base, cut, rate = math.hypot(math.sqrt(2.0) * d, 2.0 * math.sqrt(b)), 0.25, 4.0
    else:
        base, cut, rate = math.hypot(math.sqrt(2.0) * d,
                                     math.sqrt(12.0 * b)), 0.125, 8.0
    if b <= cut:
        return base * math.sqrt((1.0 - b**n_layers) / (1.0 - b))
    return base * math.sqrt((rate**n_layers - 1.0) / (rate - 1.0) * b ** (n_layers - 1))


def _rho_commutation_defect(rho, pair: IdentificationPair, probes: int, rng) -> float:
    """Estimate sup ||rho(J h) - J rho(h)|| / ||h|| on random probe signals."""
    worst = 0.0
    for _ in range(probes):
        h = rng.standard_normal(pair.space.size) + 1j * rng.standard_normal(pair.space.size)
        diff = rho(pair.forward @ h) - pair.forward @ rho(h)
        worst = max(worst, pair.space_tilde.norm(diff) / pair.space.norm(h))
    return worst


def _p_commutation_defect(p, p_tilde, pair_prev: IdentificationPair,
                          pair_cur: IdentificationPair, probes: int, rng) -> float:
    """Estimate sup ||P~(J_{n-1} h) - J_n P(h)|| / ||h|| on random probes."""
    worst = 0.0
    for _ in range(probes):
        h = rng.standard_normal(pair_prev.space.size) \
            + 1j * rng.standard_normal(pair_prev.space.size)
        diff = p_tilde(pair_prev.forward @ h) - pair_cur.forward @ p(h)
        worst = max(worst, pair_cur.space_tilde.norm(diff) / pair_prev.space.norm(h))
    return worst


def graph_perturbation_experiment(arch: ScatteringArchitecture,
                                  arch_tilde: ScatteringArchitecture,
                                  pairs, signals, *,
                                  omega: complex = -1.0,
                                  rho_commutes: bool = True,
                                  p_commutes: bool = True,
                                  probes: int = 200,
                                  seed: int = 0,
                                  slack: float = 1e-8) -> GraphPerturbationReport:
    """Vertex-set non-preserving stability check.

    ``pairs`` holds one identification pair per level 0..N (level 0 maps the
    input space).  The commutation of the identification operators with the
    nonlinearities and connecting operators is measured on random probe
    signals; the structural flags decide the constant family (exact
    commutation on both counts uses the 2^N family, one side the 4^N family,
    neither the 8^N family), and when a flag is False the measured defect
    enters delta.  Architectures containing non-holomorphic kernels are
    reported as out of scope rather than asserted.
    """
    _check_same_modules(arch, arch_tilde)
    if len(pairs) != arch.depth + 1:
        raise SizeMismatch("need one identification pair per level 0..N")
    rng = np.random.default_rng(seed)

    for layer in arch.layers:
        for k in layer.bank.kernels:
            if not k.is_holomorphic:
                return GraphPerturbationReport(
                    False, f"kernel {k.kind!r} is not holomorphic",
                    math.nan, math.nan, math.nan, math.nan, "none", math.nan,
                    math.nan, math.nan, (), slack,
                )

    k_bound = 0.0
    b_max = 0.0
    delta_parts = []
    for n, (lay, lay_t) in enumerate(zip(arch.layers, arch_tilde.layers), 1):
        k_bound = max(k_bound, lay.shift.operator_norm(), lay_t.shift.operator_norm())
        spec = np.concatenate([lay.shift.spectrum, lay_t.shift.spectrum])
        _, b = frame_bounds(lay.bank, spec)
        b_max = max(b_max, b)
        eq = equivalence_defects(pairs[n], lay.shift, lay_t.shift)
        close = closeness_defect(pairs[n], lay.shift, lay_t.shift, omega)
        delta_parts.extend([eq.certified_delta, close.resolvent_defect])

    d = 0.0
    for lay in arch.layers:
        cgs = [cg_constant(k, k_bound, omega) for k in lay.bank.kernels]
        top = max(cgs)
        if top > 0:
            # sqrt(sum cg^2) without overflowing the squares
            d = max(d, top * math.sqrt(sum((c / top) ** 2 for c in cgs)))

    # measured commutation defects (reported; folded into delta when the
    # structural flags do not claim exact commutation)
    rho_defect = 0.0
    p_defect = 0.0
    per_layer_probes = max(1, probes // max(1, arch.depth))
    for n, (lay, lay_t) in enumerate(zip(arch.layers, arch_tilde.layers), 1):
        rho_defect = max(rho_defect, _rho_commutation_defect(
            lay.nonlinearity, pairs[n], per_layer_probes, rng))
        p_defect = max(p_defect, _p_commutation_defect(
            lay.connecting, lay_t.connecting, pairs[n - 1], pairs[n],
            per_layer_probes, rng))
    if not rho_commutes:
        delta_parts.append(rho_defect)
    if not p_commutes:
        delta_parts.append(p_defect)
    delta = max(delta_parts)

    if rho_commutes and p_commutes:
        branch = "exact"
    elif rho_commutes or p_commutes:
        branch = "one_sided"
    else:
        branch = "general"
    constant = _vertex_change_constant(arch.depth, b_max, d, branch)

    j0 = pairs[0].forward
    records = []
    for f in signals:
        tree = scatter(arch, f)
        f_tilde = Signal(pairs[0].space_tilde, j0 @ f.values)
        tree_tilde = scatter(arch_tilde, f_tilde)
        total = 0.0
        for n, (lf, lf_t) in enumerate(zip(tree.layers, tree_tilde.layers), 1):
            jn = pairs[n].forward
            for path in lf.outputs:
                diff = lf_t.outputs[path] - jn @ lf.outputs[path]
                total += lf_t.space.norm(diff) ** 2
        emp = math.sqrt(total)
        records.append(SampleRecord(emp, constant * delta * f.space.norm(f.values)))
    return GraphPerturbationReport(
        True, "", delta, k_bound, d, b_max, branch, constant,
        rho_defect, p_defect, tuple(records), slack,
    )
