"""Generalized graph scattering transforms with functional-calculus filters.

The package is organized around weighted graph signal spaces (:mod:`core`),
scalar filter kernels and frame validation (:mod:`kernels`), the scattering
engine itself (:mod:`scattering`), graph-level aggregation
(:mod:`aggregation`), edge-level input (:mod:`edges`), a numerical stability
certification harness (:mod:`perturbation`), dataset plumbing
(:mod:`descriptors`, :mod:`io`), and a small kernel machine (:mod:`ml`).
"""

from .aggregation import (
    AggregatedVector,
    GraphLevelFeatures,
    aggregate_tree,
    edge_pnorm_aggregate,
    feature_set_distance,
    lowpass_aggregate,
    pnorm_aggregate,
)
from .core import (
    EIGEN_TOLERANCE,
    NORMALITY_TOLERANCE,
    GraphSignalSpace,
    ShiftOperator,
    Signal,
    SpectralDecomposition,
    adjacency_operator,
    build_space,
    decompose,
    degree_operator,
    frobenius_distance,
    inner_product,
    laplacian,
    rescaled_laplacian,
    weighted_operator_norm,
)
from .edges import (
    EdgeShiftOperator,
    EdgeSignal,
    EdgeSignalSpace,
    build_edge_space,
    coulomb_matrix,
    edge_apply_filter,
    edge_scatter,
)
from .kernels import (
    FilterBank,
    FilterKernel,
    apply_filter,
    architecture_i_bank,
    architecture_ii_bank,
    evaluate_kernel,
    frame_bounds,
    frame_bounds_on_interval,
    frame_inequality_check,
    kernel_values,
)
from .perturbation import (
    ClosenessReport,
    EquivalenceReport,
    IdentificationPair,
    cg_constant,
    closeness_defect,
    equivalence_defects,
    graph_perturbation_experiment,
    kernel_commutator_norm,
    operator_perturbation_experiment,
    split_vertex_pair,
)
from .scattering import (
    ConnectingOperator,
    FeatureTree,
    LayerModule,
    Nonlinearity,
    ScatteringArchitecture,
    energy_decay_certificate,
    energy_sandwich_check,
    feature_distance,
    feature_norm,
    generate_output,
    layer_energy,
    propagate_one_step,
    scatter,
    signal_stability_constant,
    truncation_bound,
    truncation_distance,
    uniform_architecture,
)

__version__ = "0.1.0"
