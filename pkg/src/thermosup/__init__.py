"""Operational simulations of thermalisation controlled by a quantum degree of freedom.

A probe can meet two thermal baths in superposition, or a single bath held
in a superposition of purifications; both scenarios are implemented in
full-thermalisation closed form and as collisional partial-thermalisation
models, with interferometric visibility as the common observable.
"""

__version__ = "0.1.0"

from .channels import (
    KrausSet,
    apply_kraus,
    gadc_on_purified,
    gadc_unitary,
    kraus_from_unitary,
    swap_thermalizer,
    transform_representation,
)
from .collision import (
    CollisionConfig,
    CollisionTrace,
    GridSpec,
    HeatmapResult,
    MemoryBudgetError,
    ThresholdNotReachedError,
    collisions_to_threshold,
    onebath_collisional_visibility,
    thermalization_curve,
    twobath_collisional_visibility,
    visibility_heatmap,
    visibility_trace,
)
from .onebath import (
    OneBathConfig,
    conditional_bath_state,
    max_visibility_onebath,
    overlap_matrix_w,
    probe_output,
    probe_output_analytic,
    superposed_purification,
    visibility_onebath,
)
from .qmath import (
    eigvals_hermitian,
    fidelity,
    kron,
    partial_trace,
    random_unitary,
    reduced_density,
    tensor,
    trace_distance,
)
from .thermal import (
    GibbsWeights,
    HamiltonianSpec,
    PurificationSpec,
    Temperature,
    ancilla_overlap_matrix,
    gibbs_state,
    gibbs_weights,
    purify,
    purify_general,
)
from .twobath import (
    TwoBathConfig,
    VisibilityResult,
    conditional_probe_state,
    conditional_probe_state_dilated,
    max_visibility_closed_form,
    max_visibility_search,
    normalized_state,
    optimal_representation_unitaries,
    visibility,
    zero_visibility_unitaries,
)

__all__ = [
    "__version__",
    "KrausSet",
    "apply_kraus",
    "gadc_on_purified",
    "gadc_unitary",
    "kraus_from_unitary",
    "swap_thermalizer",
    "transform_representation",
    "CollisionConfig",
    "CollisionTrace",
    "GridSpec",
    "HeatmapResult",
    "MemoryBudgetError",
    "ThresholdNotReachedError",
    "collisions_to_threshold",
    "onebath_collisional_visibility",
    "thermalization_curve",
    "twobath_collisional_visibility",
    "visibility_heatmap",
    "visibility_trace",
    "OneBathConfig",
    "conditional_bath_state",
    "max_visibility_onebath",
    "overlap_matrix_w",
    "probe_output",
    "probe_output_analytic",
    "superposed_purification",
    "visibility_onebath",
    "eigvals_hermitian",
    "fidelity",
    "kron",
    "partial_trace",
    "random_unitary",
    "reduced_density",
    "tensor",
    "trace_distance",
    "GibbsWeights",
    "HamiltonianSpec",
    "PurificationSpec",
    "Temperature",
    "ancilla_overlap_matrix",
    "gibbs_state",
    "gibbs_weights",
    "purify",
    "purify_general",
    "TwoBathConfig",
    "VisibilityResult",
    "conditional_probe_state",
    "conditional_probe_state_dilated",
    "max_visibility_closed_form",
    "max_visibility_search",
    "normalized_state",
    "optimal_representation_unitaries",
    "visibility",
    "zero_visibility_unitaries",
]
