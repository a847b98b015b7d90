"""Workbench for Lipschitz-free spaces at desk scale: exact transport norms
with primal/dual certificates, linearized Lipschitz maps, and orbit
classification into recurrence/escape evidence classes.
"""

from .spaces import (
    AlphaSpace,
    DomainError,
    FiniteSpace,
    IntervalSpace,
    LatticeBox,
    MetricCheck,
    MetricViolation,
    PrefixExhausted,
    restrict_to_points,
    same_space,
    space_from_json,
    space_to_json,
    validate_finite_metric,
)
from .vectors import (
    FreeVector,
    Functional,
    coerce_point,
    delta,
    linear_combine,
    make_free_vector,
    pair,
    point_from_json,
    point_to_json,
    push_forward,
    vector_from_json,
    vector_to_json,
)
from .norms import (
    FlowConvergenceError,
    NormResult,
    dual_gap,
    free_norm,
    norm_alpha,
    norm_flow,
    norm_line,
    norm_result_to_json,
    witness_functional,
)
from .maps import (
    AlphaMap,
    FiniteMap,
    LatticeMap,
    LipEstimate,
    PiecewiseLinearMap,
    compose,
    iterate_map,
    iterate_point,
    iterate_vector,
    lip_constant,
    map_from_json,
    map_to_json,
    operator_norm_estimate,
)
from .dynamics import (
    BOUNDED,
    CASE_NO_DRIFT,
    CASE_TRAPPED_DRIFT_IN,
    CASE_TRAPPED_DRIFT_OVER,
    CASE_UNBOUNDED_DRIFT,
    ESCAPING,
    RECURRENT,
    UNDECIDED,
    ClassificationParams,
    ClassificationReport,
    IntervalAnalysis,
    PowerCheckEntry,
    PowerCheckReport,
    RigidityCertificate,
    SideAnalysis,
    classification_to_json,
    classify_orbit,
    escape_test_functional,
    interval_analysis_to_json,
    interval_analyze,
    orbit_norm_profile,
    power_check_to_json,
    power_equivalence_check,
    recurrence_gap,
    rigidity_check,
    rigidity_to_json,
    shift_profile_closed_form,
)
from .gallery import (
    GALLERY,
    BlockScheme,
    ExperimentCheck,
    ExperimentReport,
    backward_shift_experiment,
    backward_shift_map,
    backward_shift_space,
    block_cycle_experiment,
    block_cycle_map,
    block_cycle_space,
    circle_rotation_experiment,
    circle_rotation_space,
    doubling_experiment,
    doubling_map,
    dyadic_tail_vector,
    experiment_to_json,
    fill_map,
    forward_shift_experiment,
    forward_shift_map,
    gallery_experiments,
    identity_map,
    interval_map_suite,
    kronecker_return_times,
    ramp_map,
    shift_vector,
    tempered_alpha_space,
)

__version__ = "0.1.0"
