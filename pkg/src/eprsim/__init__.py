"""EPR photon-pair coincidence experiments, simulated and analyzed two ways.

The package puts two source models side by side: Born-rule entangled Bell
pairs (fringe visibility 1) and a disentangled statistical ensemble of
product states with a shared random axis and random per-photon phases
(fringe visibility 1/2). Four coincidence experiment families are covered
with closed forms, first-principles Born evaluations and a deterministic
seeded Monte Carlo, plus the statistics needed to compare them: CHSH
values, visibility fits, offset ratios and accidental-coincidence
handling.
"""

from .analytics import (
    CorrelationEstimate,
    VisibilityFit,
    chsh,
    correlation_from_counts,
    fit_visibility,
    offset_peak_ratio,
    subtract_accidentals,
)
from .experiments import (
    AspectProbabilities,
    Curve,
    CurvePoint,
    Diag45,
    Engine,
    ExperimentKind,
    KimDetector,
    aspect_probabilities,
    entangled_first_principles,
    gisin_expectation,
    kim_expectation,
    model_label,
    sweep,
    zeilinger_rate,
)
from .mc_engine import (
    CoincidenceCounts,
    McConfig,
    McEstimate,
    RNG_NAME,
    estimate_detection_rate,
    inject_accidentals,
    phase_accept,
    run_double_coincidence,
    run_triple_coincidence,
)
from .optics import (
    PolarizerSetting,
    SfgType,
    bsm_projector,
    malus_probability,
    sfg_axis_transform,
    sfg_transform,
)
from .qcore import (
    BellKind,
    ConsistencyError,
    DensityOperator,
    PureState,
    bell_state,
    born_expectation,
    linear_polarization_state,
    maximally_mixed,
    partial_trace,
    projector,
    states_equal_up_to_phase,
    tensor,
)
from .sources import (
    AxisDistribution,
    AxisSample,
    DisentangledEnsemble,
    EntangledPair,
    PairSample,
    SourceModel,
    correlation_analytic,
    entangled_pair_density,
    pair_from_axis,
    sample_disentangled_pair,
    visibility_of,
)

__version__ = "0.1.0"

__all__ = [
    "AspectProbabilities",
    "AxisDistribution",
    "AxisSample",
    "BellKind",
    "CoincidenceCounts",
    "ConsistencyError",
    "CorrelationEstimate",
    "Curve",
    "CurvePoint",
    "DensityOperator",
    "Diag45",
    "DisentangledEnsemble",
    "Engine",
    "EntangledPair",
    "ExperimentKind",
    "KimDetector",
    "McConfig",
    "McEstimate",
    "PairSample",
    "PolarizerSetting",
    "PureState",
    "RNG_NAME",
    "SfgType",
    "SourceModel",
    "VisibilityFit",
    "aspect_probabilities",
    "bell_state",
    "born_expectation",
    "bsm_projector",
    "chsh",
    "correlation_analytic",
    "correlation_from_counts",
    "entangled_first_principles",
    "entangled_pair_density",
    "estimate_detection_rate",
    "fit_visibility",
    "gisin_expectation",
    "inject_accidentals",
    "kim_expectation",
    "linear_polarization_state",
    "malus_probability",
    "maximally_mixed",
    "model_label",
    "offset_peak_ratio",
    "pair_from_axis",
    "partial_trace",
    "phase_accept",
    "projector",
    "run_double_coincidence",
    "run_triple_coincidence",
    "sample_disentangled_pair",
    "sfg_axis_transform",
    "sfg_transform",
    "states_equal_up_to_phase",
    "subtract_accidentals",
    "sweep",
    "tensor",
    "visibility_of",
    "__version__",
]
