"""Traction modeling for interlocking ground spikes on granular soil.

Spike kinematics, crescent soil-failure mechanics, field trial-log
reduction, a quasi-static forward model, and spike design search, with a
CLI front end (``spiketrac``).
"""

from .design import (
    DesignConstraints,
    DesignEvaluation,
    DesignSpace,
    GridSearchResult,
    ParameterRange,
    RankedDesign,
    Violation,
    evaluate_design,
    grid_search,
    pull_weight_ratio,
)
from .geometry import (
    DEFAULT_HINGE_HEIGHT_M,
    PENETRATION_WINDOW_DEG,
    DepthResult,
    SpikeDesign,
    SpikeState,
    TipDisplacement,
    WindowMargin,
    depth_from_inclination,
    lifting_force,
    penetration_window_margin,
    rake_angle,
    spike_state,
    thrust_angle,
    tip_displacement,
)
from .simulate import PredictedStep, lateral_onset_depth, predict_series
from .soilmech import (
    DRY_SAND,
    MOIST_SAND,
    CrescentResult,
    CriticalDepthModel,
    FailureMode,
    ForceLaw,
    SoilProperties,
    crescent_force,
    crescent_volume,
    critical_depth,
    failure_mode,
    max_crescent_force,
)
from .trials import (
    DerivedSeries,
    EffectiveApplication,
    PulleyRig,
    StabilityRecord,
    TrialLog,
    TrialLogError,
    TrialMetadata,
    TrialStep,
    VehicleConfig,
    derive_series,
    detect_landslides,
    draft_from_basket,
    estimate_effective_application,
    landslide_filter,
    parse_trial_log,
    penetration_work,
    stability_check,
    tractive_efficiency,
    write_trial_log,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_HINGE_HEIGHT_M",
    "DRY_SAND",
    "MOIST_SAND",
    "PENETRATION_WINDOW_DEG",
    "CrescentResult",
    "CriticalDepthModel",
    "DepthResult",
    "DerivedSeries",
    "DesignConstraints",
    "DesignEvaluation",
    "DesignSpace",
    "EffectiveApplication",
    "FailureMode",
    "ForceLaw",
    "GridSearchResult",
    "ParameterRange",
    "PredictedStep",
    "PulleyRig",
    "RankedDesign",
    "SoilProperties",
    "SpikeDesign",
    "SpikeState",
    "StabilityRecord",
    "TipDisplacement",
    "TrialLog",
    "TrialLogError",
    "TrialMetadata",
    "TrialStep",
    "VehicleConfig",
    "Violation",
    "WindowMargin",
    "crescent_force",
    "crescent_volume",
    "critical_depth",
    "depth_from_inclination",
    "derive_series",
    "detect_landslides",
    "draft_from_basket",
    "estimate_effective_application",
    "evaluate_design",
    "failure_mode",
    "grid_search",
    "landslide_filter",
    "lateral_onset_depth",
    "lifting_force",
    "max_crescent_force",
    "parse_trial_log",
    "penetration_window_margin",
    "penetration_work",
    "predict_series",
    "pull_weight_ratio",
    "rake_angle",
    "spike_state",
    "stability_check",
    "thrust_angle",
    "tip_displacement",
    "tractive_efficiency",
    "write_trial_log",
]
