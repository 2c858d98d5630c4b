"""Monocular ranging from license-plate typography.

Standardized plate character dimensions act as passive fiducial markers: a
calibrated focal length plus the jurisdiction's mandated character height
turn a measured pixel height into a metric distance. This package covers
the full chain: raster kernels and candidate detection, character
segmentation, jurisdiction identification, pose-compensated pinhole
ranging, fusion with an injected relative-depth signal, and Kalman-filtered
time-to-collision warnings, with a deterministic simulator standing in for
the camera and the deep-learning externals.
"""

from .camera import (
    LENS_PRESETS,
    CalibrationSample,
    CameraModel,
    LensPreset,
    calibrate_focal,
    scale_focal,
)
from .detect import Candidate, DetectorMode, Mode, advance_mode, select, verify
from .detect import score as candidate_score
from .fusion import (
    SafetyOutput,
    ScaleTracker,
    TrackState,
    WarningLevel,
    deep_metric,
    fuse_geo_deep,
    kalman_step,
    optical_cross_check,
    safety,
    update_scale,
)
from .pose import (
    LineSegment,
    PoseEstimate,
    PoseSmoother,
    compensated_distance,
    correct_height,
    pitch_from_vanishing,
    pose_error_terms,
    roll_from_segments,
)
from .ranging import (
    ErrorBudget,
    Feature,
    FeatureEstimate,
    error_budget,
    feature_estimates,
    fuse_features,
    measurement_noise_term,
    pinhole,
)
from .segment import CharSet, SegmentationError, mean_height, segment_characters, spacing, stroke_width
from .sim import (
    FrameTruth,
    PipelineConfig,
    PlateRender,
    Scenario,
    SessionLog,
    gen_frames,
    load_scenario,
    render_plate,
    run_pipeline,
)
from .state_id import (
    DesignCatalog,
    MarkerCatalog,
    OcrRead,
    Stage,
    StateDecision,
    Strip,
    decide,
    hsv_scores,
    match_markers,
)
from .states import StateSpec, StateTable, lookup_height

__version__ = "0.1.0"

__all__ = [
    "CameraModel",
    "LensPreset",
    "LENS_PRESETS",
    "CalibrationSample",
    "scale_focal",
    "calibrate_focal",
    "StateSpec",
    "StateTable",
    "lookup_height",
    "Candidate",
    "DetectorMode",
    "Mode",
    "candidate_score",
    "verify",
    "select",
    "advance_mode",
    "CharSet",
    "SegmentationError",
    "segment_characters",
    "mean_height",
    "stroke_width",
    "spacing",
    "OcrRead",
    "StateDecision",
    "Stage",
    "Strip",
    "MarkerCatalog",
    "DesignCatalog",
    "match_markers",
    "hsv_scores",
    "decide",
    "PoseEstimate",
    "PoseSmoother",
    "LineSegment",
    "pitch_from_vanishing",
    "roll_from_segments",
    "correct_height",
    "compensated_distance",
    "pose_error_terms",
    "Feature",
    "FeatureEstimate",
    "ErrorBudget",
    "pinhole",
    "feature_estimates",
    "fuse_features",
    "error_budget",
    "measurement_noise_term",
    "ScaleTracker",
    "TrackState",
    "SafetyOutput",
    "WarningLevel",
    "update_scale",
    "deep_metric",
    "fuse_geo_deep",
    "kalman_step",
    "safety",
    "optical_cross_check",
    "Scenario",
    "FrameTruth",
    "PlateRender",
    "PipelineConfig",
    "SessionLog",
    "render_plate",
    "gen_frames",
    "run_pipeline",
    "load_scenario",
    "__version__",
]
