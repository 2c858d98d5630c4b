"""Pinhole ranging from typographic features, inverse-variance fusion, and
the analytic error budget.

Each surviving typographic feature (character height, stroke width, glyph
spacing) yields its own distance estimate with an empirical noise model;
the estimates combine with weights 1/sigma^2, the best linear unbiased
combination for independent measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .states import StateSpec

__all__ = [
    "Feature",
    "FeatureEstimate",
    "ErrorBudget",
    "pinhole",
    "feature_estimates",
    "fuse_features",
    "error_budget",
    "measurement_noise_term",
    "SIGMA_COEFF",
]


class Feature(Enum):
    HEIGHT = "height"
    STROKE = "stroke"
    SPACING = "spacing"


# Relative standard deviation of each feature's distance estimate, as a
# fraction of distance. Height is the precise one; stroke and spacing are
# backup cues with much looser noise models.
SIGMA_COEFF = {
    Feature.HEIGHT: 0.023,
    Feature.STROKE: 0.15,
    Feature.SPACING: 0.20,
}

# Height estimates straying this far (fractionally) from the running prior
# get their variance inflated by the factor below, letting the backup
# features take over for a frame.
SUSPECT_DEVIATION = 0.25
SUSPECT_INFLATION = 4.0


@dataclass(frozen=True)
class FeatureEstimate:
    """Distance estimate from one typographic feature."""

    feature: Feature
    distance_m: float
    sigma_m: float

    def __post_init__(self) -> None:
        if self.distance_m <= 0 or self.sigma_m <= 0:
            raise ValueError(f"distance and sigma must be positive: {self}")

    @property
    def weight(self) -> float:
        return 1.0 / (self.sigma_m * self.sigma_m)


def pinhole(f: float, size_m: float, size_px: float) -> float:
    """Distance from the pinhole model: D = f * physical_size / image_size."""
    if size_px <= 0:
        raise ValueError(f"image size must be positive, got {size_px}")
    if f <= 0 or size_m <= 0:
        raise ValueError(f"focal length and physical size must be positive: ({f}, {size_m})")
    return f * size_m / size_px


def feature_estimates(
    f: float,
    spec: StateSpec,
    h_bar: Optional[float],
    s_bar: Optional[float],
    g_bar: Optional[float],
    d_prior: float,
    *,
    suspect_deviation: float = SUSPECT_DEVIATION,
    suspect_inflation: float = SUSPECT_INFLATION,
) -> list[FeatureEstimate]:
    """Per-feature distance estimates with their noise models.

    Missing measurements are simply omitted. Sigmas scale with ``d_prior``,
    the current best distance estimate (the previous frame's result, or the
    raw height estimate on the first frame); only relative magnitudes
    matter for the fusion weights.
    """
    if d_prior <= 0:
        raise ValueError(f"d_prior must be positive, got {d_prior}")
    out: list[FeatureEstimate] = []
    if h_bar is not None:
        d = pinhole(f, spec.char_height_m, h_bar)
        sigma = SIGMA_COEFF[Feature.HEIGHT] * d_prior
        if abs(d - d_prior) / d_prior > suspect_deviation:
            sigma *= suspect_inflation
        out.append(FeatureEstimate(Feature.HEIGHT, d, sigma))
    if s_bar is not None:
        out.append(
            FeatureEstimate(
                Feature.STROKE,
                pinhole(f, spec.stroke_width_m, s_bar),
                SIGMA_COEFF[Feature.STROKE] * d_prior,
            )
        )
    if g_bar is not None:
        out.append(
            FeatureEstimate(
                Feature.SPACING,
                pinhole(f, spec.char_gap_m, g_bar),
                SIGMA_COEFF[Feature.SPACING] * d_prior,
            )
        )
    if not out:
        raise ValueError("no typographic measurements available")
    return out


def fuse_features(estimates: Sequence[FeatureEstimate]) -> tuple[float, float]:
    """Inverse-variance fusion of feature estimates.

    Returns (distance, sigma) where the fused variance is 1 / sum(w_i); a
    single estimate passes through unchanged.
    """
    if not estimates:
        raise ValueError("fuse_features requires at least one estimate")
    wsum = sum(e.weight for e in estimates)
    d = sum(e.weight * e.distance_m for e in estimates) / wsum
    return (d, math.sqrt(1.0 / wsum))


@dataclass(frozen=True)
class ErrorBudget:
    """First-order relative distance error decomposition.

    The five inputs are dimensionless relative errors; the linear total is
    their worst-case aligned sum, the RSS total the realistic independent
    combination (always the smaller of the two).
    """

    focal_term: float
    height_term: float
    measurement_term: float
    pitch_term: float
    roll_term: float
    linear_total: float
    rss_total: float


def error_budget(
    focal_term: float,
    height_term: float,
    measurement_term: float,
    pitch_term: float = 0.0,
    roll_term: float = 0.0,
) -> ErrorBudget:
    """Combine the five relative error terms linearly and in quadrature."""
    terms = (focal_term, height_term, measurement_term, pitch_term, roll_term)
    if any(t < 0 for t in terms):
        raise ValueError(f"error terms must be non-negative, got {terms}")
    return ErrorBudget(
        *terms,
        linear_total=sum(terms),
        rss_total=math.sqrt(sum(t * t for t in terms)),
    )


def measurement_noise_term(sigma_h: float, n: int, h_bar: float) -> float:
    """Relative error of the n-character mean height: sigma_h / (sqrt(n) * h)."""
    if n < 1:
        raise ValueError(f"character count must be >= 1, got {n}")
    if sigma_h < 0 or h_bar <= 0:
        raise ValueError(f"invalid noise inputs ({sigma_h}, {h_bar})")
    return sigma_h / (math.sqrt(n) * h_bar)
