"""Plate-candidate scoring, verification, and strict/permissive mode switching.

A candidate is one connected region proposed by a binarization pipeline,
summarized by its aspect ratio, its area fraction of the frame, the edge
density inside its box, and the number of vertical-projection peaks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .raster import Region, binarize_otsu, canny, vertical_projection_peaks

__all__ = [
    "Mode",
    "DetectorMode",
    "Candidate",
    "score",
    "verify",
    "select",
    "advance_mode",
    "measure_candidate",
    "IDEAL_ASPECT",
    "MISS_LIMIT",
]

# Plate-likeness constants: composite weights, the ideal aspect ratio the
# aspect score is centered on, saturation point of the area score, typical
# in-box edge density, and acceptance bounds.
SCORE_WEIGHTS = (0.5, 0.3, 0.2)
IDEAL_ASPECT = 2.5
AREA_FRAC_SATURATION = 0.02
TYPICAL_EDGE_DENSITY = 0.12
EDGE_DENSITY_BOUNDS = (0.01, 0.82)
MIN_PROJECTION_PEAKS = 2
# Consecutive misses before the detector loosens its aspect bounds.
MISS_LIMIT = 8


class Mode(Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


ASPECT_BOUNDS = {
    Mode.STRICT: (1.1, 6.0),
    Mode.PERMISSIVE: (0.7, 8.0),
}


@dataclass(frozen=True)
class DetectorMode:
    """Current acceptance mode plus the consecutive-miss counter driving it."""

    mode: Mode = Mode.STRICT
    consecutive_misses: int = 0

    def __post_init__(self) -> None:
        if self.consecutive_misses < 0:
            raise ValueError("consecutive_misses must be >= 0")


@dataclass(frozen=True)
class Candidate:
    """One plate candidate with its measured geometric properties."""

    region: Region
    ar: float
    area_frac: float
    edge_density: float
    peaks: int
    source_method: str = ""

    def __post_init__(self) -> None:
        if self.ar <= 0:
            raise ValueError(f"aspect ratio must be positive, got {self.ar}")
        if not 0.0 <= self.area_frac <= 1.0:
            raise ValueError(f"area fraction outside [0, 1]: {self.area_frac}")
        if not 0.0 <= self.edge_density <= 1.0:
            raise ValueError(f"edge density outside [0, 1]: {self.edge_density}")


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


def aspect_score(ar: float, ideal: float = IDEAL_ASPECT) -> float:
    return _clip01(1.0 - abs(ar - ideal) / ideal)


def area_score(area_frac: float) -> float:
    # Saturating credit: plates in the 3-20 m band occupy at most ~2% of a
    # 1280x720 frame, so anything at or above that gets full credit.
    return _clip01(area_frac / AREA_FRAC_SATURATION)


def edge_score(edge_density: float) -> float:
    return _clip01(1.0 - abs(edge_density - TYPICAL_EDGE_DENSITY) / TYPICAL_EDGE_DENSITY)


def score(c: Candidate) -> float:
    """Composite plate-likeness score in [0, 1]."""
    w_ar, w_area, w_rho = SCORE_WEIGHTS
    return w_ar * aspect_score(c.ar) + w_area * area_score(c.area_frac) + w_rho * edge_score(c.edge_density)


def verify(c: Candidate, peaks: int, mode: Mode = Mode.STRICT) -> bool:
    """Geometric verification of a scored candidate.

    Requires in-box edge density within bounds, at least two projection
    peaks (multiple characters present), and aspect ratio within the
    current mode's range.
    """
    lo, hi = EDGE_DENSITY_BOUNDS
    if not lo <= c.edge_density <= hi:
        return False
    if peaks < MIN_PROJECTION_PEAKS:
        return False
    ar_lo, ar_hi = ASPECT_BOUNDS[mode]
    return ar_lo <= c.ar <= ar_hi


def select(candidates: list[Candidate], state: DetectorMode | None = None) -> Candidate | None:
    """Highest-scoring candidate that passes verification, or None.

    Ties break toward the larger area, then toward the upper-left box.
    """
    mode = state.mode if state is not None else Mode.STRICT
    passing = [c for c in candidates if verify(c, c.peaks, mode)]
    if not passing:
        return None
    return max(
        passing,
        key=lambda c: (score(c), c.region.area, -c.region.y, -c.region.x),
    )


def advance_mode(state: DetectorMode, detected: bool) -> DetectorMode:
    """Advance the mode state machine by one frame.

    Any successful detection snaps back to strict mode; enough consecutive
    misses loosen the bounds to catch distorted plates.
    """
    if detected:
        return DetectorMode(Mode.STRICT, 0)
    misses = state.consecutive_misses + 1
    mode = Mode.PERMISSIVE if misses >= MISS_LIMIT else Mode.STRICT
    return DetectorMode(mode, misses)


def measure_candidate(gray: np.ndarray, region: Region, source_method: str = "") -> Candidate:
    """Build a Candidate by measuring a region of a grayscale frame.

    Edge density is the Canny edge-pixel fraction inside the box; peaks come
    from the vertical projection of the Otsu-binarized crop.
    """
    crop = gray[region.y : region.y + region.h, region.x : region.x + region.w]
    edges = canny(crop)
    rho = float(edges.mean()) if edges.size else 0.0
    peaks = vertical_projection_peaks(binarize_otsu(crop))
    return Candidate(
        region=region,
        ar=region.w / region.h,
        area_frac=(region.w * region.h) / float(gray.size),
        edge_density=rho,
        peaks=peaks,
        source_method=source_method,
    )
