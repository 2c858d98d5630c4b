"""Camera pitch/roll estimation and foreshortening correction.

Pitch comes from the vertical offset of the vanishing point; roll from the
mean slope of supplied lane-line segments. Both tilt the plate relative to
the image plane, shrinking the measured character height by
cos(pitch) * cos(roll), which these helpers invert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

__all__ = [
    "PoseSource",
    "PoseEstimate",
    "LineSegment",
    "pitch_from_vanishing",
    "roll_from_segments",
    "correct_height",
    "compensated_distance",
    "pose_error_terms",
    "PoseSmoother",
    "load_segments",
    "MAX_PITCH_RAD",
    "MAX_ROLL_RAD",
]

# Plausibility bounds; anything larger is a corrupted estimate, not vehicle
# dynamics (a camera never pitches 20 degrees while following a car).
MAX_PITCH_RAD = 0.35
MAX_ROLL_RAD = 0.20
# Rejection thresholds used by the smoother (20 deg pitch, 11 deg roll).
REJECT_PITCH_RAD = 0.349
REJECT_ROLL_RAD = 0.192


class PoseSource(Enum):
    VANISHING_POINT = "vanishing_point"
    FALLBACK = "fallback"
    ZERO = "zero"


@dataclass(frozen=True)
class PoseEstimate:
    """Camera pitch and roll in radians."""

    phi: float = 0.0
    psi: float = 0.0
    source: PoseSource = PoseSource.ZERO

    def __post_init__(self) -> None:
        if abs(self.phi) > MAX_PITCH_RAD:
            raise ValueError(f"pitch {self.phi} rad outside plausible range")
        if abs(self.psi) > MAX_ROLL_RAD:
            raise ValueError(f"roll {self.psi} rad outside plausible range")

    @property
    def foreshortening(self) -> float:
        return math.cos(self.phi) * math.cos(self.psi)


ZERO_POSE = PoseEstimate()


@dataclass(frozen=True)
class LineSegment:
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self) -> None:
        if self.x1 == self.x2 and self.y1 == self.y2:
            raise ValueError("segment endpoints must be distinct")


def pitch_from_vanishing(v_inf: float, image_height: float, f: float) -> float:
    """Pitch from the vanishing point's vertical offset off image center."""
    if f <= 0:
        raise ValueError(f"focal length must be positive, got {f}")
    return math.atan((v_inf - image_height / 2.0) / f)


def roll_from_segments(segments: Sequence[LineSegment]) -> float:
    """Mean slope angle of the supplied segments.

    Raises on an empty list or a vertical segment; the caller falls back to
    zero roll in that case.
    """
    if not segments:
        raise ValueError("roll estimation needs at least one segment")
    angles = []
    for seg in segments:
        dx = seg.x2 - seg.x1
        if dx == 0:
            raise ValueError("vertical segment has undefined slope")
        angles.append(math.atan((seg.y2 - seg.y1) / dx))
    return sum(angles) / len(angles)


def correct_height(h_bar: float, pose: PoseEstimate) -> float:
    """Measured height back-projected to a fronto-parallel view: h / (cos*cos)."""
    return h_bar / pose.foreshortening


def compensated_distance(f: float, char_height_m: float, h_bar: float, pose: PoseEstimate) -> float:
    """Pose-compensated pinhole distance: (f * H / h) * cos(phi) * cos(psi)."""
    if h_bar <= 0:
        raise ValueError(f"measured height must be positive, got {h_bar}")
    return (f * char_height_m / h_bar) * pose.foreshortening


def pose_error_terms(phi: float, dphi: float, psi: float, dpsi: float) -> tuple[float, float]:
    """First-order relative distance error from angle uncertainty.

    Returns (tan(phi) * dphi, tan(psi) * dpsi); both vanish for an aligned
    camera, which is why pose errors barely matter near zero tilt.
    """
    return (math.tan(phi) * dphi, math.tan(psi) * dpsi)


class PoseSmoother:
    """Temporal smoothing and plausibility gating of per-frame pose.

    Implausible observations are rejected: the previous smoothed pose is
    held (source FALLBACK), or zero pose when nothing has been accepted
    yet. Accepted observations update an EMA with weight ``alpha`` on the
    running value.
    """

    def __init__(self, alpha: float = 0.8):
        if not 0.0 <= alpha < 1.0:
            raise ValueError(f"alpha must be in [0, 1), got {alpha}")
        self.alpha = alpha
        self._current: Optional[PoseEstimate] = None

    @property
    def current(self) -> PoseEstimate:
        return self._current if self._current is not None else ZERO_POSE

    def update(self, phi: float, psi: float) -> PoseEstimate:
        if abs(phi) > REJECT_PITCH_RAD or abs(psi) > REJECT_ROLL_RAD:
            if self._current is not None:
                self._current = PoseEstimate(self._current.phi, self._current.psi, PoseSource.FALLBACK)
                return self._current
            return ZERO_POSE
        prev = self._current
        if prev is None:
            smoothed = PoseEstimate(phi, psi, PoseSource.VANISHING_POINT)
        else:
            a = self.alpha
            smoothed = PoseEstimate(
                a * prev.phi + (1 - a) * phi,
                a * prev.psi + (1 - a) * psi,
                PoseSource.VANISHING_POINT,
            )
        self._current = smoothed
        return smoothed


def load_segments(path: str | Path) -> list[LineSegment]:
    """Read line segments from a text file, four numbers per line."""
    segments = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'x1 y1 x2 y2'")
        x1, y1, x2, y2 = (float(p) for p in parts)
        segments.append(LineSegment(x1, y1, x2, y2))
    return segments
