"""Camera intrinsics, lens presets, and focal-length calibration.

The focal length in pixels is the single scale anchor of every distance
estimate downstream: D = f * H / h for an object of physical height H
imaged at h pixels.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import median
from typing import Iterable, Sequence

__all__ = [
    "CameraModel",
    "LensPreset",
    "LENS_PRESETS",
    "CalibrationSample",
    "scale_focal",
    "calibrate_focal",
]


@dataclass(frozen=True)
class CameraModel:
    """Pinhole intrinsics at the working resolution."""

    f_px: float
    width_px: int
    height_px: int

    def __post_init__(self) -> None:
        if self.f_px <= 0:
            raise ValueError(f"focal length must be positive, got {self.f_px}")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError(
                f"image dimensions must be positive, got {self.width_px}x{self.height_px}"
            )

    def at_width(self, width_px: int, height_px: int | None = None) -> "CameraModel":
        """Rescale intrinsics to another capture width (focal scales linearly)."""
        if height_px is None:
            height_px = max(1, round(self.height_px * width_px / self.width_px))
        return CameraModel(
            f_px=scale_focal(self.f_px, self.width_px, width_px),
            width_px=width_px,
            height_px=height_px,
        )


@dataclass(frozen=True)
class LensPreset:
    """Datasheet lens variant with focal lengths at two reference widths."""

    name: str
    efl_mm: float
    f_at_2880: float
    f_at_1280: float

    def camera(self, width_px: int = 1280, height_px: int = 720) -> CameraModel:
        return CameraModel(
            f_px=scale_focal(self.f_at_2880, 2880, width_px),
            width_px=width_px,
            height_px=height_px,
        )


# Fixed-focal automotive lens variants; f columns are datasheet-derived at
# full (2880 px) and working (1280 px) sensor widths.
LENS_PRESETS: dict[str, LensPreset] = {
    "030H": LensPreset("030H", 16.37, 5457.0, 2425.0),
    "040H": LensPreset("040H", 11.90, 3967.0, 1763.0),
    "065H": LensPreset("065H", 7.90, 2633.0, 1170.0),
    "120H": LensPreset("120H", 4.49, 1497.0, 665.0),
}


@dataclass(frozen=True)
class CalibrationSample:
    """One calibration observation: a known target at a measured distance.

    ``char_height_m`` is the physical character height of the reference
    plate, ``h_bar_px`` the mean segmented character height in the image.
    """

    d_ref_m: float
    h_bar_px: float
    char_height_m: float

    def __post_init__(self) -> None:
        if self.d_ref_m <= 0 or self.h_bar_px <= 0 or self.char_height_m <= 0:
            raise ValueError(f"calibration sample fields must be positive: {self}")

    def focal_candidate(self) -> float:
        """Invert the pinhole model: f = h * D / H."""
        return self.h_bar_px * self.d_ref_m / self.char_height_m


def scale_focal(f_cal: float, w_cal: float, w_cap: float) -> float:
    """Rescale a calibrated focal length to a new capture width.

    The focal length in pixel units is proportional to the horizontal
    pixel count, so f_cap = f_cal * w_cap / w_cal.
    """
    if f_cal <= 0 or w_cal <= 0 or w_cap <= 0:
        raise ValueError(
            f"scale_focal arguments must be positive, got ({f_cal}, {w_cal}, {w_cap})"
        )
    return f_cal * w_cap / w_cal


def calibrate_focal(samples: Iterable[CalibrationSample] | Sequence[CalibrationSample]) -> float:
    """Aggregate per-sample focal candidates with the median.

    The median tolerates a single bad measurement in the usual
    three-distance protocol. For an even number of samples the median is
    the mean of the two central candidates.
    """
    candidates = [s.focal_candidate() for s in samples]
    if not candidates:
        raise ValueError("calibrate_focal requires at least one sample")
    return float(median(candidates))
