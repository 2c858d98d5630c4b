"""Dual-threshold character segmentation and typographic measurements.

Runs adaptive-Gaussian and Otsu binarization in parallel on the rectified
plate, filters components with five geometric criteria, rejects height
outliers, and keeps whichever method retained more characters. Heights,
widths, and gaps are reported in original-plate pixel units regardless of
any internal upscale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import (
    Region,
    binarize_adaptive_gaussian,
    binarize_otsu,
    connected_components,
    distance_transform,
    morph_close,
    morph_open,
    resize_bicubic,
)

__all__ = [
    "CharSet",
    "SegmentationError",
    "segment_characters",
    "mean_height",
    "stroke_width",
    "spacing",
    "MIN_CHARS",
    "UPSCALE_TARGET_PX",
]

MIN_CHARS = 3
# Plates shorter than this get a bicubic upscale before thresholding.
UPSCALE_TARGET_PX = 100.0
_METHODS = ("adaptive_gaussian", "otsu")


class SegmentationError(RuntimeError):
    """Fewer than the minimum number of characters survived filtering."""


@dataclass(frozen=True)
class CharSet:
    """Surviving character boxes and their measurements.

    ``boxes`` and the binary rasters live in the working (possibly
    upscaled) frame; ``heights``, ``widths``, and ``gaps`` are already
    divided by ``upscale`` and so are in original-plate pixels. ``gaps``
    holds consecutive center-to-center x distances (n - 1 values).

    ``binary`` is the winning method's cleaned raster (what the boxes were
    extracted from). ``binary_global`` is the global-threshold (Otsu)
    branch, which keeps wide strokes solid where the adaptive threshold
    hollows them out; it is the right mask for stroke-width measurement.
    """

    boxes: tuple[tuple[int, int, int, int], ...]
    heights: np.ndarray
    widths: np.ndarray
    gaps: np.ndarray
    n: int
    method: str
    upscale: float
    binary: np.ndarray
    binary_global: np.ndarray

    def __post_init__(self) -> None:
        if self.n < MIN_CHARS:
            raise ValueError(f"CharSet requires >= {MIN_CHARS} characters, got {self.n}")
        if len(self.heights) != self.n or len(self.boxes) != self.n:
            raise ValueError("boxes/heights length mismatch")


def _passes_filters(r: Region, plate_h: float) -> bool:
    """The five geometric character criteria, evaluated in the working frame."""
    if not (0.2 * plate_h <= r.h <= 0.8 * plate_h):
        return False  # top/bottom strips and the plate border
    if r.w >= 1.8 * r.h:
        return False  # merged characters
    if not (0.15 <= r.w / r.h <= 1.5):
        return False  # thinner than 'I' or wider than 'W'
    if r.h < 5 or r.w < 2:
        return False  # noise blobs
    cy = r.y + (r.h - 1) / 2.0
    if not (0.1 * plate_h <= cy <= 0.9 * plate_h):
        return False  # reflections near the frame edges
    return True


def _reject_height_outliers(regions: list[Region]) -> list[Region]:
    """Single-pass 2-sigma rejection on the height set (population std).

    The rejection band is floored at one pixel: bounding-box heights are
    integer-quantized, so among otherwise identical characters a single
    rounding straggler sits at sqrt(n-1) sigma and would be rejected on
    quantization noise alone.
    """
    if not regions:
        return regions
    heights = np.array([r.h for r in regions], dtype=np.float64)
    mu = heights.mean()
    band = max(2.0 * heights.std(), 1.0)
    keep = np.abs(heights - mu) <= band
    return [r for r, k in zip(regions, keep) if k]


def segment_characters(
    plate: np.ndarray,
    *,
    min_chars: int = MIN_CHARS,
    force_upscale: float | None = None,
) -> CharSet:
    """Segment characters from a rectified grayscale plate.

    Small plates are upscaled to at least 100 px height first (by a factor
    of at least 2). Both thresholding methods run independently; whichever
    keeps more characters after outlier rejection wins, with ties going to
    adaptive Gaussian. Raises :class:`SegmentationError` when fewer than
    ``min_chars`` characters survive.
    """
    plate = np.asarray(plate)
    if plate.ndim != 2 or plate.size == 0:
        raise ValueError(f"expected a non-empty 2-D plate raster, got shape {plate.shape}")

    h_p = plate.shape[0]
    if force_upscale is not None:
        factor = float(force_upscale)
    elif h_p < UPSCALE_TARGET_PX:
        factor = max(2.0, UPSCALE_TARGET_PX / h_p)
    else:
        factor = 1.0
    working = resize_bicubic(plate, factor) if factor != 1.0 else plate
    working_h = float(working.shape[0])

    results: dict[str, tuple[list[Region], np.ndarray]] = {}
    for method in _METHODS:
        if method == "adaptive_gaussian":
            binary = binarize_adaptive_gaussian(working)
        else:
            binary = binarize_otsu(working)
        cleaned = morph_close(morph_open(binary))
        regions = [r for r in connected_components(cleaned) if _passes_filters(r, working_h)]
        results[method] = (_reject_height_outliers(regions), cleaned)

    # Tie goes to adaptive Gaussian, the first entry.
    winner = max(_METHODS, key=lambda m: len(results[m][0]))
    regions, binary = results[winner]
    if len(regions) < min_chars:
        raise SegmentationError(
            f"only {len(regions)} characters survived filtering (need {min_chars})"
        )

    regions.sort(key=lambda r: r.x)
    heights = np.array([r.h for r in regions], dtype=np.float64) / factor
    widths = np.array([r.w for r in regions], dtype=np.float64) / factor
    centers = np.array([r.center[0] for r in regions], dtype=np.float64)
    gaps = np.diff(centers) / factor

    return CharSet(
        boxes=tuple(r.bbox for r in regions),
        heights=heights,
        widths=widths,
        gaps=gaps,
        n=len(regions),
        method=winner,
        upscale=factor,
        binary=binary,
        binary_global=results["otsu"][1],
    )


def mean_height(cs: CharSet) -> float:
    """Arithmetic mean of the surviving character heights, original px."""
    return float(cs.heights.mean())


def stroke_width(plate_bin: np.ndarray, cs: CharSet) -> float:
    """Stroke width as twice the median in-character distance to background.

    ``plate_bin`` must be a binary raster in the CharSet's working frame;
    ``cs.binary_global`` is the natural argument since a global threshold
    keeps stroke interiors solid. The result is reported in original-plate
    pixels.
    """
    plate_bin = np.asarray(plate_bin).astype(bool)
    mask = np.zeros_like(plate_bin)
    for x, y, w, h in cs.boxes:
        mask[y : y + h, x : x + w] = True
    inside = plate_bin & mask
    if not inside.any():
        raise ValueError("no foreground pixels inside character boxes")
    dist = distance_transform(plate_bin)
    return float(2.0 * np.median(dist[inside])) / cs.upscale


def spacing(cs: CharSet) -> float:
    """Mean center-to-center distance of adjacent characters, original px."""
    if cs.n < MIN_CHARS:
        raise ValueError(f"spacing requires >= {MIN_CHARS} characters")
    return float(cs.gaps.mean())
