"""Grayscale and binary raster kernels.

Everything here is a pure input-to-output transform on small numpy arrays:
grayscale rasters are ``uint8`` arrays of shape (h, w); binary rasters are
``bool`` arrays of the same shape with True as foreground. Foreground means
"dark ink" for the thresholding binarizers and "edge" for the Canny one.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import ndimage

__all__ = [
    "BINARIZATION_METHODS",
    "Region",
    "binarize",
    "binarize_adaptive_gaussian",
    "binarize_otsu",
    "binarize_canny_dilate",
    "binarize_bilateral_otsu",
    "otsu_threshold",
    "canny",
    "bilateral_filter",
    "morph",
    "morph_open",
    "morph_close",
    "connected_components",
    "distance_transform",
    "warp_rectify",
    "resize_bicubic",
    "vertical_projection_peaks",
    "read_pgm",
    "write_pgm",
    "binary_to_gray",
]

BINARIZATION_METHODS = ("adaptive_gaussian", "otsu", "canny_dilate", "bilateral_otsu")

_CHAMFER_INF = np.int64(1) << 40


def _require_gray(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a non-empty 2-D raster, got shape {img.shape}")
    if img.dtype != np.uint8:
        if np.issubdtype(img.dtype, np.integer) and img.min() >= 0 and img.max() <= 255:
            img = img.astype(np.uint8)
        else:
            raise ValueError(f"expected uint8 intensities, got dtype {img.dtype}")
    return img


def _require_binary(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D binary raster, got shape {img.shape}")
    return img.astype(bool, copy=False)


# ---------------------------------------------------------------------------
# Binarization


def otsu_threshold(img: np.ndarray) -> int | None:
    """Global threshold maximizing between-class intensity variance.

    Classes split as {value <= t} vs {value > t}; the lowest maximizing t is
    returned. A zero-variance raster has no separating threshold and yields
    None.
    """
    img = _require_gray(img)
    hist = np.bincount(img.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    w0 = np.cumsum(hist)
    w1 = total - w0
    cum_i = np.cumsum(hist * np.arange(256))
    mu0 = np.divide(cum_i, w0, out=np.zeros(256), where=w0 > 0)
    mu1 = np.divide(cum_i[-1] - cum_i, w1, out=np.zeros(256), where=w1 > 0)
    between = w0 * w1 * (mu0 - mu1) ** 2
    if between.max() <= 0.0:
        return None
    return int(np.argmax(between))


def binarize_otsu(img: np.ndarray) -> np.ndarray:
    """Foreground = pixels at or below the Otsu threshold (the dark class)."""
    t = otsu_threshold(img)
    if t is None:
        return np.zeros(np.asarray(img).shape, dtype=bool)
    return np.asarray(img) <= t


def _gaussian_kernel_1d(window: int) -> np.ndarray:
    # sigma follows the usual ksize-derived convention: 0.3*((k-1)/2 - 1) + 0.8
    sigma = 0.3 * ((window - 1) * 0.5 - 1.0) + 0.8
    x = np.arange(window) - (window - 1) / 2.0
    k = np.exp(-(x**2) / (2.0 * sigma**2))
    return k / k.sum()


def binarize_adaptive_gaussian(img: np.ndarray, window: int = 11, c: float = 2.0) -> np.ndarray:
    """Threshold each pixel against the Gaussian-weighted mean of its window.

    Foreground = pixel strictly darker than (local mean - c). Handles uneven
    illumination where one global threshold fails.
    """
    img = _require_gray(img)
    if window < 3 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 3, got {window}")
    k = _gaussian_kernel_1d(window)
    local = ndimage.correlate1d(img.astype(np.float64), k, axis=0, mode="nearest")
    local = ndimage.correlate1d(local, k, axis=1, mode="nearest")
    return img < (local - c)


_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
_SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)


def _shifted(a: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """Array of a's values at (y+dy, x+dx), zero outside."""
    h, w = a.shape
    out = np.zeros_like(a)
    ys = slice(max(0, dy), min(h, h + dy))
    xs = slice(max(0, dx), min(w, w + dx))
    yd = slice(max(0, -dy), min(h, h - dy))
    xd = slice(max(0, -dx), min(w, w - dx))
    out[yd, xd] = a[ys, xs]
    return out


def canny(img: np.ndarray, low: float = 30.0, high: float = 100.0) -> np.ndarray:
    """Edge map via 3x3 Sobel, 4-direction non-maximum suppression, and
    strong/weak hysteresis.

    Weak pixels (magnitude >= low) survive only in 8-connected components
    that contain at least one strong pixel (magnitude >= high).
    """
    img = _require_gray(img)
    f = img.astype(np.float64)
    gx = ndimage.correlate(f, _SOBEL_X, mode="nearest")
    gy = ndimage.correlate(f, _SOBEL_Y, mode="nearest")
    mag = np.hypot(gx, gy)

    angle = np.mod(np.arctan2(gy, gx), np.pi)
    # Quantize gradient direction to 0, 45, 90, 135 degrees.
    bins = np.zeros(img.shape, dtype=np.uint8)
    bins[(angle >= np.pi / 8) & (angle < 3 * np.pi / 8)] = 1
    bins[(angle >= 3 * np.pi / 8) & (angle < 5 * np.pi / 8)] = 2
    bins[(angle >= 5 * np.pi / 8) & (angle < 7 * np.pi / 8)] = 3

    # Neighbor offsets (dy, dx) along the gradient for each direction bin.
    neighbor = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (1, -1)}
    keep = np.zeros(img.shape, dtype=bool)
    for b, (dy, dx) in neighbor.items():
        fwd = _shifted(mag, dy, dx)
        bwd = _shifted(mag, -dy, -dx)
        keep |= (bins == b) & (mag >= fwd) & (mag >= bwd)
    nms = np.where(keep, mag, 0.0)

    strong = nms >= high
    weak = nms >= low
    if not strong.any():
        return np.zeros(img.shape, dtype=bool)
    labels, n = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    good = np.zeros(n + 1, dtype=bool)
    good[np.unique(labels[strong])] = True
    good[0] = False
    return good[labels]


def binarize_canny_dilate(
    img: np.ndarray, low: float = 30.0, high: float = 100.0, kernel: int = 5
) -> np.ndarray:
    """Canny edges dilated with a square kernel to close broken contours."""
    edges = canny(img, low=low, high=high)
    return ndimage.binary_dilation(edges, structure=np.ones((kernel, kernel), dtype=bool))


def bilateral_filter(img: np.ndarray, d: int = 9, sigma: float = 75.0) -> np.ndarray:
    """Edge-preserving smoothing; one sigma drives both spatial and range terms."""
    img = _require_gray(img)
    if d < 1 or d % 2 == 0:
        raise ValueError(f"diameter must be odd and >= 1, got {d}")
    r = d // 2
    f = img.astype(np.float64)
    padded = np.pad(f, r, mode="edge")
    num = np.zeros_like(f)
    den = np.zeros_like(f)
    inv2s2 = 1.0 / (2.0 * sigma * sigma)
    h, w = f.shape
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            shifted = padded[r + dy : r + dy + h, r + dx : r + dx + w]
            weight = np.exp(-(dy * dy + dx * dx) * inv2s2 - (shifted - f) ** 2 * inv2s2)
            num += weight * shifted
            den += weight
    out = num / den
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def binarize_bilateral_otsu(img: np.ndarray, d: int = 9, sigma: float = 75.0) -> np.ndarray:
    return binarize_otsu(bilateral_filter(img, d=d, sigma=sigma))


def binarize(img: np.ndarray, method: str, **params) -> np.ndarray:
    """Dispatch to one of the four binarization pipelines by name."""
    if method == "adaptive_gaussian":
        return binarize_adaptive_gaussian(img, **params)
    if method == "otsu":
        return binarize_otsu(img, **params)
    if method == "canny_dilate":
        return binarize_canny_dilate(img, **params)
    if method == "bilateral_otsu":
        return binarize_bilateral_otsu(img, **params)
    raise ValueError(f"unknown binarization method {method!r}; expected one of {BINARIZATION_METHODS}")


# ---------------------------------------------------------------------------
# Morphology and components


def morph(img: np.ndarray, op: str, kernel: int = 3) -> np.ndarray:
    """Morphological open (erode then dilate) or close (dilate then erode).

    Erosion treats everything outside the raster as background, so
    foreground touching the border erodes away.
    """
    img = _require_binary(img)
    structure = np.ones((kernel, kernel), dtype=bool)
    if op == "open":
        eroded = ndimage.binary_erosion(img, structure=structure, border_value=0)
        return ndimage.binary_dilation(eroded, structure=structure, border_value=0)
    if op == "close":
        dilated = ndimage.binary_dilation(img, structure=structure, border_value=0)
        return ndimage.binary_erosion(dilated, structure=structure, border_value=0)
    raise ValueError(f"unknown morphology op {op!r}; expected 'open' or 'close'")


def morph_open(img: np.ndarray, kernel: int = 3) -> np.ndarray:
    return morph(img, "open", kernel)


def morph_close(img: np.ndarray, kernel: int = 3) -> np.ndarray:
    return morph(img, "close", kernel)


@dataclass(frozen=True)
class Region:
    """Axis-aligned bounding box and pixel count of one connected component."""

    x: int
    y: int
    w: int
    h: int
    area: int

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + (self.w - 1) / 2.0, self.y + (self.h - 1) / 2.0)

    @property
    def aspect(self) -> float:
        return self.w / self.h


def connected_components(img: np.ndarray) -> list[Region]:
    """8-connected foreground components, ordered by (bbox.y, bbox.x)."""
    img = _require_binary(img)
    if img.size == 0 or not img.any():
        return []
    labels, n = ndimage.label(img, structure=np.ones((3, 3), dtype=bool))
    areas = np.bincount(labels.ravel())
    regions = []
    for i, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        ys, xs = sl
        regions.append(
            Region(
                x=int(xs.start),
                y=int(ys.start),
                w=int(xs.stop - xs.start),
                h=int(ys.stop - ys.start),
                area=int(areas[i]),
            )
        )
    regions.sort(key=lambda r: (r.y, r.x))
    return regions


# ---------------------------------------------------------------------------
# Distance transform


def distance_transform(img: np.ndarray) -> np.ndarray:
    """Two-pass 3-4 chamfer distance to the background, scaled by 1/3.

    Pixels outside the raster count as background, so border foreground is
    at distance 1. Background pixels map to 0. The 3-4 chamfer stays within
    about 8% of true Euclidean distance, plenty for stroke-width use.
    """
    img = _require_binary(img)
    h, w = img.shape
    # Pad with a background ring so out-of-bounds reads become distance 0.
    d = np.where(img, _CHAMFER_INF, np.int64(0))
    d = np.pad(d, 1, mode="constant", constant_values=0)
    steps = 3 * np.arange(w + 2, dtype=np.int64)

    for y in range(1, h + 1):
        prev = d[y - 1]
        cand = np.minimum(d[y], prev + 3)
        cand = np.minimum(cand, np.concatenate(([_CHAMFER_INF], prev[:-1])) + 4)
        cand = np.minimum(cand, np.concatenate((prev[1:], [_CHAMFER_INF])) + 4)
        # Left-to-right chains of +3 steps collapse to a running minimum.
        d[y] = np.minimum.accumulate(cand - steps) + steps

    for y in range(h, 0, -1):
        nxt = d[y + 1]
        cand = np.minimum(d[y], nxt + 3)
        cand = np.minimum(cand, np.concatenate(([_CHAMFER_INF], nxt[:-1])) + 4)
        cand = np.minimum(cand, np.concatenate((nxt[1:], [_CHAMFER_INF])) + 4)
        rev = cand[::-1] - steps
        d[y] = (np.minimum.accumulate(rev) + steps)[::-1]

    return d[1:-1, 1:-1].astype(np.float64) / 3.0


# ---------------------------------------------------------------------------
# Geometry


def _homography_from_rect(corners: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Solve the 3x3 map from the output rectangle onto the source quad."""
    dst = np.array(
        [[0.0, 0.0], [out_w - 1.0, 0.0], [out_w - 1.0, out_h - 1.0], [0.0, out_h - 1.0]]
    )
    src = corners
    a = np.zeros((8, 8))
    b = np.zeros(8)
    for i, ((u, v), (x, y)) in enumerate(zip(dst, src)):
        a[2 * i] = [u, v, 1, 0, 0, 0, -u * x, -v * x]
        b[2 * i] = x
        a[2 * i + 1] = [0, 0, 0, u, v, 1, -u * y, -v * y]
        b[2 * i + 1] = y
    try:
        hvec = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise ValueError("degenerate corner configuration") from exc
    return np.append(hvec, 1.0).reshape(3, 3)


def warp_rectify(
    img: np.ndarray, corners: Sequence[Sequence[float]], out_w: int, out_h: int
) -> np.ndarray:
    """Rectify the quad spanned by four corners to (out_h, out_w).

    Corners are (x, y) points in TL, TR, BR, BL order. Sampling is bilinear;
    output pixels that map outside the source become 0.
    """
    img = _require_gray(img)
    pts = np.asarray(corners, dtype=np.float64)
    if pts.shape != (4, 2):
        raise ValueError(f"expected 4 (x, y) corners, got shape {pts.shape}")
    # Any collinear corner triple makes the quad degenerate.
    for i in range(4):
        tri = np.delete(pts, i, axis=0)
        u = tri[1] - tri[0]
        v = tri[2] - tri[0]
        if abs(u[0] * v[1] - u[1] * v[0]) < 1e-9:
            raise ValueError("degenerate (collinear) corners")
    if out_w < 1 or out_h < 1:
        raise ValueError("output size must be positive")

    hmat = _homography_from_rect(pts, out_w, out_h)
    uu, vv = np.meshgrid(np.arange(out_w, dtype=np.float64), np.arange(out_h, dtype=np.float64))
    denom = hmat[2, 0] * uu + hmat[2, 1] * vv + hmat[2, 2]
    x = (hmat[0, 0] * uu + hmat[0, 1] * vv + hmat[0, 2]) / denom
    y = (hmat[1, 0] * uu + hmat[1, 1] * vv + hmat[1, 2]) / denom

    # Snap float-epsilon wobble so identity corner sets copy bit-exactly.
    x = np.where(np.abs(x - np.rint(x)) < 1e-9, np.rint(x), x)
    y = np.where(np.abs(y - np.rint(y)) < 1e-9, np.rint(y), y)

    h, w = img.shape
    inside = (x >= 0) & (x <= w - 1) & (y >= 0) & (y <= h - 1)
    x0 = np.clip(np.floor(x).astype(int), 0, w - 1)
    y0 = np.clip(np.floor(y).astype(int), 0, h - 1)
    x1 = np.clip(x0 + 1, 0, w - 1)
    y1 = np.clip(y0 + 1, 0, h - 1)
    fx = np.clip(x, 0, w - 1) - x0
    fy = np.clip(y, 0, h - 1) - y0

    f = img.astype(np.float64)
    val = (
        f[y0, x0] * (1 - fx) * (1 - fy)
        + f[y0, x1] * fx * (1 - fy)
        + f[y1, x0] * (1 - fx) * fy
        + f[y1, x1] * fx * fy
    )
    val[~inside] = 0.0
    return np.clip(np.rint(val), 0, 255).astype(np.uint8)


def _cubic_weights(t: np.ndarray) -> np.ndarray:
    """Keys cubic-convolution weights (a = -0.5) for taps at -1, 0, 1, 2."""
    a = -0.5
    d = np.stack([t + 1.0, t, 1.0 - t, 2.0 - t])
    ad = np.abs(d)
    w = np.where(
        ad <= 1.0,
        (a + 2.0) * ad**3 - (a + 3.0) * ad**2 + 1.0,
        a * ad**3 - 5.0 * a * ad**2 + 8.0 * a * ad - 4.0 * a,
    )
    w[np.abs(d) >= 2.0] = 0.0
    return w


def _resize_matrix(n_in: int, n_out: int) -> np.ndarray:
    """Row-interpolation matrix mapping n_in samples to n_out (align-corners)."""
    m = np.zeros((n_out, n_in))
    if n_out == 1:
        m[0, 0] = 1.0
        return m
    src = np.arange(n_out) * (n_in - 1) / (n_out - 1)
    base = np.floor(src).astype(int)
    t = src - base
    weights = _cubic_weights(t)
    for tap in range(4):
        idx = np.clip(base + tap - 1, 0, n_in - 1)
        np.add.at(m, (np.arange(n_out), idx), weights[tap])
    return m


def resize_bicubic(img: np.ndarray, factor: float) -> np.ndarray:
    """Upscale by a factor >= 1 with bicubic (cubic-convolution) interpolation.

    The interpolating kernel is exact at integer knots, so a factor of 1
    returns an identical raster and source grid points are preserved.
    """
    img = _require_gray(img)
    if factor < 1.0:
        raise ValueError(f"resize factor must be >= 1, got {factor}")
    h, w = img.shape
    out_h = max(1, round(h * factor))
    out_w = max(1, round(w * factor))
    if (out_h, out_w) == (h, w):
        return img.copy()
    wr = _resize_matrix(h, out_h)
    wc = _resize_matrix(w, out_w)
    out = wr @ img.astype(np.float64) @ wc.T
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


# ---------------------------------------------------------------------------
# Projection profile


def vertical_projection_peaks(img: np.ndarray) -> int:
    """Count distinct peaks in the column-sum profile.

    A peak is a maximal run of columns whose sum exceeds half of the profile
    maximum, separated from the next run by at least one weaker column.
    """
    img = _require_binary(img)
    profile = img.sum(axis=0)
    peak = profile.max(initial=0)
    if peak <= 0:
        return 0
    above = profile > 0.5 * peak
    return int(np.count_nonzero(above[1:] & ~above[:-1]) + int(above[0]))


# ---------------------------------------------------------------------------
# PGM I/O


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    """Write an 8-bit grayscale raster as binary PGM (P5)."""
    img = _require_gray(img)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def binary_to_gray(img: np.ndarray) -> np.ndarray:
    """Binary raster as {0, 255} grayscale (foreground = 255)."""
    return np.where(_require_binary(img), 255, 0).astype(np.uint8)


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary PGM (P5) with maxval 255; tolerates header comments."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a P5 PGM file")
    tokens: list[int] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        tokens.append(int(data[start:pos]))
    pos += 1  # single whitespace after maxval
    w, h, maxval = tokens
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 supported, got {maxval}")
    raster = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=pos)
    if raster.size != w * h:
        raise ValueError(f"{path}: expected {w * h} pixels, got {raster.size}")
    return raster.reshape(h, w).copy()
