"""Deterministic synthetic data generation and the end-to-end pipeline run.

The simulator plays the role of the camera, the depth network, and the
ground-truth rig at once: it produces plate observations at known distances,
a drifting noisy relative-depth signal, and per-frame truth for scoring.
Runs are reproducible bit-for-bit from a single seed (numpy PCG64 via
``numpy.random.default_rng``; all draws happen in a fixed per-frame order).

Two observation paths exist. The default measurement-level path samples
character heights (and stroke/gap readings) directly around their true
values, mirroring what segmentation would measure without paying for
rasterization on every frame. The raster path (``PipelineConfig.use_raster``)
renders each frame with :func:`render_plate` and runs the real segmentation
stack; it is the slower, fully end-to-end variant used for validation.
"""

from __future__ import annotations

import configparser
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional

import numpy as np

from .camera import CameraModel
from .fusion import (
    ScaleTracker,
    TrackState,
    deep_metric,
    fuse_geo_deep,
    kalman_step,
    optical_cross_check,
    safety,
    update_scale,
)
from .pose import (
    ZERO_POSE,
    LineSegment,
    PoseEstimate,
    PoseSmoother,
    pitch_from_vanishing,
    roll_from_segments,
)
from .ranging import SIGMA_COEFF, Feature, feature_estimates, fuse_features
from .segment import SegmentationError, mean_height, segment_characters, spacing, stroke_width
from .states import StateSpec, StateTable

__all__ = [
    "Scenario",
    "FrameTruth",
    "PlateRender",
    "PipelineConfig",
    "FrameRecord",
    "SessionLog",
    "render_plate",
    "gen_frames",
    "run_pipeline",
    "load_scenario",
    "sample_char_heights",
    "PLATE_HEIGHT_M",
    "PLATE_WIDTH_M",
]

PLATE_HEIGHT_M = 0.152
PLATE_WIDTH_M = 0.305

_BACKGROUND = 225.0
_INK = 25.0
_SEG_FLOOR_PX = 5.0


@dataclass(frozen=True)
class Scenario:
    """One synthetic driving episode.

    ``v_profile`` is piecewise-constant relative velocity as (t_start, v)
    pairs; ``occlusions`` are (start_s, length_s) windows during which the
    plate is invisible to the geometric branch. ``depth_scale_true`` is the
    hidden meters-per-unit scale of the relative-depth signal, deliberately
    not 1 so the EMA alignment has to earn its keep.
    """

    duration_s: float
    d0_m: float
    fps: float = 25.0
    v_profile: tuple[tuple[float, float], ...] = ((0.0, 0.0),)
    occlusions: tuple[tuple[float, float], ...] = ()
    phi_rad: float | Callable[[float], float] = 0.0
    psi_rad: float | Callable[[float], float] = 0.0
    sigma_h_px: float = 0.0
    sigma_stroke_rel: float = 0.0
    sigma_gap_rel: float = 0.0
    sigma_depth: float = 0.0
    depth_drift_per_s: float = 0.0
    sigma_intensity: float = 0.0
    depth_scale_true: float = 0.7
    state_id: str = "michigan"
    n_chars: int = 7
    seed: int = 0

    def __post_init__(self) -> None:
        if self.fps <= 0 or self.duration_s <= 0 or self.d0_m <= 0:
            raise ValueError("fps, duration, and initial distance must be positive")
        for start, length in self.occlusions:
            if start < 0 or length <= 0 or start + length > self.duration_s:
                raise ValueError(f"occlusion ({start}, {length}) outside scenario duration")

    @property
    def n_frames(self) -> int:
        return int(round(self.duration_s * self.fps))

    @property
    def dt(self) -> float:
        return 1.0 / self.fps

    def velocity_at(self, t: float) -> float:
        v = 0.0
        for t_start, value in sorted(self.v_profile):
            if t >= t_start:
                v = value
        return v

    def occluded_at(self, t: float) -> bool:
        return any(start <= t < start + length for start, length in self.occlusions)

    def pose_at(self, t: float) -> tuple[float, float]:
        phi = self.phi_rad(t) if callable(self.phi_rad) else self.phi_rad
        psi = self.psi_rad(t) if callable(self.psi_rad) else self.psi_rad
        return (float(phi), float(psi))


@dataclass(frozen=True)
class FrameTruth:
    """Ground truth for one frame, plus the injected relative-depth reading."""

    index: int
    t: float
    d_true: float
    v_true: float
    occluded: bool
    h_true: float
    d_plate: float
    phi: float
    psi: float


def truth_stream_rng(seed: int) -> np.random.Generator:
    """Generator for the truth/depth stream of a run.

    Kept separate from the measurement-noise stream so that
    :func:`gen_frames` replayed standalone reproduces exactly the truth a
    :func:`run_pipeline` call saw for the same seed.
    """
    return np.random.default_rng(np.random.SeedSequence((seed, 0)))


def measurement_rng(seed: int) -> np.random.Generator:
    """Generator for the per-frame observation noise of a run."""
    return np.random.default_rng(np.random.SeedSequence((seed, 1)))


def gen_frames(
    scenario: Scenario,
    camera: CameraModel,
    spec: StateSpec,
    rng: Optional[np.random.Generator] = None,
) -> Iterator[FrameTruth]:
    """Integrate the scenario into a stream of per-frame truth.

    ``h_true`` is the foreshortened character height in pixels at the
    camera's focal length; ``d_plate`` is the relative-depth reading with
    its slow multiplicative drift and additive noise applied.
    """
    if rng is None:
        rng = truth_stream_rng(scenario.seed)
    d = scenario.d0_m
    dt = scenario.dt
    for k in range(scenario.n_frames):
        t = k * dt
        if d <= 0.1:
            raise ValueError(f"scenario drives distance to {d:.3f} m at t={t:.2f} s")
        phi, psi = scenario.pose_at(t)
        shorten = math.cos(phi) * math.cos(psi)
        h_true = camera.f_px * spec.char_height_m * shorten / d
        d_plate = d / scenario.depth_scale_true * (1.0 + scenario.depth_drift_per_s * t)
        if scenario.sigma_depth > 0:
            d_plate += rng.normal(0.0, scenario.sigma_depth)
        d_plate = max(d_plate, 1e-6)
        yield FrameTruth(
            index=k,
            t=t,
            d_true=d,
            v_true=scenario.velocity_at(t),
            occluded=scenario.occluded_at(t),
            h_true=h_true,
            d_plate=d_plate,
            phi=phi,
            psi=psi,
        )
        d += scenario.velocity_at(t) * dt


# ---------------------------------------------------------------------------
# Plate rendering


@dataclass(frozen=True)
class PlateRender:
    """Rendered plate raster with its ground-truth glyph geometry."""

    image: np.ndarray
    boxes: tuple[tuple[float, float, float, float], ...]
    glyph_heights: np.ndarray
    below_floor: bool


def _axis_coverage(n: int, lo: float, hi: float) -> np.ndarray:
    idx = np.arange(n, dtype=np.float64)
    return np.clip(np.minimum(hi, idx + 1.0) - np.maximum(lo, idx), 0.0, 1.0)


def render_plate(
    spec: StateSpec,
    f: float,
    d: float,
    pose: PoseEstimate | None = None,
    *,
    sigma_h: float = 0.0,
    sigma_intensity: float = 0.0,
    rng: Optional[np.random.Generator] = None,
    n_chars: int = 7,
    border: bool = True,
) -> PlateRender:
    """Rasterize a plate of block glyphs as seen from distance ``d``.

    Glyphs are solid vertical bars of width height/6 at the jurisdiction's
    glyph pitch, drawn with box-coverage anti-aliasing. Their vertical
    positions are staggered by sub-pixel offsets so the mean measured
    height is not locked to the pixel grid. All plate dimensions carry the
    pose foreshortening factor. Glyphs shorter than 5 px render anyway but
    set ``below_floor``.
    """
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    if rng is None:
        rng = np.random.default_rng(0)
    shorten = pose.foreshortening if pose is not None else 1.0
    px_per_m = f * shorten / d

    plate_h = PLATE_HEIGHT_M * px_per_m
    plate_w = PLATE_WIDTH_M * px_per_m
    height = max(8, int(round(plate_h)))
    width = max(16, int(round(plate_w)))
    img = np.full((height, width), _BACKGROUND, dtype=np.float64)

    if border:
        t = max(1, int(round(height * 0.03)))
        img[:t, :] = _INK
        img[-t:, :] = _INK
        img[:, :t] = _INK
        img[:, -t:] = _INK

    h_nominal = spec.char_height_m * px_per_m
    pitch = spec.char_gap_m * px_per_m
    heights = np.full(n_chars, h_nominal)
    if sigma_h > 0:
        heights = heights + rng.normal(0.0, sigma_h, size=n_chars)
    heights = np.maximum(heights, 1.0)

    boxes = []
    for i in range(n_chars):
        h_i = float(heights[i])
        w_i = max(2.0, h_i / 6.0)
        cx = width / 2.0 + (i - (n_chars - 1) / 2.0) * pitch
        x0 = cx - w_i / 2.0
        stagger = (i + 0.5) / n_chars - 0.5
        y0 = (height - h_i) / 2.0 + stagger
        cov_y = _axis_coverage(height, y0, y0 + h_i)
        cov_x = _axis_coverage(width, x0, x0 + w_i)
        img -= (_BACKGROUND - _INK) * np.outer(cov_y, cov_x)
        boxes.append((x0, y0, w_i, h_i))

    if sigma_intensity > 0:
        img += rng.normal(0.0, sigma_intensity, size=img.shape)

    return PlateRender(
        image=np.clip(np.rint(img), 0, 255).astype(np.uint8),
        boxes=tuple(boxes),
        glyph_heights=heights,
        below_floor=bool(heights.min() < _SEG_FLOOR_PX),
    )


# ---------------------------------------------------------------------------
# Measurement-level observation model


def _reject_2sigma(values: np.ndarray) -> np.ndarray:
    """Single-pass two-sigma rejection with the same 1 px band floor the
    raster segmentation applies."""
    mu = values.mean()
    band = max(2.0 * values.std(), 1.0)
    return values[np.abs(values - mu) <= band]


def sample_char_heights(
    h_true: float, n: int, sigma_h: float, rng: np.random.Generator
) -> np.ndarray:
    """Per-character height readings around truth, after outlier rejection."""
    heights = h_true + rng.normal(0.0, sigma_h, size=n) if sigma_h > 0 else np.full(n, h_true)
    return _reject_2sigma(heights)


# ---------------------------------------------------------------------------
# Pipeline


@dataclass
class PipelineConfig:
    """Everything the per-frame pipeline needs besides the scenario."""

    camera: CameraModel
    table: Optional[StateTable] = None
    assumed_state: Optional[str] = None  # None = trust the scenario's state
    pose_compensation: bool = True
    deep_fusion: bool = True
    kalman: bool = True
    optical_check: bool = True
    use_raster: bool = False
    burn_in_frames: int = 50

    def resolve_table(self) -> StateTable:
        if self.table is None:
            self.table = StateTable.bundled()
        return self.table


CSV_COLUMNS = (
    "frame",
    "t",
    "D_true",
    "v_true",
    "occluded",
    "h_bar",
    "D_geo",
    "D_deep",
    "D_fused",
    "D_hat",
    "v_hat",
    "ttc",
    "level",
    "flags",
)


@dataclass(frozen=True)
class FrameRecord:
    frame: int
    t: float
    d_true: float
    v_true: float
    occluded: bool
    h_bar: Optional[float]
    d_geo: Optional[float]
    d_deep: Optional[float]
    d_fused: Optional[float]
    d_hat: Optional[float]
    v_hat: Optional[float]
    ttc: Optional[float]
    level: str
    flags: tuple[str, ...]

    def as_csv_row(self) -> list[str]:
        def num(x: Optional[float]) -> str:
            return "" if x is None else f"{x:.6f}"

        return [
            str(self.frame),
            f"{self.t:.4f}",
            f"{self.d_true:.6f}",
            f"{self.v_true:.6f}",
            "1" if self.occluded else "0",
            num(self.h_bar),
            num(self.d_geo),
            num(self.d_deep),
            num(self.d_fused),
            num(self.d_hat),
            num(self.v_hat),
            num(self.ttc),
            self.level,
            ";".join(self.flags),
        ]


@dataclass
class SessionLog:
    """Per-frame pipeline outputs plus run metadata and summary statistics.

    ``scale_trace`` records the depth-scale factor after each frame (NaN
    until initialized); it is diagnostic state, deliberately not part of
    the fixed CSV schema.
    """

    rows: list[FrameRecord]
    metadata: dict
    scale_trace: np.ndarray = field(default_factory=lambda: np.empty(0))

    def column(self, name: str) -> np.ndarray:
        """Numeric column as float array with NaN for missing values."""
        attr = {
            "frame": "frame",
            "t": "t",
            "D_true": "d_true",
            "v_true": "v_true",
            "occluded": "occluded",
            "h_bar": "h_bar",
            "D_geo": "d_geo",
            "D_deep": "d_deep",
            "D_fused": "d_fused",
            "D_hat": "d_hat",
            "v_hat": "v_hat",
            "ttc": "ttc",
        }[name]
        out = np.full(len(self.rows), np.nan)
        for i, row in enumerate(self.rows):
            value = getattr(row, attr)
            if value is not None:
                out[i] = float(value)
        return out

    def levels(self) -> list[str]:
        return [row.level for row in self.rows]

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in self.rows:
                writer.writerow(row.as_csv_row())

    def summary(self, burn_in: int = 50) -> dict:
        d_true = self.column("D_true")
        fused = self.column("D_fused")
        geo = self.column("D_geo")
        hat = self.column("D_hat")
        occluded = self.column("occluded") > 0.5

        def _mae(est: np.ndarray, mask: np.ndarray) -> Optional[float]:
            mask = mask & np.isfinite(est)
            if not mask.any():
                return None
            return float(np.abs(est[mask] - d_true[mask]).mean())

        def _rel(est: np.ndarray, mask: np.ndarray) -> Optional[float]:
            mask = mask & np.isfinite(est)
            if not mask.any():
                return None
            return float((np.abs(est[mask] - d_true[mask]) / d_true[mask]).mean())

        everywhere = np.ones(len(self.rows), dtype=bool)
        steady = np.arange(len(self.rows)) >= burn_in
        out = {
            "n_frames": len(self.rows),
            "occluded_fraction": float(occluded.mean()) if len(self.rows) else 0.0,
            "fused_coverage": float(np.isfinite(fused).mean()) if len(self.rows) else 0.0,
            "mae_geo_m": _mae(geo, everywhere),
            "mae_geo_rel": _rel(geo, everywhere),
            "mae_fused_m": _mae(fused, everywhere),
            "mae_fused_rel": _rel(fused, everywhere),
            "rmse_fused_m": None,
            "mae_fused_visible_m": _mae(fused, ~occluded),
            "mae_fused_occluded_m": _mae(fused, occluded),
            "std_raw_m": None,
            "std_smoothed_m": None,
            "burn_in": burn_in,
        }
        ok = np.isfinite(fused)
        if ok.any():
            out["rmse_fused_m"] = float(np.sqrt(((fused[ok] - d_true[ok]) ** 2).mean()))
        raw_mask = steady & np.isfinite(fused)
        if raw_mask.any():
            out["std_raw_m"] = float((fused[raw_mask] - d_true[raw_mask]).std())
        hat_mask = steady & np.isfinite(hat)
        if hat_mask.any():
            out["std_smoothed_m"] = float((hat[hat_mask] - d_true[hat_mask]).std())
        return out

    def write(self, out_dir: str | Path, stem: str = "session") -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{stem}.csv"
        json_path = out_dir / f"{stem}.json"
        self.to_csv(csv_path)
        payload = {"metadata": self.metadata, "summary": self.summary()}
        json_path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        return (csv_path, json_path)


def _observe_raster(
    truth: FrameTruth,
    scenario: Scenario,
    spec_true: StateSpec,
    camera: CameraModel,
    rng: np.random.Generator,
) -> tuple[Optional[float], Optional[float], Optional[float], list[str]]:
    flags: list[str] = []
    render = render_plate(
        spec_true,
        camera.f_px,
        truth.d_true,
        PoseEstimate(truth.phi, truth.psi),
        sigma_h=scenario.sigma_h_px,
        sigma_intensity=scenario.sigma_intensity,
        rng=rng,
        n_chars=scenario.n_chars,
    )
    if render.below_floor:
        flags.append("below_floor")
    try:
        cs = segment_characters(render.image)
    except SegmentationError:
        flags.append("seg_fail")
        return (None, None, None, flags)
    return (mean_height(cs), stroke_width(cs.binary_global, cs), spacing(cs), flags)


def _observe_measurements(
    truth: FrameTruth,
    scenario: Scenario,
    spec_true: StateSpec,
    camera: CameraModel,
    rng: np.random.Generator,
) -> tuple[Optional[float], Optional[float], Optional[float], list[str]]:
    flags: list[str] = []
    heights = sample_char_heights(truth.h_true, scenario.n_chars, scenario.sigma_h_px, rng)
    if len(heights) < 3:
        flags.append("seg_fail")
        return (None, None, None, flags)
    if truth.h_true < _SEG_FLOOR_PX:
        flags.append("below_floor")
    shorten = math.cos(truth.phi) * math.cos(truth.psi)
    px_per_m = camera.f_px * shorten / truth.d_true
    s_true = spec_true.stroke_width_m * px_per_m
    g_true = spec_true.char_gap_m * px_per_m
    s_bar = s_true * (1.0 + rng.normal(0.0, scenario.sigma_stroke_rel)) if scenario.sigma_stroke_rel > 0 else s_true
    g_bar = g_true * (1.0 + rng.normal(0.0, scenario.sigma_gap_rel)) if scenario.sigma_gap_rel > 0 else g_true
    return (float(heights.mean()), max(s_bar, 1e-6), max(g_bar, 1e-6), flags)


def run_pipeline(scenario: Scenario, config: PipelineConfig) -> SessionLog:
    """Run the whole estimation stack over a scenario and log every stage.

    Per-frame stage errors (segmentation failure, uninitialized scale)
    degrade that frame's outputs to empty fields instead of aborting the
    run. Deterministic for a fixed scenario seed.
    """
    camera = config.camera
    table = config.resolve_table()
    spec_true = table.get(scenario.state_id)
    if spec_true is None:
        raise ValueError(f"scenario state {scenario.state_id!r} not in the state table")
    if config.assumed_state is None:
        spec_est = spec_true
    else:
        spec_est = table.get(config.assumed_state) or table.default

    truth_rng = truth_stream_rng(scenario.seed)
    rng = measurement_rng(scenario.seed)
    smoother = PoseSmoother()
    tracker = ScaleTracker()
    track: Optional[TrackState] = None
    d_prior: Optional[float] = None
    h_history: list[tuple[float, float]] = []
    inflate_next = False

    rows: list[FrameRecord] = []
    scale_trace: list[float] = []
    for truth in gen_frames(scenario, camera, spec_true, truth_rng):
        flags: list[str] = []
        h_bar = s_bar = g_bar = None
        if truth.occluded:
            flags.append("occluded")
        else:
            observe = _observe_raster if config.use_raster else _observe_measurements
            h_bar, s_bar, g_bar, flags_obs = observe(truth, scenario, spec_true, camera, rng)
            flags.extend(flags_obs)

        # Pose estimate from the synthesized vanishing point and lane slope.
        if config.pose_compensation:
            v_inf = camera.height_px / 2.0 + camera.f_px * math.tan(truth.phi)
            phi_obs = pitch_from_vanishing(v_inf, camera.height_px, camera.f_px)
            slope = math.tan(truth.psi)
            psi_obs = roll_from_segments(
                [LineSegment(0.0, 0.0, 100.0, 100.0 * slope), LineSegment(0.0, 10.0, 200.0, 10.0 + 200.0 * slope)]
            )
            pose = smoother.update(phi_obs, psi_obs)
        else:
            pose = ZERO_POSE

        d_geo = var_geo = None
        if h_bar is not None:
            shorten = pose.foreshortening
            h_corr = h_bar / shorten
            s_corr = s_bar / shorten if s_bar is not None else None
            g_corr = g_bar / shorten if g_bar is not None else None
            prior = d_prior if d_prior is not None else camera.f_px * spec_est.char_height_m / h_corr
            ests = feature_estimates(camera.f_px, spec_est, h_corr, s_corr, g_corr, prior)
            d_geo, _ = fuse_features(ests)
            var_geo = (SIGMA_COEFF[Feature.HEIGHT] * prior) ** 2

        d_deep = None
        if config.deep_fusion:
            if d_geo is not None:
                tracker = update_scale(tracker, d_geo, truth.d_plate)
            if tracker.initialized:
                d_deep = deep_metric(tracker, truth.d_plate)
            elif truth.occluded:
                flags.append("scale_uninit")

        if d_geo is None and d_deep is None:
            d_fused = None
        else:
            d_fused, _ = fuse_geo_deep(d_geo, var_geo, d_deep, tracker.var_deep_m2)

        d_hat = v_hat = ttc = None
        level = ""
        if config.kalman:
            if track is None:
                if d_fused is not None:
                    track = TrackState.initial(d_fused, scenario.dt)
                    d_hat, v_hat = track.distance_m, track.velocity_mps
            else:
                r_scale = 4.0 if inflate_next else 1.0
                inflate_next = False
                track = kalman_step(track, d_fused, r_scale=r_scale)
                d_hat, v_hat = track.distance_m, track.velocity_mps
            if track is not None:
                out = safety(track)
                ttc = out.ttc_s
                level = out.level.value
        else:
            d_hat = d_fused

        # Optical-expansion consistency check against the Kalman velocity.
        if h_bar is not None:
            h_history.append((h_bar / pose.foreshortening, truth.t))
            del h_history[:-3]
        else:
            h_history.clear()
        if (
            config.optical_check
            and config.kalman
            and track is not None
            and v_hat is not None
            and len(h_history) >= 2
            and d_hat is not None
        ):
            _, inconsistent = optical_cross_check(d_hat, h_history, v_hat)
            if inconsistent:
                flags.append("inconsistent")
                inflate_next = True

        rows.append(
            FrameRecord(
                frame=truth.index,
                t=truth.t,
                d_true=truth.d_true,
                v_true=truth.v_true,
                occluded=truth.occluded,
                h_bar=h_bar,
                d_geo=d_geo,
                d_deep=d_deep,
                d_fused=d_fused,
                d_hat=d_hat,
                v_hat=v_hat,
                ttc=ttc,
                level=level,
                flags=tuple(flags),
            )
        )
        if d_fused is not None:
            d_prior = d_fused
        scale_trace.append(tracker.scale if tracker.initialized else float("nan"))

    metadata = {
        "seed": scenario.seed,
        "fps": scenario.fps,
        "duration_s": scenario.duration_s,
        "d0_m": scenario.d0_m,
        "state_id": scenario.state_id,
        "assumed_state": config.assumed_state,
        "camera": {"f_px": camera.f_px, "width_px": camera.width_px, "height_px": camera.height_px},
        "toggles": {
            "pose_compensation": config.pose_compensation,
            "deep_fusion": config.deep_fusion,
            "kalman": config.kalman,
            "optical_check": config.optical_check,
            "use_raster": config.use_raster,
        },
        "rng": "numpy.random.default_rng (PCG64)",
    }
    return SessionLog(rows=rows, metadata=metadata, scale_trace=np.asarray(scale_trace))


# ---------------------------------------------------------------------------
# Scenario files


def _parse_pairs(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split(":")
        pairs.append((float(a), float(b)))
    return tuple(pairs)


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario from an INI file (see README for the schema)."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"cannot read scenario file {path}")
    if "scenario" not in parser:
        raise ValueError(f"{path}: missing [scenario] section")
    sc = parser["scenario"]
    noise = parser["noise"] if "noise" in parser else {}
    pose = parser["pose"] if "pose" in parser else {}

    def fget(section, key, default):
        value = section.get(key)
        return default if value is None else float(value)

    return Scenario(
        duration_s=float(sc["duration_s"]),
        d0_m=float(sc["d0_m"]),
        fps=fget(sc, "fps", 25.0),
        v_profile=_parse_pairs(sc.get("v_profile", "0:0")) or ((0.0, 0.0),),
        occlusions=_parse_pairs(sc.get("occlusions", "")),
        phi_rad=math.radians(fget(pose, "phi_deg", 0.0)),
        psi_rad=math.radians(fget(pose, "psi_deg", 0.0)),
        sigma_h_px=fget(noise, "sigma_h_px", 0.0),
        sigma_stroke_rel=fget(noise, "sigma_stroke_rel", 0.0),
        sigma_gap_rel=fget(noise, "sigma_gap_rel", 0.0),
        sigma_depth=fget(noise, "sigma_depth", 0.0),
        depth_drift_per_s=fget(noise, "depth_drift_per_s", 0.0),
        sigma_intensity=fget(noise, "sigma_intensity", 0.0),
        depth_scale_true=fget(sc, "depth_scale_true", 0.7),
        state_id=sc.get("state", "michigan").strip().lower(),
        n_chars=int(fget(sc, "n_chars", 7)),
        seed=int(fget(sc, "seed", 0)),
    )
