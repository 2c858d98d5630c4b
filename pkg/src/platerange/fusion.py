"""Scale alignment of relative depth, geometric/deep fusion, constant-velocity
Kalman tracking, TTC warning levels, and the optical-expansion cross-check.

The relative-depth branch (an injected signal standing in for a deep
network) is aligned to metric units by an EMA of the geometric-to-relative
ratio. While the geometric branch is blind (plate occluded) the scale is
held frozen and the deep branch carries the estimate alone.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "ScaleTracker",
    "update_scale",
    "deep_metric",
    "fuse_geo_deep",
    "TrackState",
    "kalman_step",
    "WarningLevel",
    "SafetyOutput",
    "safety",
    "optical_cross_check",
    "EMA_ALPHA",
    "TTC_DANGER_S",
    "TTC_CAUTION_S",
]

EMA_ALPHA = 0.9
RATIO_WINDOW = 30
DEEP_VARIANCE_FLOOR = 1e-4  # m^2

# Warning thresholds: TTC levels plus the closing-speed trigger, and the
# minimum approach speed below which TTC is meaningless.
TTC_DANGER_S = 1.0
TTC_CAUTION_S = 2.0
CLOSING_SPEED_CAUTION = -3.0
APPROACH_SPEED_FLOOR = -0.1

OPTICAL_MISMATCH_THRESHOLD = 0.5  # m/s


@dataclass(frozen=True)
class ScaleTracker:
    """EMA state converting relative depth units to meters.

    ``scale`` starts at 1.0 but is only trusted once a geometric update has
    arrived. ``var_deep_m2`` tracks the running variance of the ratio
    window expressed in meters squared, floored to stay usable as a fusion
    weight.
    """

    scale: float = 1.0
    alpha: float = EMA_ALPHA
    window: tuple[float, ...] = ()
    var_deep_m2: float = DEEP_VARIANCE_FLOOR
    initialized: bool = False

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")


def update_scale(t: ScaleTracker, d_geo: float, d_plate: float) -> ScaleTracker:
    """One EMA step toward the observed metric-to-relative ratio.

    Only called when the geometric branch produced a distance; during
    occlusions the tracker is left untouched, which is exactly the
    occlusion hold.

    The deep variance combines the running variance of the ratio window
    (observation noise) with the squared gap between the EMA and the recent
    ratio mean (convergence lag). Without the lag term a freshly started,
    still-biased scale would report near-zero variance and hijack the
    fusion on clean data.
    """
    if d_geo <= 0 or d_plate <= 0:
        raise ValueError(f"update_scale needs positive inputs, got ({d_geo}, {d_plate})")
    ratio = d_geo / d_plate
    new_scale = t.alpha * t.scale + (1.0 - t.alpha) * ratio
    window = np.asarray((t.window + (ratio,))[-RATIO_WINDOW:])
    lag = new_scale - float(window.mean())
    var_ratio = float(np.var(window)) + lag * lag
    var_deep = max(var_ratio * d_plate * d_plate, DEEP_VARIANCE_FLOOR)
    return replace(
        t, scale=new_scale, window=tuple(window), var_deep_m2=var_deep, initialized=True
    )


def deep_metric(t: ScaleTracker, d_plate: float) -> float:
    """Relative depth converted to meters: scale * d_plate."""
    if not t.initialized:
        raise ValueError("scale tracker has no geometric anchor yet")
    if d_plate <= 0:
        raise ValueError(f"relative depth must be positive, got {d_plate}")
    return t.scale * d_plate


def fuse_geo_deep(
    d_geo: Optional[float],
    var_geo: Optional[float],
    d_deep: Optional[float],
    var_deep: Optional[float],
) -> tuple[float, float]:
    """Inverse-variance fusion of the geometric and deep estimates.

    Either side may be absent (its variance is then irrelevant); with both
    present the fused variance is the harmonic combination, never larger
    than the smaller input variance.
    """
    if d_geo is None and d_deep is None:
        raise ValueError("fuse_geo_deep needs at least one estimate")
    if d_deep is None:
        assert d_geo is not None and var_geo is not None
        return (d_geo, var_geo)
    if d_geo is None:
        assert var_deep is not None
        return (d_deep, var_deep)
    assert var_geo is not None and var_deep is not None
    total = var_geo + var_deep
    fused = (var_deep * d_geo + var_geo * d_deep) / total
    return (fused, var_geo * var_deep / total)


@dataclass(frozen=True, eq=False)
class TrackState:
    """Constant-velocity Kalman state: distance and relative velocity.

    ``p`` is the 2x2 state covariance; process noise is a fixed 0.1 * I and
    the measurement variance 0.5 m^2, both tuned for automotive frame
    rates. Negative velocity means the target is approaching.
    """

    x: np.ndarray
    p: np.ndarray
    dt: float
    q: float = 0.1
    r: float = 0.5

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @classmethod
    def initial(cls, z0: float, dt: float) -> "TrackState":
        # Wide velocity prior so the filter locks on within a few frames.
        return cls(
            x=np.array([z0, 0.0]),
            p=np.diag([1.0, 25.0]),
            dt=dt,
        )

    @property
    def distance_m(self) -> float:
        return float(self.x[0])

    @property
    def velocity_mps(self) -> float:
        return float(self.x[1])


def kalman_step(s: TrackState, z: Optional[float] = None, *, r_scale: float = 1.0) -> TrackState:
    """One predict(+update) cycle.

    With no measurement the prediction simply propagates, which is what
    keeps short occlusions covered. ``r_scale`` temporarily inflates the
    measurement variance (used after an optical-consistency mismatch).
    """
    f = np.array([[1.0, s.dt], [0.0, 1.0]])
    x = f @ s.x
    p = f @ s.p @ f.T + s.q * np.eye(2)
    if z is not None:
        r = s.r * r_scale
        innovation = z - x[0]
        s_var = p[0, 0] + r
        k = p[:, 0] / s_var
        x = x + k * innovation
        p = (np.eye(2) - np.outer(k, [1.0, 0.0])) @ p
    p = (p + p.T) / 2.0  # keep symmetric against float drift
    return replace(s, x=x, p=p)


class WarningLevel(Enum):
    SAFE = "safe"
    CAUTION = "caution"
    DANGER = "danger"


@dataclass(frozen=True)
class SafetyOutput:
    """Smoothed kinematics plus the derived warning level."""

    distance_m: float
    velocity_mps: float
    ttc_s: Optional[float]
    level: WarningLevel
    inconsistent: bool = False


def safety(s: TrackState) -> SafetyOutput:
    """TTC and warning level from the current track state.

    TTC exists only for genuine approach (velocity below -0.1 m/s); danger
    means under a second to impact, caution under two seconds or a closing
    speed beyond 3 m/s.
    """
    d = s.distance_m
    v = s.velocity_mps
    ttc: Optional[float] = None
    if v < APPROACH_SPEED_FLOOR:
        ttc = d / abs(v)
    if ttc is not None and ttc < TTC_DANGER_S:
        level = WarningLevel.DANGER
    elif (ttc is not None and ttc < TTC_CAUTION_S) or v < CLOSING_SPEED_CAUTION:
        level = WarningLevel.CAUTION
    else:
        level = WarningLevel.SAFE
    return SafetyOutput(d, v, ttc, level)


def optical_cross_check(
    d: float,
    h_history: Sequence[tuple[float, float]],
    v_kalman: float,
    threshold: float = OPTICAL_MISMATCH_THRESHOLD,
) -> tuple[float, bool]:
    """Velocity from the expansion rate of the measured character height.

    ``h_history`` holds recent (height_px, time_s) samples, newest last;
    differentiating the pinhole relation gives v = -D * h_dot / h. The
    check flags an inconsistency when this filter-free velocity disagrees
    with the Kalman velocity by more than ``threshold``.
    """
    if len(h_history) < 2:
        raise ValueError("optical cross-check needs at least two height samples")
    h = np.array([s[0] for s in h_history], dtype=np.float64)
    t = np.array([s[1] for s in h_history], dtype=np.float64)
    if np.ptp(t) <= 0:
        raise ValueError("height samples need distinct timestamps")
    # Least-squares slope of h(t) over the short window.
    t0 = t - t.mean()
    h_dot = float((t0 * (h - h.mean())).sum() / (t0 * t0).sum())
    v_optical = -d * h_dot / float(h[-1])
    return (v_optical, abs(v_optical - v_kalman) > threshold)
