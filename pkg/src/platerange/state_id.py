"""Three-stage jurisdiction identification.

Stage 1 matches injected OCR text against a marker catalog (state names,
slogans, URLs). Stage 2 scores the plate's HSV pixel distribution against a
multi-design color catalog. Stage 3 is an injected classifier probability
vector; the default build runs without one. A confident text match wins
outright; otherwise color and classifier scores combine, and anything still
ambiguous falls back to the default jurisdiction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

__all__ = [
    "Strip",
    "Stage",
    "OcrRead",
    "StateDecision",
    "MarkerCatalog",
    "HsvRange",
    "Design",
    "DesignCatalog",
    "match_markers",
    "hsv_scores",
    "decide",
    "rgb_to_hsv",
    "OCR_CONFIDENCE_THRESHOLD",
    "COLOR_MARGIN_THRESHOLD",
    "COMBINED_SCORE_FLOOR",
]

# Stage thresholds: minimum OCR confidence for a text decision, the
# top-two margin needed for a color-only decision, stage-2/3 mixing
# weights, and the combined-score floor below which the default wins.
OCR_CONFIDENCE_THRESHOLD = 0.6
COLOR_MARGIN_THRESHOLD = 0.15
STAGE2_WEIGHT = 0.6
STAGE3_WEIGHT = 0.4
COMBINED_SCORE_FLOOR = 0.5
COLOR_BOOST = 0.20
MIN_PARTIAL_PREFIX = 4

DEFAULT_STATE_ID = "default"


class Strip(Enum):
    TOP = "top"
    BOTTOM = "bottom"


class Stage(Enum):
    TEXT = "text"
    COLOR = "color"
    COMBINED = "combined"
    DEFAULT = "default"


@dataclass(frozen=True)
class OcrRead:
    """One injected OCR result from a plate strip."""

    text: str
    conf: float
    strip: Strip = Strip.TOP

    def __post_init__(self) -> None:
        if not 0.0 <= self.conf <= 1.0:
            raise ValueError(f"OCR confidence outside [0, 1]: {self.conf}")


@dataclass(frozen=True)
class StateDecision:
    state_id: str
    confidence: float
    stage: Stage

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"decision confidence outside [0, 1]: {self.confidence}")


def _normalize(text: str) -> str:
    return " ".join(text.upper().split())


class MarkerCatalog:
    """Phrase-to-state dictionary of textual plate markers."""

    def __init__(self, entries: Iterable[tuple[str, str]]):
        seen: dict[tuple[str, str], None] = {}
        self.entries: list[tuple[str, str]] = []
        for phrase, state in entries:
            key = (_normalize(phrase), state.lower())
            if key in seen:
                continue
            seen[key] = None
            self.entries.append(key)
        if not self.entries:
            raise ValueError("marker catalog is empty")

    @classmethod
    def from_file(cls, path: str | Path) -> "MarkerCatalog":
        entries = []
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'PHRASE<TAB>state_id'")
            phrase, state = line.split("\t", 1)
            entries.append((phrase.strip(), state.strip()))
        return cls(entries)

    @classmethod
    def bundled(cls) -> "MarkerCatalog":
        ref = resources.files("platerange.data") / "markers.txt"
        with resources.as_file(ref) as path:
            return cls.from_file(path)

    def __len__(self) -> int:
        return len(self.entries)


def match_markers(reads: Sequence[OcrRead], cat: MarkerCatalog) -> Optional[StateDecision]:
    """Match OCR reads against the marker catalog.

    Full substring matches are ranked by phrase length then by OCR
    confidence, so "PURE MICHIGAN" beats a bare "MICHIGAN". Prefix matches
    of at least four characters are considered only when no full match
    exists. Returns a decision only when the winning read's confidence
    clears the threshold.
    """
    full: list[tuple[int, float, str, str]] = []
    partial: list[tuple[int, float, str, str]] = []
    for read in reads:
        text = _normalize(read.text)
        if not text:
            continue
        for phrase, state in cat.entries:
            if phrase in text:
                full.append((len(phrase), read.conf, state, phrase))
                continue
            if len(phrase) > MIN_PARTIAL_PREFIX:
                for cut in range(len(phrase) - 1, MIN_PARTIAL_PREFIX - 1, -1):
                    if phrase[:cut] in text:
                        partial.append((cut, read.conf, state, phrase))
                        break
    pool = full if full else partial
    if not pool:
        return None
    length, conf, state, _ = max(pool, key=lambda m: (m[0], m[1], m[3]))
    if conf < OCR_CONFIDENCE_THRESHOLD:
        return None
    return StateDecision(state, conf, Stage.TEXT)


@dataclass(frozen=True)
class HsvRange:
    """One HSV box; hue in degrees [0, 360) and may wrap around 0."""

    h_min: float
    h_max: float
    s_min: float
    s_max: float
    v_min: float
    v_max: float

    def contains(self, hsv: np.ndarray) -> np.ndarray:
        h, s, v = hsv[:, 0], hsv[:, 1], hsv[:, 2]
        if self.h_min <= self.h_max:
            hue_ok = (h >= self.h_min) & (h <= self.h_max)
        else:  # wrapped range, e.g. 340..20
            hue_ok = (h >= self.h_min) | (h <= self.h_max)
        return (
            hue_ok
            & (s >= self.s_min)
            & (s <= self.s_max)
            & (v >= self.v_min)
            & (v <= self.v_max)
        )


@dataclass(frozen=True)
class Design:
    """One cataloged plate design: owning state, weight, HSV ranges."""

    state_id: str
    weight: float
    ranges: tuple[HsvRange, ...]

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError(f"design weight must be positive, got {self.weight}")
        if not self.ranges:
            raise ValueError("design needs at least one HSV range")

    def fraction_in_range(self, hsv: np.ndarray) -> float:
        hit = np.zeros(len(hsv), dtype=bool)
        for rng in self.ranges:
            hit |= rng.contains(hsv)
        return float(hit.mean())


@dataclass
class DesignCatalog:
    """All designs scored simultaneously, plus the color-boosted states."""

    designs: list[Design]
    boost_states: frozenset[str] = field(default_factory=frozenset)

    @property
    def states(self) -> list[str]:
        return sorted({d.state_id for d in self.designs})

    @classmethod
    def from_file(cls, path: str | Path) -> "DesignCatalog":
        designs: list[Design] = []
        boosts: set[str] = set()
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            kind = fields[0]
            if kind == "boost":
                boosts.update(f.lower() for f in fields[1:])
                continue
            if kind != "design" or len(fields) != 4:
                raise ValueError(f"{path}:{lineno}: expected 'design <state> <weight> <ranges>'")
            state, weight, ranges_field = fields[1].lower(), float(fields[2]), fields[3]
            ranges = []
            for spec in ranges_field.split(";"):
                parts = spec.split(",")
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: range needs h,s,v spans")
                h0, h1 = (float(x) for x in parts[0].split("-"))
                s0, s1 = (float(x) for x in parts[1].split("-"))
                v0, v1 = (float(x) for x in parts[2].split("-"))
                ranges.append(HsvRange(h0, h1, s0, s1, v0, v1))
            designs.append(Design(state, weight, tuple(ranges)))
        if not designs:
            raise ValueError(f"{path}: no designs")
        return cls(designs, frozenset(boosts))

    @classmethod
    def bundled(cls) -> "DesignCatalog":
        ref = resources.files("platerange.data") / "designs.txt"
        with resources.as_file(ref) as path:
            return cls.from_file(path)


def hsv_scores(
    pixels: np.ndarray,
    cat: DesignCatalog,
    apply_boosts: bool = True,
) -> dict[str, float]:
    """Normalized per-state color scores from the plate's HSV pixels.

    Each design contributes its weight times the fraction of pixels inside
    its ranges; per-state sums get a flat boost for the visually distinctive
    states when any of their pixels match, then everything normalizes to
    sum 1. With no pixel in any range the result is uniform.
    """
    pixels = np.asarray(pixels, dtype=np.float64)
    if pixels.ndim != 2 or pixels.shape[1] != 3 or len(pixels) == 0:
        raise ValueError(f"expected a non-empty (n, 3) HSV array, got shape {pixels.shape}")

    raw = {state: 0.0 for state in cat.states}
    matched = {state: False for state in cat.states}
    for design in cat.designs:
        frac = design.fraction_in_range(pixels)
        raw[design.state_id] += design.weight * frac
        if frac > 0.0:
            matched[design.state_id] = True

    if apply_boosts:
        for state in cat.boost_states:
            if state in raw and matched[state]:
                raw[state] += COLOR_BOOST

    total = sum(raw.values())
    if total <= 0.0:
        n = len(raw)
        return {state: 1.0 / n for state in raw}
    return {state: value / total for state, value in raw.items()}


def _top_two(scores: Mapping[str, float]) -> tuple[str, float, float]:
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    best_state, best = ranked[0]
    second = ranked[1][1] if len(ranked) > 1 else 0.0
    return best_state, best, second


def decide(
    stage1: Optional[StateDecision],
    stage2: Mapping[str, float],
    stage3: Optional[Mapping[str, float]] = None,
) -> StateDecision:
    """Fuse the three identification stages into one decision.

    A text match carries infinite weight and bypasses everything else. A
    color score wins alone when its top-two margin is wide enough.
    Otherwise color and classifier scores mix 0.6/0.4 (color alone when no
    classifier is injected) and the top state must clear the combined
    floor, else the conservative default is returned.
    """
    if stage1 is not None:
        return stage1

    if stage2:
        state, best, second = _top_two(stage2)
        if best - second >= COLOR_MARGIN_THRESHOLD:
            return StateDecision(state, min(1.0, best), Stage.COLOR)

    combined: dict[str, float] = {}
    if stage3 is None:
        combined = {s: float(v) for s, v in stage2.items()}
    else:
        for s in set(stage2) | set(stage3):
            combined[s] = STAGE2_WEIGHT * stage2.get(s, 0.0) + STAGE3_WEIGHT * stage3.get(s, 0.0)

    if combined:
        state, best, _ = _top_two(combined)
        if best >= COMBINED_SCORE_FLOOR:
            return StateDecision(state, min(1.0, best), Stage.COMBINED)

    return StateDecision(DEFAULT_STATE_ID, 0.0, Stage.DEFAULT)


def rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """Vectorized RGB [0, 255] -> HSV with h in [0, 360), s and v in [0, 1]."""
    rgb = np.asarray(rgb, dtype=np.float64).reshape(-1, 3) / 255.0
    r, g, b = rgb[:, 0], rgb[:, 1], rgb[:, 2]
    v = rgb.max(axis=1)
    c = v - rgb.min(axis=1)
    s = np.divide(c, v, out=np.zeros_like(v), where=v > 0)
    h = np.zeros_like(v)
    nz = c > 0
    rmax = nz & (v == r)
    gmax = nz & (v == g) & ~rmax
    bmax = nz & ~rmax & ~gmax
    h[rmax] = np.mod((g[rmax] - b[rmax]) / c[rmax], 6.0)
    h[gmax] = (b[gmax] - r[gmax]) / c[gmax] + 2.0
    h[bmax] = (r[bmax] - g[bmax]) / c[bmax] + 4.0
    return np.column_stack([h * 60.0, s, v])
