"""Jurisdiction typography table: character height, stroke width, glyph gap.

Character heights are jurisdiction-mandated, which is what makes them usable
as a metric reference. Only a few entries are measured values; the rest of
the shipped table is provisional and meant to be edited as data is gathered.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

__all__ = [
    "StateSpec",
    "StateTable",
    "lookup_height",
    "DEFAULT_STATE_ID",
    "DEFAULT_CHAR_HEIGHT_M",
    "DEFAULT_CONFIDENCE_FLOOR",
]

DEFAULT_STATE_ID = "default"
# Conservative national-average character height used when identification fails.
DEFAULT_CHAR_HEIGHT_M = 0.0651
# Decisions weaker than this fall back to the default spec.
DEFAULT_CONFIDENCE_FLOOR = 0.3


@dataclass(frozen=True)
class StateSpec:
    """Physical character dimensions for one jurisdiction, in meters."""

    state_id: str
    char_height_m: float
    stroke_width_m: float
    char_gap_m: float
    provisional: bool = False

    def __post_init__(self) -> None:
        h = self.char_height_m
        if not 0.05 <= h <= 0.08:
            raise ValueError(f"{self.state_id}: character height {h} m outside [0.05, 0.08]")
        if not 0 < self.stroke_width_m < h:
            raise ValueError(f"{self.state_id}: stroke width must be in (0, H)")
        if not 0 < self.char_gap_m < 3 * h:
            raise ValueError(f"{self.state_id}: gap must be in (0, 3H)")


def default_spec() -> StateSpec:
    # Stroke defaults to H/6, gap to H/2.
    h = DEFAULT_CHAR_HEIGHT_M
    return StateSpec(DEFAULT_STATE_ID, h, h / 6.0, h / 2.0, provisional=False)


class StateTable:
    """Lookup from jurisdiction id to :class:`StateSpec`.

    Loads from a plain-text columnar file, one record per jurisdiction::

        # state_id  H_mm   S_mm   G_mm   provisional
        michigan    72.0   12.0   36.0   0

    Stroke/gap columns may be '-' to take the H/6 and H/2 defaults.
    """

    def __init__(self, specs: dict[str, StateSpec]):
        self._specs = dict(specs)
        self._specs.setdefault(DEFAULT_STATE_ID, default_spec())

    @classmethod
    def from_file(cls, path: str | Path) -> "StateTable":
        specs: dict[str, StateSpec] = {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 columns, got {len(fields)}")
            state_id = fields[0].lower()
            try:
                h = float(fields[1]) / 1000.0
                s = h / 6.0 if fields[2] == "-" else float(fields[2]) / 1000.0
                g = h / 2.0 if fields[3] == "-" else float(fields[3]) / 1000.0
                provisional = bool(int(fields[4]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            specs[state_id] = StateSpec(state_id, h, s, g, provisional)
        if not specs:
            raise ValueError(f"{path}: no records")
        return cls(specs)

    @classmethod
    def bundled(cls) -> "StateTable":
        """Load the table shipped with the package."""
        ref = resources.files("platerange.data") / "state_table.txt"
        with resources.as_file(ref) as path:
            return cls.from_file(path)

    def get(self, state_id: str) -> Optional[StateSpec]:
        return self._specs.get(state_id.lower())

    def __contains__(self, state_id: str) -> bool:
        return state_id.lower() in self._specs

    def __len__(self) -> int:
        return len(self._specs)

    @property
    def default(self) -> StateSpec:
        return self._specs[DEFAULT_STATE_ID]

    def spec_for(self, decision, min_confidence: float = DEFAULT_CONFIDENCE_FLOOR) -> StateSpec:
        """Resolve a state decision to a spec; always succeeds.

        ``decision`` is anything with ``state_id`` and ``confidence``
        attributes, or None. Unknown states, missing decisions, and
        decisions below the confidence floor all resolve to the default.
        """
        if decision is None:
            return self.default
        if getattr(decision, "confidence", 0.0) < min_confidence:
            return self.default
        spec = self.get(str(decision.state_id))
        return spec if spec is not None else self.default


def lookup_height(
    decision,
    table: StateTable | None = None,
    min_confidence: float = DEFAULT_CONFIDENCE_FLOOR,
) -> StateSpec:
    """Module-level convenience around :meth:`StateTable.spec_for`."""
    if table is None:
        table = StateTable.bundled()
    return table.spec_for(decision, min_confidence=min_confidence)
