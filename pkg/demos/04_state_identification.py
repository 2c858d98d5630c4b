"""The three-stage jurisdiction cascade on injected inputs.

Stage 1 consumes OCR text reads, stage 2 the plate's HSV pixels, stage 3 an
optional classifier probability vector. A confident text match ends the
cascade immediately; color needs a clear margin; everything else mixes and
falls back to the conservative default height.
"""

import numpy as np

from platerange import (
    DesignCatalog,
    MarkerCatalog,
    OcrRead,
    StateTable,
    decide,
    hsv_scores,
    lookup_height,
    match_markers,
)

markers = MarkerCatalog.bundled()
designs = DesignCatalog.bundled()
table = StateTable.bundled()
print(f"catalogs: {len(markers)} text markers, {len(designs.designs)} color designs, "
      f"boosted states: {sorted(designs.boost_states)}")

print()
print("=== Stage 1: text markers ===")
cases = [
    [OcrRead("PURE MICHIGAN", 0.92), OcrRead("MICHIGAN", 0.80)],
    [OcrRead("LONE STAR STATE", 0.71)],
    [OcrRead("MICHIGAN", 0.55)],  # below the 0.6 confidence bar
    [OcrRead("MICH", 0.85)],  # partial read, matched by prefix
]
for reads in cases:
    decision = match_markers(reads, markers)
    shown = ", ".join(f"{r.text!r}@{r.conf:.2f}" for r in reads)
    if decision is None:
        print(f"  [{shown}] -> no text decision")
    else:
        print(f"  [{shown}] -> {decision.state_id} ({decision.confidence:.2f}, {decision.stage.value})")

print()
print("=== Stage 2: HSV scoring ===")
rng = np.random.default_rng(13)
n = 4000


def plate_pixels(fractions):
    parts = []
    for frac, (h0, h1, s0, s1, v0, v1) in fractions:
        m = int(n * frac)
        parts.append(np.column_stack([
            rng.uniform(h0, h1, m), rng.uniform(s0, s1, m), rng.uniform(v0, v1, m),
        ]))
    return np.concatenate(parts)


# A black plate with gold characters: the one signature no other state has.
delaware_pixels = plate_pixels([
    (0.70, (0, 360, 0.0, 0.2, 0.02, 0.2)),   # black background
    (0.25, (44, 56, 0.6, 0.95, 0.6, 0.95)),  # gold characters
    (0.05, (0, 360, 0.3, 0.5, 0.4, 0.6)),    # dirt and glare
])
scores = hsv_scores(delaware_pixels, designs)
top = sorted(scores.items(), key=lambda kv: -kv[1])[:4]
for state, value in top:
    print(f"  {state:22s} {value:.3f}")

# A white/blue plate: colors shared by many standard designs, so no margin.
generic_pixels = plate_pixels([
    (0.60, (0, 360, 0.0, 0.08, 0.85, 1.0)),   # white field
    (0.30, (215, 235, 0.6, 0.95, 0.3, 0.7)),  # blue characters
    (0.10, (0, 360, 0.2, 0.4, 0.1, 0.3)),
])
generic_scores = hsv_scores(generic_pixels, designs)
generic_top = sorted(generic_scores.items(), key=lambda kv: -kv[1])[:2]
print("  (a white/blue plate spreads across designs: "
      + ", ".join(f"{s} {v:.3f}" for s, v in generic_top) + ")")

print()
print("=== Stage 3: decision cascade ===")
color_only = decide(None, scores)
print(f"  black/gold scores alone -> {color_only.state_id} "
      f"({color_only.confidence:.2f}, {color_only.stage.value})")

ambiguous_color = decide(None, generic_scores)
print(f"  white/blue scores alone -> {ambiguous_color.state_id} "
      f"({ambiguous_color.confidence:.2f}, {ambiguous_color.stage.value})")

# a near-tie between two states, broken by an injected classifier vector
confusion = {"ohio": 0.48, "north_carolina": 0.40, "georgia": 0.12}
classifier = {"ohio": 0.80, "north_carolina": 0.15, "georgia": 0.05}
combined = decide(None, confusion, classifier)
print(f"  ohio/north_carolina near-tie plus classifier -> {combined.state_id} "
      f"({combined.confidence:.2f}, {combined.stage.value})")

ambiguous = decide(None, {"ohio": 0.34, "north_carolina": 0.33, "georgia": 0.33})
spec = lookup_height(ambiguous, table)
print(f"  hopeless ambiguity -> {ambiguous.stage.value} decision, character height falls back to "
      f"{spec.char_height_m * 1000:.1f} mm")
