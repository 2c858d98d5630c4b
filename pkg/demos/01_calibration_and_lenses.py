"""Focal-length calibration from a known plate, and lens preset scaling.

The focal length in pixels anchors every distance estimate. Calibrating
against segmented character height (rather than the warped plate outline)
avoids perspective inflation; the median over three reference distances
shrugs off a single bad measurement.
"""

from platerange import LENS_PRESETS, CalibrationSample, calibrate_focal, scale_focal

print("=== Lens presets (datasheet focal lengths) ===")
for preset in LENS_PRESETS.values():
    rescaled = scale_focal(preset.f_at_2880, 2880, 1280)
    print(
        f"  {preset.name}: EFL {preset.efl_mm:5.2f} mm | f@2880 = {preset.f_at_2880:6.0f} px |"
        f" f@1280 = {preset.f_at_1280:6.0f} px (linear rescale gives {rescaled:7.1f})"
    )

print()
print("=== Three-distance calibration protocol ===")
# A 72 mm-character plate observed at 1, 2, 3 m. The 3 m reading is
# deliberately corrupted to show the median shrugging it off.
truth_f = 3967.0
samples = []
for d_ref, corruption in ((1.0, 1.0), (2.0, 1.0), (3.0, 1.18)):
    h_bar = truth_f * 0.072 / d_ref * corruption
    samples.append(CalibrationSample(d_ref, h_bar, 0.072))

for s in samples:
    print(f"  D = {s.d_ref_m:.1f} m: h = {s.h_bar_px:7.2f} px -> candidate f = {s.focal_candidate():7.1f} px")

f_cal = calibrate_focal(samples)
print(f"  median focal length: {f_cal:.1f} px  (truth {truth_f:.0f}, outlier at 3 m ignored)")

print()
print("=== Resolution scaling ===")
for width in (2880, 1920, 1280, 640):
    print(f"  capture width {width:4d} px -> f = {scale_focal(f_cal, 2880, width):7.1f} px")
