"""Tour of the raster kernels on a synthetic plate.

Renders one plate, runs the four binarization pipelines, then shows the
component/projection/distance machinery the detector and segmenter build
on. Binarized variants land in demos/out/ as PGM files.
"""

from pathlib import Path

import numpy as np

from platerange import StateTable, render_plate
from platerange.raster import (
    BINARIZATION_METHODS,
    binarize,
    binary_to_gray,
    connected_components,
    distance_transform,
    morph_close,
    morph_open,
    vertical_projection_peaks,
    warp_rectify,
    write_pgm,
)

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

spec = StateTable.bundled().get("michigan")
render = render_plate(spec, 3967.0, 5.0, sigma_intensity=5.0, rng=np.random.default_rng(7))
plate = render.image
write_pgm(out_dir / "plate.pgm", plate)
print(f"rendered plate {plate.shape[1]}x{plate.shape[0]} px -> {out_dir / 'plate.pgm'}")

print()
print("=== Four binarization pipelines ===")
for method in BINARIZATION_METHODS:
    binary = binarize(plate, method)
    cleaned = morph_close(morph_open(binary))
    regions = connected_components(cleaned)
    peaks = vertical_projection_peaks(cleaned)
    path = out_dir / f"binary_{method}.pgm"
    write_pgm(path, binary_to_gray(binary))
    print(
        f"  {method:18s}: {binary.sum():6d} fg px | {len(regions):3d} components |"
        f" {peaks:2d} projection peaks -> {path.name}"
    )

print()
print("=== Stroke geometry from the distance transform ===")
binary = binarize(plate, "otsu")
dist = distance_transform(binary)
inked = dist[binary]
print(f"  max in-stroke distance {inked.max():.2f} px, median {np.median(inked):.2f} px")
print(f"  2 x median = {2 * np.median(inked):.2f} px (nominal stroke {render.glyph_heights.mean() / 6:.2f} px)")

print()
print("=== Homography rectification ===")
h, w = plate.shape
# simulate a skewed view of the plate and rectify it back
skewed_corners = [(8.0, 4.0), (w - 3.0, 0.0), (w - 1.0, h - 2.0), (2.0, h - 6.0)]
rectified = warp_rectify(plate, skewed_corners, w, h)
write_pgm(out_dir / "rectified.pgm", rectified)
print(f"  rectified quad {skewed_corners} -> {out_dir / 'rectified.pgm'}")
print(f"  rectified projection peaks: {vertical_projection_peaks(binarize(rectified, 'otsu'))}")
