"""Character segmentation and multi-feature ranging, end to end on rasters.

Renders plates across the working distance band, segments them, measures
the three typographic features, and fuses the per-feature distances with
inverse-variance weights.
"""

import numpy as np

from platerange import (
    StateTable,
    feature_estimates,
    fuse_features,
    mean_height,
    render_plate,
    segment_characters,
    spacing,
    stroke_width,
)

F_PX = 3967.0
spec = StateTable.bundled().get("michigan")
rng = np.random.default_rng(11)

print("distance | n | method            | h_bar px | stroke px | gap px | D_fused m | err %")
print("-" * 88)
for d_true in (3.0, 5.0, 10.0, 15.0, 20.0):
    render = render_plate(spec, F_PX, d_true, sigma_h=1.0, sigma_intensity=4.0, rng=rng)
    cs = segment_characters(render.image)
    h_bar = mean_height(cs)
    s_bar = stroke_width(cs.binary_global, cs)
    g_bar = spacing(cs)
    prior = F_PX * spec.char_height_m / h_bar
    ests = feature_estimates(F_PX, spec, h_bar, s_bar, g_bar, d_prior=prior)
    d_fused, sigma = fuse_features(ests)
    err = abs(d_fused - d_true) / d_true * 100
    print(
        f"  {d_true:5.1f}  | {cs.n} | {cs.method:17s} | {h_bar:8.2f} | {s_bar:9.2f} |"
        f" {g_bar:6.2f} | {d_fused:9.3f} | {err:5.2f}"
    )

print()
print("Per-feature view at 10 m (height dominates; stroke and spacing are")
print("wide-variance backups that only matter when the height channel breaks):")
render = render_plate(spec, F_PX, 10.0, rng=np.random.default_rng(3))
cs = segment_characters(render.image)
prior = F_PX * spec.char_height_m / mean_height(cs)
for est in feature_estimates(
    F_PX, spec, mean_height(cs), stroke_width(cs.binary_global, cs), spacing(cs), d_prior=prior
):
    weight = est.weight
    print(f"  {est.feature.value:8s}: D = {est.distance_m:6.2f} m, sigma = {est.sigma_m:5.2f} m, weight = {weight:8.2f}")
