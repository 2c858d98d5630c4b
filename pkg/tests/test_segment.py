import numpy as np
import pytest

from oracles import chamfer_bfs
from platerange import StateTable, render_plate
from platerange.segment import (
    CharSet,
    SegmentationError,
    _reject_height_outliers,
    mean_height,
    segment_characters,
    spacing,
    stroke_width,
)
from platerange.raster import Region


@pytest.fixture(scope="module")
def michigan():
    return StateTable.bundled().get("michigan")


def _charset(heights, centers=None, widths=None):
    """Hand-built CharSet for the pure-arithmetic operations."""
    heights = np.asarray(heights, dtype=np.float64)
    n = len(heights)
    if centers is None:
        centers = np.arange(n) * 20.0 + 10.0
    if widths is None:
        widths = np.full(n, 5.0)
    boxes = tuple(
        (int(c - w / 2), 10, int(w), int(h)) for c, w, h in zip(centers, widths, heights)
    )
    return CharSet(
        boxes=boxes,
        heights=heights,
        widths=np.asarray(widths, dtype=np.float64),
        gaps=np.diff(np.asarray(centers, dtype=np.float64)),
        n=n,
        method="otsu",
        upscale=1.0,
        binary=np.zeros((40, int(centers[-1] + 20)), bool),
        binary_global=np.zeros((40, int(centers[-1] + 20)), bool),
    )


# ---------------------------------------------------------------------------
# segment_characters


def test_recovers_seven_characters_at_150px(michigan):
    # plate height ~150 px puts the render at about 4 m for this lens
    d = 3967.0 * 0.152 / 150.0
    render = render_plate(michigan, 3967.0, d, rng=np.random.default_rng(0))
    cs = segment_characters(render.image)
    assert cs.n == 7
    assert cs.upscale == 1.0
    true_mean = float(render.glyph_heights.mean())
    assert abs(float(cs.heights.mean()) - true_mean) <= 2.0
    assert np.all(np.abs(cs.heights - render.glyph_heights) <= 2.0)


def test_single_character_plate_fails(michigan):
    render = render_plate(michigan, 3967.0, 4.0, rng=np.random.default_rng(1), n_chars=1)
    with pytest.raises(SegmentationError):
        segment_characters(render.image)


def test_small_plate_gets_upscaled(michigan):
    # plate height 40 px -> factor max(2, 100/40) = 2.5
    d = 3967.0 * 0.152 / 40.0
    render = render_plate(michigan, 3967.0, d, rng=np.random.default_rng(2))
    assert render.image.shape[0] == 40
    cs = segment_characters(render.image)
    assert cs.upscale == pytest.approx(2.5)
    # heights are reported back in original-plate pixels
    assert float(cs.heights.mean()) == pytest.approx(float(render.glyph_heights.mean()), abs=1.0)


def test_boundary_plate_height_no_upscale(michigan):
    d = 3967.0 * 0.152 / 110.0
    render = render_plate(michigan, 3967.0, d, rng=np.random.default_rng(3))
    cs = segment_characters(render.image)
    assert cs.upscale == 1.0


def test_noiseless_round_trip_close_range(michigan):
    for d in (3.0, 5.0, 10.0):
        render = render_plate(michigan, 3967.0, d, rng=np.random.default_rng(4))
        cs = segment_characters(render.image)
        assert cs.n == 7
        h_true = 3967.0 * michigan.char_height_m / d
        assert abs(mean_height(cs) - h_true) <= 0.5
    for d in (15.0, 20.0):
        render = render_plate(michigan, 3967.0, d, rng=np.random.default_rng(4))
        cs = segment_characters(render.image)
        assert cs.n == 7
        h_true = 3967.0 * michigan.char_height_m / d
        assert abs(mean_height(cs) - h_true) <= 1.0


def test_survivors_satisfy_all_five_filters(michigan):
    render = render_plate(michigan, 3967.0, 8.0, sigma_h=2.0, rng=np.random.default_rng(5))
    cs = segment_characters(render.image)
    h_p = cs.binary.shape[0]
    for (x, y, w, h) in cs.boxes:
        assert 0.2 * h_p <= h <= 0.8 * h_p
        assert w < 1.8 * h
        assert 0.15 <= w / h <= 1.5
        assert h >= 5 and w >= 2
        cy = y + (h - 1) / 2
        assert 0.1 * h_p <= cy <= 0.9 * h_p


def test_heights_invariant_to_forced_upscale(michigan):
    d = 3967.0 * 0.152 / 150.0
    render = render_plate(michigan, 3967.0, d, rng=np.random.default_rng(6))
    base = segment_characters(render.image)
    forced = segment_characters(render.image, force_upscale=2.0)
    assert forced.upscale == 2.0
    assert abs(mean_height(base) - mean_height(forced)) <= 0.5


def test_two_sigma_rejection_single_pass():
    heights = np.array([28.0, 28.0, 28.0, 28.0, 28.0, 50.0])
    regions = [Region(10 * i, 0, 5, int(h), 5 * int(h)) for i, h in enumerate(heights)]
    kept = _reject_height_outliers(regions)
    assert [r.h for r in kept] == [28, 28, 28, 28, 28]
    # all equal heights: zero std keeps everything
    same = [Region(10 * i, 0, 5, 30, 150) for i in range(4)]
    assert len(_reject_height_outliers(same)) == 4


def test_rejection_band_floor_tolerates_rounding_straggler():
    # six identical heights plus a one-pixel rounding straggler stay intact
    heights = [71, 71, 71, 71, 71, 71, 72]
    regions = [Region(10 * i, 0, 5, h, 5 * h) for i, h in enumerate(heights)]
    assert len(_reject_height_outliers(regions)) == 7


def test_rejection_bound_matches_pre_rejection_stats():
    rng = np.random.default_rng(7)
    for _ in range(50):
        hs = rng.normal(30, 3, size=8)
        regions = [Region(12 * i, 0, 5, int(round(h)), 50) for i, h in enumerate(hs)]
        kept = _reject_height_outliers(regions)
        pre = np.array([r.h for r in regions], dtype=float)
        mu, sd = pre.mean(), pre.std()
        for r in kept:
            assert abs(r.h - mu) <= 2 * sd + 1e-9


# ---------------------------------------------------------------------------
# mean_height


def test_mean_height_seven_chars():
    cs = _charset([28, 29, 29, 28, 30, 28, 28])
    assert mean_height(cs) == pytest.approx(28.571, abs=5e-4)


def test_mean_height_equal_heights():
    assert mean_height(_charset([31, 31, 31])) == pytest.approx(31.0)


def test_mean_height_small_set():
    assert mean_height(_charset([10, 10, 13])) == pytest.approx(11.0)


def test_mean_height_permutation_invariant():
    rng = np.random.default_rng(8)
    heights = [27.0, 29.5, 31.0, 28.0, 30.0]
    base = mean_height(_charset(heights))
    for _ in range(10):
        assert mean_height(_charset(rng.permutation(heights))) == pytest.approx(base)


# ---------------------------------------------------------------------------
# stroke_width


def _bars_charset(width, n=3, height=30, pitch=20, img_w=None):
    img_w = img_w or (n * pitch + 20)
    binary = np.zeros((height + 20, img_w), bool)
    boxes = []
    for i in range(n):
        x0 = 10 + i * pitch
        binary[10 : 10 + height, x0 : x0 + width] = True
        boxes.append((x0, 10, width, height))
    heights = np.full(n, float(height))
    return CharSet(
        boxes=tuple(boxes),
        heights=heights,
        widths=np.full(n, float(width)),
        gaps=np.diff([b[0] + width / 2 for b in boxes]),
        n=n,
        method="otsu",
        upscale=1.0,
        binary=binary,
        binary_global=binary,
    )


def test_stroke_width_one_pixel_bars():
    cs = _bars_charset(width=1)
    assert stroke_width(cs.binary_global, cs) == pytest.approx(2.0)


def test_stroke_width_three_pixel_bars():
    cs = _bars_charset(width=3)
    # oracle: 2 x median of the BFS chamfer field over the stroke pixels
    mask = np.zeros_like(cs.binary_global)
    for x, y, w, h in cs.boxes:
        mask[y : y + h, x : x + w] = True
    oracle = 2.0 * np.median(chamfer_bfs(cs.binary_global)[mask & cs.binary_global])
    got = stroke_width(cs.binary_global, cs)
    assert got == pytest.approx(oracle)
    assert abs(got - 3.0) <= 1.0


def test_stroke_width_rendered_plate(michigan):
    # The median-of-all-pixels estimator reads roughly half the width of a
    # wide solid bar (plus the one-pixel boundary offset), so the rendered
    # nominal is an upper bound rather than the expectation.
    render = render_plate(michigan, 3967.0, 5.0, rng=np.random.default_rng(9))
    cs = segment_characters(render.image)
    nominal = 3967.0 * michigan.char_height_m / 5.0 / 6.0
    got = stroke_width(cs.binary_global, cs)
    assert 0.3 * nominal <= got <= 1.0 * nominal
    # and it agrees exactly with the BFS-oracle evaluation of the formula
    mask = np.zeros_like(cs.binary_global)
    for x, y, w, h in cs.boxes:
        mask[y : y + h, x : x + w] = True
    oracle = 2.0 * np.median(chamfer_bfs(cs.binary_global)[mask & cs.binary_global]) / cs.upscale
    assert got == pytest.approx(oracle)


def test_stroke_width_requires_foreground():
    cs = _bars_charset(width=3)
    empty = np.zeros_like(cs.binary_global)
    with pytest.raises(ValueError):
        stroke_width(empty, cs)


# ---------------------------------------------------------------------------
# spacing


def test_spacing_uniform_centers():
    cs = _charset([30, 30, 30], centers=[10.0, 20.0, 30.0])
    assert spacing(cs) == pytest.approx(10.0)


def test_spacing_mixed_centers():
    cs = _charset([30, 30, 30], centers=[0.0, 10.0, 25.0])
    assert spacing(cs) == pytest.approx(12.5)


def test_spacing_matches_rendered_pitch(michigan):
    render = render_plate(michigan, 3967.0, 6.0, rng=np.random.default_rng(10))
    cs = segment_characters(render.image)
    pitch = 3967.0 * michigan.char_gap_m / 6.0
    assert spacing(cs) == pytest.approx(pitch, abs=1.0)
