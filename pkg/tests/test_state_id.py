import numpy as np
import pytest

from platerange.state_id import (
    Design,
    DesignCatalog,
    HsvRange,
    MarkerCatalog,
    OcrRead,
    Stage,
    StateDecision,
    decide,
    hsv_scores,
    match_markers,
    rgb_to_hsv,
)


@pytest.fixture(scope="module")
def markers():
    return MarkerCatalog.bundled()


def _pixels(*hues, s=0.8, v=0.8):
    return np.array([[h, s, v] for h in hues], dtype=float)


def _two_state_catalog(boost_b=False):
    designs = [
        Design("alpha", 1.0, (HsvRange(0, 50, 0.5, 1.0, 0.5, 1.0),)),
        Design("bravo", 1.0, (HsvRange(100, 150, 0.5, 1.0, 0.5, 1.0),)),
    ]
    return DesignCatalog(designs, frozenset({"bravo"} if boost_b else ()))


# ---------------------------------------------------------------------------
# Stage 1: marker matching


def test_longer_phrase_beats_higher_lone_confidence(markers):
    reads = [OcrRead("PURE MICHIGAN", 0.92), OcrRead("MICHIGAN", 0.80)]
    decision = match_markers(reads, markers)
    assert decision == StateDecision("michigan", 0.92, Stage.TEXT)


def test_below_confidence_threshold_returns_none(markers):
    assert match_markers([OcrRead("MICHIGAN", 0.55)], markers) is None


def test_no_reads_returns_none(markers):
    assert match_markers([], markers) is None


def test_prefix_match_only_without_full_match(markers):
    partial = match_markers([OcrRead("MICH", 0.9)], markers)
    assert partial is not None and partial.state_id == "michigan"
    # a full match elsewhere suppresses partial candidates entirely
    both = match_markers([OcrRead("MICH", 0.99), OcrRead("TEXAS", 0.7)], markers)
    assert both.state_id == "texas"


def test_match_normalizes_case_and_whitespace(markers):
    decision = match_markers([OcrRead("  pure   michigan ", 0.85)], markers)
    assert decision.state_id == "michigan"


def test_match_invariant_to_read_order(markers):
    reads = [
        OcrRead("EMPIRE STATE", 0.7),
        OcrRead("LONE STAR STATE", 0.75),
        OcrRead("OHIO", 0.95),
    ]
    rng = np.random.default_rng(0)
    baseline = match_markers(reads, markers)
    for _ in range(10):
        shuffled = list(rng.permutation(reads))
        assert match_markers(shuffled, markers) == baseline


def test_bundled_marker_catalog_size(markers):
    assert len(markers) >= 90


# ---------------------------------------------------------------------------
# Stage 2: HSV scoring


def test_all_pixels_one_design_scores_one():
    cat = _two_state_catalog()
    scores = hsv_scores(_pixels(10, 20, 30), cat)
    assert scores["alpha"] == pytest.approx(1.0)
    assert scores["bravo"] == pytest.approx(0.0)


def test_boost_example_normalizes_even():
    # raw 0.3 vs 0.1, the weaker state boosted by +0.20 -> both 0.5
    cat = _two_state_catalog(boost_b=True)
    hues = [10] * 30 + [120] * 10 + [250] * 60
    scores = hsv_scores(_pixels(*hues), cat)
    assert scores["alpha"] == pytest.approx(0.5)
    assert scores["bravo"] == pytest.approx(0.5)


def test_boost_needs_a_color_match():
    cat = _two_state_catalog(boost_b=True)
    scores = hsv_scores(_pixels(10, 20), cat)  # nothing lands in bravo's range
    assert scores["bravo"] == pytest.approx(0.0)


def test_no_pixels_in_any_range_is_uniform():
    cat = _two_state_catalog()
    scores = hsv_scores(_pixels(200, 210, 220), cat)
    assert scores["alpha"] == pytest.approx(0.5)
    assert scores["bravo"] == pytest.approx(0.5)


def test_scores_normalized_and_nonnegative():
    cat = DesignCatalog.bundled()
    rng = np.random.default_rng(1)
    for _ in range(20):
        pixels = np.column_stack(
            [rng.uniform(0, 360, 200), rng.uniform(0, 1, 200), rng.uniform(0, 1, 200)]
        )
        scores = hsv_scores(pixels, cat)
        assert sum(scores.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(v >= 0 for v in scores.values())


def test_weight_scaling_preserves_argmax_without_boosts():
    rng = np.random.default_rng(2)
    base = DesignCatalog.bundled()
    pixels = np.column_stack(
        [rng.uniform(0, 360, 300), rng.uniform(0, 1, 300), rng.uniform(0, 1, 300)]
    )
    ref = hsv_scores(pixels, base, apply_boosts=False)
    for k in (0.5, 3.0, 17.0):
        scaled = DesignCatalog(
            [Design(d.state_id, d.weight * k, d.ranges) for d in base.designs],
            base.boost_states,
        )
        got = hsv_scores(pixels, scaled, apply_boosts=False)
        assert max(ref, key=ref.get) == max(got, key=got.get)


def test_wrapped_hue_range():
    rng = HsvRange(340, 20, 0.0, 1.0, 0.0, 1.0)
    hsv = _pixels(350, 10, 180)
    assert rng.contains(hsv).tolist() == [True, True, False]


def test_empty_pixels_rejected():
    with pytest.raises(ValueError):
        hsv_scores(np.empty((0, 3)), _two_state_catalog())


def test_bundled_design_catalog_boosts():
    cat = DesignCatalog.bundled()
    assert cat.boost_states == {
        "delaware", "new_jersey", "vermont", "alaska", "oklahoma", "new_mexico",
    }
    assert len(cat.designs) >= 10


# ---------------------------------------------------------------------------
# Stage 3 fusion


def test_text_decision_bypasses_everything():
    stage1 = StateDecision("michigan", 0.92, Stage.TEXT)
    out = decide(stage1, {"texas": 1.0})
    assert out is stage1


def test_clear_color_margin_decides():
    out = decide(None, {"alpha": 0.6, "bravo": 0.2, "charlie": 0.2})
    assert out.state_id == "alpha"
    assert out.stage is Stage.COLOR
    assert out.confidence == pytest.approx(0.6)


def test_narrow_margin_with_weak_combination_defaults():
    stage2 = {"alpha": 0.40, "bravo": 0.35}
    stage3 = {"alpha": 0.2, "bravo": 0.7}
    # combined: alpha 0.32, bravo 0.49 -> below the 0.5 floor
    out = decide(None, stage2, stage3)
    assert out.stage is Stage.DEFAULT
    assert out.state_id == "default"


def test_combination_clears_floor():
    stage2 = {"alpha": 0.55, "bravo": 0.45}
    out = decide(None, stage2, {"alpha": 0.6, "bravo": 0.4})
    assert out.stage is Stage.COMBINED
    assert out.state_id == "alpha"
    assert out.confidence == pytest.approx(0.6 * 0.55 + 0.4 * 0.6)


def test_missing_classifier_uses_color_alone():
    out = decide(None, {"alpha": 0.52, "bravo": 0.48})
    assert out.stage is Stage.COMBINED
    assert out.confidence == pytest.approx(0.52)


def test_decision_confidence_bounded():
    rng = np.random.default_rng(3)
    for _ in range(100):
        raw = rng.dirichlet(np.ones(4))
        stage2 = {f"s{i}": float(v) for i, v in enumerate(raw)}
        stage3 = {f"s{i}": float(v) for i, v in enumerate(rng.dirichlet(np.ones(4)))}
        out = decide(None, stage2, stage3 if rng.random() < 0.5 else None)
        assert 0.0 <= out.confidence <= 1.0
        if out.stage is Stage.DEFAULT:
            # nothing cleared a threshold
            top2 = sorted(stage2.values(), reverse=True)
            assert top2[0] - top2[1] < 0.15


def test_margin_thresholds_through_real_pixels():
    cat = _two_state_catalog()
    # 57/43 split: margin 0.14 falls through to the combined stage
    hues_14 = [10] * 57 + [120] * 43
    scores = hsv_scores(_pixels(*hues_14), cat)
    assert scores["alpha"] - scores["bravo"] == pytest.approx(0.14)
    out = decide(None, scores)
    assert out.stage is Stage.COMBINED
    # 58/42 split: margin 0.16 decides at the color stage
    hues_16 = [10] * 58 + [120] * 42
    scores = hsv_scores(_pixels(*hues_16), cat)
    assert scores["alpha"] - scores["bravo"] == pytest.approx(0.16)
    out = decide(None, scores)
    assert out.stage is Stage.COLOR


# ---------------------------------------------------------------------------
# Color conversion


def test_rgb_to_hsv_primaries():
    hsv = rgb_to_hsv(np.array([[255, 0, 0], [0, 255, 0], [0, 0, 255], [128, 128, 128]]))
    assert hsv[0] == pytest.approx([0.0, 1.0, 1.0])
    assert hsv[1] == pytest.approx([120.0, 1.0, 1.0])
    assert hsv[2] == pytest.approx([240.0, 1.0, 1.0])
    assert hsv[3, 1] == pytest.approx(0.0)
