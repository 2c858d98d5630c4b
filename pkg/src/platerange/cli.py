"""Command-line interface: calibrate, simulate, budget, segment, range.

Exit codes: 0 on success, 2 for usage or configuration problems, 3 when the
pipeline itself fails at runtime (for example a plate that does not
segment). Configuration comes from an INI file plus PLATERANGE_-prefixed
environment overrides, so CI matrices never need file edits.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .camera import CalibrationSample, CameraModel, calibrate_focal
from .ranging import error_budget, feature_estimates, fuse_features
from .raster import read_pgm
from .segment import SegmentationError, mean_height, segment_characters, spacing, stroke_width
from .sim import PipelineConfig, load_scenario, run_pipeline
from .states import StateTable

__all__ = ["main"]

ENV_PREFIX = "PLATERANGE"

_CONFIG_DEFAULTS = {
    "run": {
        "out_dir": "out",
        "seed": "",
        "pose_compensation": "true",
        "deep_fusion": "true",
        "kalman": "true",
        "optical_check": "true",
        "use_raster": "false",
        "state_table": "",
        "assumed_state": "",
    },
    "camera": {
        "f_px": "3967",
        "width_px": "2880",
        "height_px": "1860",
    },
}


class ConfigError(ValueError):
    pass


def _load_config(path: Optional[str]) -> configparser.ConfigParser:
    """Defaults, then the config file, then environment overrides.

    An override for [section] key spells PLATERANGE_SECTION_KEY.
    """
    parser = configparser.ConfigParser()
    parser.read_dict(_CONFIG_DEFAULTS)
    if path:
        if not Path(path).is_file():
            raise ConfigError(f"config file not found: {path}")
        parser.read(path)
    for section in parser.sections():
        for key in parser[section]:
            env_key = f"{ENV_PREFIX}_{section.upper()}_{key.upper()}"
            if env_key in os.environ:
                parser[section][key] = os.environ[env_key]
    return parser


def _camera_from_config(cfg: configparser.ConfigParser) -> CameraModel:
    cam = cfg["camera"]
    return CameraModel(
        f_px=float(cam["f_px"]),
        width_px=int(cam["width_px"]),
        height_px=int(cam["height_px"]),
    )


def _read_camera_file(path: str) -> CameraModel:
    parser = configparser.ConfigParser()
    if not parser.read(path) or "camera" not in parser:
        raise ConfigError(f"camera file {path} missing [camera] section")
    return _camera_from_config(parser)


def _bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes", "on")


# ---------------------------------------------------------------------------
# calibrate


def _parse_samples(path: str) -> list[CalibrationSample]:
    samples = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read samples file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ConfigError(f"{path}:{lineno}: expected 'D_ref_m h_bar_px H_m'")
        try:
            d_ref, h_bar, h_char = (float(f) for f in fields)
            samples.append(CalibrationSample(d_ref, h_bar, h_char))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    if not samples:
        raise ConfigError(f"{path}: no samples")
    return samples


def cmd_calibrate(args: argparse.Namespace) -> int:
    samples = _parse_samples(args.samples)
    for i, s in enumerate(samples, start=1):
        print(f"sample {i}: D={s.d_ref_m:g} m  h={s.h_bar_px:g} px  H={s.char_height_m:g} m"
              f"  -> f = {s.focal_candidate():.1f} px")
    f_px = calibrate_focal(samples)
    print(f"median focal length: {f_px:.1f} px at width {args.width} px")
    out = configparser.ConfigParser()
    out["camera"] = {
        "f_px": f"{f_px:.3f}",
        "width_px": str(args.width),
        "height_px": str(args.height),
    }
    with open(args.out, "w") as fh:
        out.write(fh)
    print(f"camera file written: {args.out}")
    return 0


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    run = cfg["run"]
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    table_path = run.get("state_table", "")
    table = StateTable.from_file(table_path) if table_path else None
    assumed = args.state if args.state else (run.get("assumed_state") or None)
    pipeline = PipelineConfig(
        camera=_camera_from_config(cfg),
        table=table,
        assumed_state=assumed,
        pose_compensation=_bool(run["pose_compensation"]) and not args.no_pose,
        deep_fusion=_bool(run["deep_fusion"]) and not args.no_deep,
        kalman=_bool(run["kalman"]) and not args.no_kalman,
        optical_check=_bool(run["optical_check"]),
        use_raster=_bool(run["use_raster"]) or args.raster,
    )
    log = run_pipeline(scenario, pipeline)
    out_dir = Path(args.out or run["out_dir"])
    csv_path, json_path = log.write(out_dir, stem=args.stem)
    summary = log.summary()
    print(f"frames:            {summary['n_frames']}")
    print(f"occluded fraction: {summary['occluded_fraction']:.3f}")
    print(f"fused coverage:    {summary['fused_coverage']:.3f}")
    for key in ("mae_geo_m", "mae_geo_rel", "mae_fused_m", "mae_fused_rel", "rmse_fused_m",
                "std_raw_m", "std_smoothed_m"):
        value = summary[key]
        print(f"{key + ':':<19}{'n/a' if value is None else f'{value:.4f}'}")
    print(f"log written:       {csv_path}")
    print(f"summary written:   {json_path}")
    return 0


# ---------------------------------------------------------------------------
# budget


def cmd_budget(args: argparse.Namespace) -> int:
    terms = (args.focal, args.height, args.measurement, args.pitch, args.roll)
    if any(t < 0 for t in terms):
        raise ConfigError(f"error-budget terms must be non-negative, got {terms}")
    budget = error_budget(*terms)
    print(f"linear total: {budget.linear_total * 100:.4g}%")
    print(f"rss total:    {budget.rss_total * 100:.4g}%")
    return 0


# ---------------------------------------------------------------------------
# segment / range


def _charset_payload(path: str) -> tuple[dict, object]:
    img = read_pgm(path)
    cs = segment_characters(img)
    payload = {
        "n": cs.n,
        "method": cs.method,
        "upscale": cs.upscale,
        "boxes_working_px": [list(b) for b in cs.boxes],
        "heights_px": [float(h) for h in cs.heights],
        "widths_px": [float(w) for w in cs.widths],
        "gaps_px": [float(g) for g in cs.gaps],
        "mean_height_px": mean_height(cs),
    }
    return payload, cs


def cmd_segment(args: argparse.Namespace) -> int:
    payload, _ = _charset_payload(args.image)
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"charset written: {args.out}")
    else:
        print(text)
    return 0


def cmd_range(args: argparse.Namespace) -> int:
    camera = _read_camera_file(args.camera)
    table = StateTable.bundled()
    spec = (table.get(args.state) if args.state else None) or table.default
    payload, cs = _charset_payload(args.image)
    h_bar = payload["mean_height_px"]
    s_bar = stroke_width(cs.binary, cs)
    g_bar = spacing(cs)
    prior = camera.f_px * spec.char_height_m / h_bar
    ests = feature_estimates(camera.f_px, spec, h_bar, s_bar, g_bar, prior)
    d_fused, sigma = fuse_features(ests)
    result = {
        "state_id": spec.state_id,
        "char_height_m": spec.char_height_m,
        "f_px": camera.f_px,
        "h_bar_px": h_bar,
        "stroke_px": s_bar,
        "gap_px": g_bar,
        "n_chars": payload["n"],
        "estimates": [
            {"feature": e.feature.value, "distance_m": e.distance_m, "sigma_m": e.sigma_m}
            for e in ests
        ],
        "distance_m": d_fused,
        "sigma_m": sigma,
    }
    text = json.dumps(result, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"range written: {args.out}")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platerange",
        description="Monocular ranging from license-plate typography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="median focal length from known-distance samples")
    p.add_argument("samples", help="text file of 'D_ref_m h_bar_px H_m' rows")
    p.add_argument("--out", default="camera.ini", help="camera file to write")
    p.add_argument("--width", type=int, default=2880, help="calibration image width in px")
    p.add_argument("--height", type=int, default=1860, help="calibration image height in px")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("simulate", help="run a scenario through the full pipeline")
    p.add_argument("scenario", help="scenario INI file")
    p.add_argument("--config", default=None, help="run-config INI file")
    p.add_argument("--out", default=None, help="output directory (default from config)")
    p.add_argument("--stem", default="session", help="basename for CSV/JSON outputs")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--state", default=None, help="assume this jurisdiction instead of the true one")
    p.add_argument("--no-pose", action="store_true", help="disable pose compensation")
    p.add_argument("--no-deep", action="store_true", help="disable the relative-depth branch")
    p.add_argument("--no-kalman", action="store_true", help="disable temporal smoothing")
    p.add_argument("--raster", action="store_true", help="rasterize every frame (slow, end-to-end)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("budget", help="linear and RSS error-budget totals")
    p.add_argument("--focal", type=float, default=0.015, help="relative focal-length error")
    p.add_argument("--height", type=float, default=0.023, help="relative character-height tolerance")
    p.add_argument("--measurement", type=float, default=0.026, help="relative height-measurement noise")
    p.add_argument("--pitch", type=float, default=0.0, help="tan(phi) * dphi term")
    p.add_argument("--roll", type=float, default=0.0, help="tan(psi) * dpsi term")
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("segment", help="segment characters from a PGM plate image")
    p.add_argument("image", help="plate raster (binary PGM, P5)")
    p.add_argument("--out", default=None, help="write the charset JSON here instead of stdout")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("range", help="distance from a PGM plate image and a camera file")
    p.add_argument("image", help="plate raster (binary PGM, P5)")
    p.add_argument("--camera", required=True, help="camera INI file (from calibrate)")
    p.add_argument("--state", default=None, help="jurisdiction id (default: conservative fallback)")
    p.add_argument("--out", default=None, help="write the distance JSON here instead of stdout")
    p.set_defaults(func=cmd_range)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SegmentationError as exc:
        print(f"pipeline failure: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(f"pipeline failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
