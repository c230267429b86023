"""Command-line interface: ``xphtsym analyze | distance | synth | batch``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import synth
from .image_complex import DirectionSet, ImageError, build_complex, load_binary_image
from .plot import polar_svg
from .symmetry import DEFAULT_THRESHOLD, analyze, shape_distance

log = logging.getLogger("xphtsym")

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2
IMAGE_SUFFIXES = {".pbm", ".pgm", ".ppm", ".pnm", ".png"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    directions: int = 120
    threshold: float = DEFAULT_THRESHOLD
    polarity: str = "dark"
    luminance_threshold: float = 128
    normalize: bool = True
    out: str | None = None
    csv: str | None = None
    plot: str | None = None
    workers: int = 1
    angle_window: tuple[float, float] | None = None

    def validate(self):
        if self.directions < 4 or self.directions % 2:
            raise ConfigError(f"--directions must be even and at least 4, got {self.directions}")
        if not self.threshold >= 0:
            raise ConfigError("--threshold must be nonnegative")
        if not 0 <= self.luminance_threshold <= 255:
            raise ConfigError("--luminance-threshold must lie in [0, 255]")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        return self


def _angle_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LOW:HIGH in degrees, got {text!r}")
    return lo, hi


def _config(args) -> RunConfig:
    return RunConfig(
        directions=args.directions,
        threshold=args.threshold,
        polarity=args.polarity,
        luminance_threshold=args.luminance_threshold,
        normalize=not args.no_normalize,
        out=args.out,
        csv=getattr(args, "csv", None),
        plot=getattr(args, "plot", None),
        workers=args.workers,
        angle_window=getattr(args, "angle_window", None),
    ).validate()


def _load(path, cfg: RunConfig):
    data = Path(path).read_bytes()
    return build_complex(load_binary_image(data, cfg.polarity, cfg.luminance_threshold))


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_analyze(args) -> int:
    cfg = _config(args)
    try:
        cx = _load(args.image, cfg)
    except (OSError, ImageError) as exc:
        log.error("%s: %s", args.image, exc)
        return EXIT_INPUT
    report = analyze(cx, DirectionSet(cfg.directions), cfg.threshold, cfg.normalize, cfg.workers)
    _write(cfg.out, report.to_json())
    if cfg.csv:
        Path(f"{cfg.csv}_rotation.csv").write_text(report.rotation.to_csv())
        Path(f"{cfg.csv}_reflection.csv").write_text(report.reflection.to_csv())
    if cfg.plot:
        Path(cfg.plot).write_text(polar_svg(report, title=Path(args.image).name))
    return EXIT_OK


def cmd_distance(args) -> int:
    cfg = _config(args)
    try:
        a, b = _load(args.image_a, cfg), _load(args.image_b, cfg)
    except (OSError, ImageError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    d = shape_distance(a, b, DirectionSet(cfg.directions), cfg.normalize, cfg.workers)
    print(repr(d))
    if cfg.out:
        Path(cfg.out).write_text(json.dumps({
            "version": 1, "distance": d, "n_directions": cfg.directions, "normalized": cfg.normalize,
            "images": [str(args.image_a), str(args.image_b)]}, indent=2) + "\n")
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        if args.shape == "disc":
            mask = synth.disc(args.resolution, args.radius)
        elif args.shape == "annulus":
            outer = args.outer if args.outer is not None else args.resolution / 3.0
            inner = args.inner if args.inner is not None else outer / 2.0
            mask = synth.annulus(args.resolution, inner, outer)
        elif args.shape == "rectangle":
            mask = synth.rectangle(args.width, args.height, (args.resolution, args.resolution))
        else:
            mask = synth.mirrored_blob(args.resolution, args.angle, args.seed)
    except synth.SynthError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    Path(args.out).write_bytes(synth.to_pgm(mask))
    return EXIT_OK


def _in_window(angles, window):
    lo, hi = window
    a = np.asarray(angles) % 180.0
    lo, hi = lo % 180.0, hi % 180.0
    return (a >= lo) & (a <= hi) if lo <= hi else (a >= lo) | (a <= hi)


BATCH_FIELDS = ["file", "min_reflection_score", "min_reflection_angle", "min_rotation_score",
                "min_rotation_angle", "components", "holes", "mean_score"]


def cmd_batch(args) -> int:
    cfg = _config(args)
    folder = Path(args.directory)
    if not folder.is_dir():
        log.error("%s is not a directory", folder)
        return EXIT_CONFIG
    files = sorted(p for p in folder.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)
    if not files:
        log.error("no image files in %s", folder)
        return EXIT_CONFIG
    directions = DirectionSet(cfg.directions)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BATCH_FIELDS)
    ok = 0
    for path in files:
        try:
            cx = _load(path, cfg)
        except (OSError, ImageError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            continue
        rep = analyze(cx, directions, cfg.threshold, cfg.normalize, cfg.workers)
        ref_a, ref_s = rep.reflection.angles, rep.reflection.scores
        if cfg.angle_window is not None:
            sel = _in_window(ref_a, cfg.angle_window)
            if not sel.any():
                log.warning("%s: no reflection line inside the angle window", path.name)
                sel = np.ones_like(ref_s, dtype=bool)
            ref_a, ref_s = ref_a[sel], ref_s[sel]
        k = int(np.argmin(ref_s))
        rot_s = rep.rotation.scores[1:]
        r = int(np.argmin(rot_s)) + 1
        writer.writerow([path.name, repr(float(ref_s[k])), repr(float(ref_a[k])),
                         repr(float(rep.rotation.scores[r])), repr(float(rep.rotation.angles[r])),
                         rep.components, rep.holes, repr(rep.mean_score)])
        ok += 1
    _write(cfg.out, buf.getvalue())
    return EXIT_OK if ok else EXIT_INPUT


def _common(p, with_outputs=False):
    p.add_argument("--directions", type=int, default=120, help="number of directions N (even, >= 4)")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="scores below this count as detected symmetries")
    p.add_argument("--polarity", choices=["dark", "light"], default="dark",
                   help="which pixels are foreground")
    p.add_argument("--luminance-threshold", type=float, default=128)
    p.add_argument("--no-normalize", action="store_true",
                   help="skip centering and unit-disc scaling")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--workers", type=int, default=1)
    if with_outputs:
        p.add_argument("--csv", help="write PREFIX_rotation.csv and PREFIX_reflection.csv")
        p.add_argument("--plot", help="write a polar SVG plot to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xphtsym", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="rotation and reflection asymmetry scores of one image")
    p.add_argument("image")
    _common(p, with_outputs=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("distance", help="distance between two shapes")
    p.add_argument("image_a")
    p.add_argument("image_b")
    _common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("synth", help="write a synthetic shape as PGM")
    p.add_argument("shape", choices=["disc", "annulus", "rectangle", "mirrored-blob"])
    p.add_argument("--resolution", type=int, default=200, help="image (or canvas) side in pixels")
    p.add_argument("--radius", type=float, help="disc radius (default resolution/3)")
    p.add_argument("--inner", type=float, help="annulus inner radius (default outer/2)")
    p.add_argument("--outer", type=float, help="annulus outer radius (default resolution/3)")
    p.add_argument("--width", type=int, default=100, help="rectangle width")
    p.add_argument("--height", type=int, default=60, help="rectangle height")
    p.add_argument("--angle", type=float, default=30.0, help="mirror line angle in degrees")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("batch", help="summarise every image in a directory as CSV")
    p.add_argument("directory")
    _common(p)
    p.add_argument("--angle-window", type=_angle_window, metavar="LOW:HIGH",
                   help="restrict the bilateral (reflection) search to these line angles")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", level=logging.WARNING)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
