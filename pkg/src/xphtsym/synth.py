"""Synthetic binary test shapes and PGM output."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

__all__ = ["disc", "annulus", "rectangle", "mirrored_blob", "to_pgm", "SynthError"]


class SynthError(ValueError):
    pass


def _centers(shape):
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w]
    return xx + 0.5 - w / 2.0, yy + 0.5 - h / 2.0


def disc(resolution: int, radius: float | None = None, offset=(0.0, 0.0)) -> np.ndarray:
    """Pixels whose centre lies within ``radius`` of the image centre (shifted by ``offset``).

    The default radius is a third of the resolution.
    """
    if radius is None:
        radius = resolution / 3.0
    if resolution <= 0 or radius <= 0:
        raise SynthError("resolution and radius must be positive")
    x, y = _centers((resolution, resolution))
    x, y = x - offset[0], y - offset[1]
    return x * x + y * y <= radius * radius


def annulus(resolution: int, inner: float, outer: float) -> np.ndarray:
    if not 0 < inner < outer:
        raise SynthError(f"need 0 < inner < outer, got inner={inner}, outer={outer}")
    x, y = _centers((resolution, resolution))
    d2 = x * x + y * y
    return (d2 <= outer * outer) & (d2 >= inner * inner)


def rectangle(width: int, height: int, canvas=(200, 200)) -> np.ndarray:
    """Axis-aligned ``width x height`` block centred in a ``canvas`` (width, height)."""
    cw, ch = canvas
    if not (0 < width <= cw and 0 < height <= ch):
        raise SynthError("rectangle must fit inside the canvas")
    m = np.zeros((ch, cw), dtype=bool)
    x0, y0 = (cw - width) // 2, (ch - height) // 2
    m[y0:y0 + height, x0:x0 + width] = True
    return m


def mirrored_blob(resolution: int = 128, angle: float = 30.0, seed: int = 0,
                  size: int | None = None) -> np.ndarray:
    """Random 4-connected blob united with its mirror image.

    The blob grows one random boundary pixel at a time from a seed placed
    beside the mirror line which passes through the image centre at
    ``angle`` degrees from the x-axis (counterclockwise, y up as viewed).
    The mirror copy samples, for every pixel, the blob pixel under its
    reflected centre, so it has no rasterization gaps.
    """
    if resolution < 16:
        raise SynthError("mirrored blob needs a resolution of at least 16")
    rng = np.random.default_rng(seed)
    if size is None:
        size = resolution * resolution // 16
    c = resolution / 2.0
    t = np.radians(angle)
    # planar coordinates: x to the right, y up, origin at the image centre
    x, y = _centers((resolution, resolution))
    y = -y
    inside = x * x + y * y <= (c - 2.0) ** 2

    # seed off the line and also along it, so the perpendicular line is no near-symmetry
    off = resolution / 8.0
    sx, sy = (np.cos(t) - np.sin(t)) * off, (np.sin(t) + np.cos(t)) * off
    r0, c0 = int(np.floor(c - sy)), int(np.floor(c + sx))
    blob = np.zeros((resolution, resolution), dtype=bool)
    frontier = [(r0, c0)]
    grown = 0
    while frontier and grown < size:
        k = int(rng.integers(len(frontier)))
        frontier[k], frontier[-1] = frontier[-1], frontier[k]
        r, col = frontier.pop()
        if not (0 <= r < resolution and 0 <= col < resolution) or blob[r, col] or not inside[r, col]:
            continue
        blob[r, col] = True
        grown += 1
        frontier.extend([(r + 1, col), (r - 1, col), (r, col + 1), (r, col - 1)])
    # smooth the ragged growth front, then keep one 4-connected piece
    blob = ndimage.gaussian_filter(blob.astype(float), resolution / 48.0) > 0.5
    lab, n = ndimage.label(blob)
    if n > 1:
        blob = lab == 1 + int(np.argmax(ndimage.sum(blob, lab, range(1, n + 1))))
    blob = ndimage.binary_fill_holes(blob)

    t2 = 2.0 * t
    mx = np.cos(t2) * x + np.sin(t2) * y
    my = np.sin(t2) * x - np.cos(t2) * y
    mc = np.floor(mx + c).astype(int)
    mr = np.floor(c - my).astype(int)
    ok = (mc >= 0) & (mc < resolution) & (mr >= 0) & (mr < resolution)
    mirrored = np.zeros_like(blob)
    mirrored[ok] = blob[mr[ok], mc[ok]]
    return blob | mirrored


def to_pgm(mask: np.ndarray) -> bytes:
    """Binary (P5) PGM with foreground black on a white background."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    pixels = np.where(mask, 0, 255).astype(np.uint8)
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()
