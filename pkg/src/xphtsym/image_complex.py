"""Binary image ingestion, cubical complexes, centering and unit-disc scaling.

Planar coordinates place the lattice corner of column ``c`` and row ``r`` at
``(c, height - r)``: x grows to the right and y grows upward, so angles are
measured counterclockwise from the positive x-axis as the image is viewed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

__all__ = [
    "BinaryImage",
    "ShapeComplex",
    "DirectionSet",
    "ImageError",
    "EmptyShapeError",
    "load_binary_image",
    "image_from_mask",
    "build_complex",
    "derive_center",
    "normalize",
    "height",
]

DARK = "dark"
LIGHT = "light"

# Relative tolerance used to decide that two vertex heights tie.
TIE_RTOL = 1e-9


class ImageError(ValueError):
    """Raised when an image file cannot be decoded."""


class EmptyShapeError(ImageError):
    """Raised when thresholding leaves no foreground pixel."""

    def __init__(self, message: str = "empty shape: no foreground pixels"):
        super().__init__(message)


def _frozen(a, dtype=None) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Foreground mask of a ``height x width`` image, indexed ``mask[row, col]``."""

    mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mask", _frozen(self.mask, dtype=bool))
        if self.mask.ndim != 2:
            raise ValueError("mask must be two-dimensional")

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def foreground(self) -> set[tuple[int, int]]:
        rows, cols = np.nonzero(self.mask)
        return {(int(c), int(r)) for r, c in zip(rows, cols)}

    @classmethod
    def from_pixels(cls, width: int, height: int,
                    pixels: Iterable[tuple[int, int]]) -> "BinaryImage":
        mask = np.zeros((height, width), dtype=bool)
        for c, r in pixels:
            if not (0 <= c < width and 0 <= r < height):
                raise ValueError(f"pixel {(c, r)} outside {width}x{height} image")
            mask[r, c] = True
        return cls(mask)

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.mask.shape == other.mask.shape and bool(np.all(self.mask == other.mask))


@dataclass(frozen=True, eq=False)
class ShapeComplex:
    """Closed cubical complex of unit squares with real planar vertex positions.

    Cells are identified globally: vertices ``0..V-1``, edges ``V..V+E-1``,
    squares ``V+E..V+E+F-1``. ``square_edges`` stores the four edge indices
    bounding each square; ``labels`` holds a component index per vertex.
    ``scale`` records the factor the coordinates were divided by when the
    complex was normalized (1.0 for raw lattice coordinates).
    """

    vertices: np.ndarray
    edges: np.ndarray
    squares: np.ndarray
    square_edges: np.ndarray
    labels: np.ndarray
    scale: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(self.vertices, dtype=float).reshape(-1, 2))
        object.__setattr__(self, "edges", _frozen(self.edges, dtype=np.int64).reshape(-1, 2))
        object.__setattr__(self, "squares", _frozen(self.squares, dtype=np.int64).reshape(-1, 4))
        object.__setattr__(self, "square_edges",
                           _frozen(self.square_edges, dtype=np.int64).reshape(-1, 4))
        object.__setattr__(self, "labels", _frozen(self.labels, dtype=np.int64))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_squares(self) -> int:
        return len(self.squares)

    @property
    def n_cells(self) -> int:
        return self.n_vertices + self.n_edges + self.n_squares

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_squares

    @property
    def n_components(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def n_holes(self) -> int:
        return self.n_components - self.euler_characteristic

    def with_vertices(self, vertices, scale=None, center=None) -> "ShapeComplex":
        return ShapeComplex(vertices, self.edges, self.squares, self.square_edges, self.labels,
                            self.scale if scale is None else scale,
                            self.center if center is None else center)


@dataclass(frozen=True)
class DirectionSet:
    """``N`` equally spaced unit vectors ``v_i`` at angle ``2*pi*i/N``, ``i = 1..N``.

    Row ``k`` of :attr:`vectors` holds ``v_{k+1}``.
    """

    n: int
    vectors: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n <= 0 or self.n % 2:
            raise ValueError(f"number of directions must be even and positive, got {self.n}")
        theta = 2.0 * np.pi * np.arange(1, self.n + 1) / self.n
        object.__setattr__(self, "vectors", _frozen(np.column_stack([np.cos(theta), np.sin(theta)])))

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.vectors)

    @property
    def angles_degrees(self) -> np.ndarray:
        return 360.0 * np.arange(1, self.n + 1) / self.n


def height(points, v) -> np.ndarray | float:
    """Height ``<x, v>`` of one point or an ``(n, 2)`` array of points.

    Written out component-wise so that sign flips and coordinate swaps of
    ``points`` and ``v`` reproduce heights bit for bit.
    """
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        return float(p[0] * v[0] + p[1] * v[1])
    return p[:, 0] * v[0] + p[:, 1] * v[1]


def _luminance(img: Image.Image) -> np.ndarray:
    if img.mode in ("I;16", "I;16B", "I;16L", "I"):
        a = np.asarray(img, dtype=np.float64)
        top = 65535.0 if a.max() > 255 else 255.0
        return np.rint(a * 255.0 / top)
    if img.mode == "1":
        return np.where(np.asarray(img), 255.0, 0.0)
    if img.mode == "P":
        img = img.convert("RGBA")
    if img.mode == "LA":
        a = np.asarray(img, dtype=np.float64)
        lum, alpha = a[..., 0], a[..., 1] / 255.0
        return np.rint(lum * alpha + 255.0 * (1.0 - alpha))
    if img.mode == "L":
        return np.asarray(img, dtype=np.float64)
    if img.mode not in ("RGB", "RGBA"):
        img = img.convert("RGBA")
    a = np.asarray(img, dtype=np.float64)
    rgb = a[..., :3]
    if a.shape[-1] == 4:
        alpha = a[..., 3:4] / 255.0
        rgb = rgb * alpha + 255.0 * (1.0 - alpha)
    return np.rint(0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2])


def load_binary_image(data: bytes, polarity: str = DARK, threshold: float = 128) -> BinaryImage:
    """Decode PBM, PGM or PNG bytes and threshold them into a foreground mask.

    A pixel is foreground when its luminance is below ``threshold`` for dark
    polarity, or at least ``threshold`` for light polarity.
    """
    if polarity not in (DARK, LIGHT):
        raise ValueError(f"polarity must be {DARK!r} or {LIGHT!r}, got {polarity!r}")
    if not 0 <= threshold <= 255:
        raise ValueError("luminance threshold must lie in [0, 255]")
    try:
        with Image.open(io.BytesIO(data)) as img:
            if img.format not in ("PPM", "PNG"):
                raise ImageError(f"unsupported image format {img.format}")
            img.load()
            lum = _luminance(img)
    except ImageError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        # Pillow reports some truncated headers as ValueError
        raise ImageError(f"could not decode image: {exc}") from exc
    mask = lum < threshold if polarity == DARK else lum >= threshold
    if not mask.any():
        raise EmptyShapeError()
    return BinaryImage(mask)


def image_from_mask(mask) -> BinaryImage:
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyShapeError()
    return BinaryImage(mask)


def build_complex(image: BinaryImage) -> ShapeComplex:
    """Closed cubical complex with one unit square per foreground pixel."""
    mask = image.mask
    if not mask.any():
        raise EmptyShapeError()
    H, W = mask.shape
    rows, cols = np.nonzero(mask)  # row-major pixel order
    lw = W + 1

    def lattice(r, c):
        return r * lw + c

    # corners: top-left, top-right, bottom-right, bottom-left in image terms
    corner_ids = np.stack([lattice(rows, cols), lattice(rows, cols + 1),
                           lattice(rows + 1, cols + 1), lattice(rows + 1, cols)], axis=1)
    vert_lattice, sq_vertices = np.unique(corner_ids, return_inverse=True)
    sq_vertices = sq_vertices.reshape(-1, 4)
    vr, vc = np.divmod(vert_lattice, lw)
    vertices = np.column_stack([vc.astype(float), (H - vr).astype(float)])

    # each square's edges as (smaller vertex, larger vertex) pairs
    nxt = np.roll(sq_vertices, -1, axis=1)
    lo = np.minimum(sq_vertices, nxt)
    hi = np.maximum(sq_vertices, nxt)
    nv = len(vertices)
    edge_keys = (lo * nv + hi).ravel()
    uniq_keys, sq_edges = np.unique(edge_keys, return_inverse=True)
    edges = np.column_stack(np.divmod(uniq_keys, nv))
    sq_edges = sq_edges.reshape(-1, 4) + nv

    # corner-sharing pixels are connected: 8-connectivity on the pixel grid
    pix_labels, _ = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    sq_lab = pix_labels[rows, cols] - 1
    # ndimage numbers components in raster order of their first pixel; keep that
    labels = np.empty(nv, dtype=np.int64)
    labels[sq_vertices.ravel()] = np.repeat(sq_lab, 4)

    return ShapeComplex(vertices, edges, sq_vertices, sq_edges, labels)


def _support_points(vertices: np.ndarray, directions: DirectionSet) -> np.ndarray:
    extent = float(np.max(np.abs(vertices))) if len(vertices) else 1.0
    tol = TIE_RTOL * max(1.0, extent)
    out = np.empty((len(directions), 2))
    for k, v in enumerate(directions.vectors):
        h = height(vertices, v)
        tied = np.nonzero(h <= h.min() + tol)[0]
        if len(tied) == 1:
            out[k] = vertices[tied[0]]
            continue
        # tied minima lie on one supporting line: take the midpoint of its extent
        along = height(vertices[tied], (-v[1], v[0]))
        a = tied[np.lexsort((vertices[tied, 1], vertices[tied, 0], along))[0]]
        b = tied[np.lexsort((vertices[tied, 1], vertices[tied, 0], -along))[0]]
        out[k] = 0.5 * (vertices[a] + vertices[b])
    return out


def derive_center(complex_: ShapeComplex, directions: DirectionSet) -> np.ndarray:
    """Mean of the lowest boundary point of the shape in every direction.

    The lowest vertex in direction ``v`` sits at the first degree-0 birth of
    the height filtration. When several vertices tie for the minimum the
    midpoint of the flat supporting face is used, so symmetric shapes get a
    symmetric center.
    """
    if complex_.n_vertices == 0:
        raise EmptyShapeError()
    return _support_points(complex_.vertices, directions).mean(axis=0)


def normalize(complex_: ShapeComplex, center) -> ShapeComplex:
    """Translate ``center`` to the origin and scale the farthest vertex to norm 1."""
    c = np.asarray(center, dtype=float)
    shifted = complex_.vertices - c
    r_max = float(np.sqrt((shifted ** 2).sum(axis=1)).max())
    assert r_max > 0.0, "a complex with extent cannot collapse to a point"
    out = shifted / r_max
    # the rounded quotient can miss norm 1 by an ulp; one or two more passes fix that
    for _ in range(4):
        m = float(np.sqrt((out ** 2).sum(axis=1)).max())
        if m == 1.0:
            break
        out = out / m
        r_max *= m
    return complex_.with_vertices(out, scale=r_max, center=(float(c[0]), float(c[1])))
