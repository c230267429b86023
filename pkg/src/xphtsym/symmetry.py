"""Asymmetry scores of a shape under the rotations and reflections that
permute a set of equally spaced directions."""

from __future__ import annotations

import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .image_complex import DirectionSet, ShapeComplex, derive_center, normalize
from .persistence import Kind, XPHDiagram, xph
from .wasserstein import w1_tuple

__all__ = [
    "ScoreTable",
    "SymmetryReport",
    "REPORT_VERSION",
    "compute_xpht",
    "distance_matrix",
    "rotation_scores",
    "reflection_scores",
    "rotation_matrix",
    "reflection_matrix",
    "asymmetry_score",
    "shape_distance",
    "find_local_minima",
    "prepare",
    "analyze",
]

REPORT_VERSION = 1
DEFAULT_THRESHOLD = 0.06

DiagramPair = tuple[XPHDiagram, XPHDiagram]


def _xpht_chunk(args):
    cx, vectors = args
    return [xph(cx, v) for v in vectors]


def _chunks(n, workers):
    k = max(1, min(n, 4 * workers))
    bounds = np.linspace(0, n, k + 1).astype(int)
    return [(bounds[i], bounds[i + 1]) for i in range(k) if bounds[i] < bounds[i + 1]]


def compute_xpht(cx: ShapeComplex, directions: DirectionSet, workers: int = 1) -> list[DiagramPair]:
    """Diagram pair ``(XPH_0, XPH_1)`` for every direction, in direction order."""
    vecs = directions.vectors
    if workers <= 1:
        return [xph(cx, v) for v in vecs]
    jobs = [(cx, vecs[a:b]) for a, b in _chunks(len(vecs), workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [pair for part in pool.map(_xpht_chunk, jobs) for pair in part]


def _rows_chunk(args):
    xpht, a, b = args
    n = len(xpht)
    return [[w1_tuple(xpht[i], xpht[j]) for j in range(i + 1, n)] for i in range(a, b)]


def distance_matrix(xpht: list[DiagramPair], workers: int = 1) -> np.ndarray:
    """Symmetric matrix of distances between the diagrams of every two directions."""
    n = len(xpht)
    if n < 2:
        raise ValueError("need at least two directions")
    if workers <= 1:
        rows = _rows_chunk((xpht, 0, n))
    else:
        jobs = [(xpht, a, b) for a, b in _chunks(n, workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for part in pool.map(_rows_chunk, jobs) for r in part]
    D = np.zeros((n, n))
    for i, row in enumerate(rows):
        D[i, i + 1:] = row
        D[i + 1:, i] = row
    return D


@dataclass(frozen=True, eq=False)
class ScoreTable:
    flavor: str
    angles: np.ndarray
    scores: np.ndarray

    def __len__(self):
        return len(self.scores)

    def entries(self) -> list[tuple[float, float]]:
        return [(float(a), float(s)) for a, s in zip(self.angles, self.scores)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("angle_degrees,score\n")
        for a, s in self.entries():
            buf.write(f"{a!r},{s!r}\n")
        return buf.getvalue()


def rotation_scores(D: np.ndarray) -> ScoreTable:
    """Mean distance between directions ``v_j`` and ``v_j`` rotated by ``360(i-1)/N``."""
    N = len(D)
    scores = np.empty(N)
    for i in range(1, N + 1):
        s = 0.0
        for j in range(1, N + 1):
            s += D[j - 1, (i + j - 2) % N]
        scores[i - 1] = s / N
    angles = 360.0 * np.arange(N) / N
    return ScoreTable("rotation", angles, scores)


def reflection_scores(D: np.ndarray) -> ScoreTable:
    """Mean distance between ``v_j`` and its mirror in the line at ``180 i/N`` degrees."""
    N = len(D)
    scores = np.empty(N)
    for i in range(1, N + 1):
        s = 0.0
        for j in range(1, N + 1):
            # Python's % already returns the nonnegative residue
            s += D[j - 1, (i - j - 1) % N]
        scores[i - 1] = s / N
    angles = 180.0 * np.arange(1, N + 1) / N
    return ScoreTable("reflection", angles, scores)


def rotation_matrix(degrees: float) -> np.ndarray:
    t = np.radians(degrees)
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def reflection_matrix(degrees: float) -> np.ndarray:
    """Reflection in the line through the origin at ``degrees`` from the x-axis."""
    t = 2.0 * np.radians(degrees)
    return np.array([[np.cos(t), np.sin(t)], [np.sin(t), -np.cos(t)]])


def _direction_permutation(T, directions: DirectionSet, atol=1e-9) -> np.ndarray:
    V = directions.vectors
    image = V @ np.asarray(T, dtype=float).T
    gap = np.abs(image[:, None, :] - V[None, :, :]).max(axis=2)
    perm = gap.argmin(axis=1)
    if np.any(gap[np.arange(len(V)), perm] > atol):
        raise ValueError("transformation does not map the direction set onto itself")
    return perm


def asymmetry_score(xpht: list[DiagramPair], T) -> float:
    """Mean distance between the diagrams at ``v_i`` and at ``T v_i``.

    ``T`` is a 2x2 orthogonal matrix that must permute the directions.
    """
    N = len(xpht)
    perm = _direction_permutation(T, DirectionSet(N))
    s = 0.0
    for i in range(N):
        s += 0.0 if perm[i] == i else w1_tuple(xpht[i], xpht[perm[i]])
    return s / N


def prepare(cx: ShapeComplex, directions: DirectionSet, normalized: bool = True) -> ShapeComplex:
    """Center a raw complex on its derived center and scale it into the unit disc."""
    if not normalized:
        return cx
    return normalize(cx, derive_center(cx, directions))


def shape_distance(M: ShapeComplex, N: ShapeComplex, directions: DirectionSet,
                   normalized: bool = True, workers: int = 1) -> float:
    """Mean over directions of the diagram distance between two shapes."""
    xa = compute_xpht(prepare(M, directions, normalized), directions, workers)
    xb = compute_xpht(prepare(N, directions, normalized), directions, workers)
    total = 0.0
    for a, b in zip(xa, xb):
        total += w1_tuple(a, b)
    return total / len(directions)


def find_local_minima(table: ScoreTable) -> list[tuple[float, float]]:
    """Entries below both circular neighbours.

    A run of equal scores counts once, at its first index, when the scores on
    either side of the run are strictly larger.
    """
    s = np.asarray(table.scores)
    n = len(s)
    if n < 3 or np.all(s == s[0]):
        return []
    # rotate so that index 0 starts a run
    start = next(i for i in range(n) if s[i] != s[i - 1])
    out = []
    i = 0
    while i < n:
        k = (start + i) % n
        j = i
        while j + 1 < n and s[(start + j + 1) % n] == s[k]:
            j += 1
        before = s[(start + i - 1) % n]
        after = s[(start + j + 1) % n]
        if before > s[k] and after > s[k]:
            out.append(k)
        i = j + 1
    return [(float(table.angles[k]), float(s[k])) for k in sorted(out)]


@dataclass(frozen=True, eq=False)
class SymmetryReport:
    center: tuple[float, float]
    scale: float
    n_directions: int
    threshold: float
    rotation: ScoreTable
    reflection: ScoreTable
    components: int
    holes: int
    detected: dict = field(default_factory=dict)
    approximate: dict = field(default_factory=dict)

    @property
    def mean_score(self) -> float:
        return float(np.concatenate([self.rotation.scores, self.reflection.scores]).mean())

    @property
    def max_score(self) -> float:
        return float(max(self.rotation.scores.max(), self.reflection.scores.max()))

    def to_dict(self) -> dict:
        def table(t):
            return [{"angle_degrees": a, "score": s} for a, s in t.entries()]

        def pairs(d):
            return {k: [{"angle_degrees": a, "score": s} for a, s in v] for k, v in d.items()}

        return {
            "version": REPORT_VERSION,
            "n_directions": self.n_directions,
            "threshold": self.threshold,
            "center": list(self.center),
            "scale": self.scale,
            "essential_counts": {"components": self.components, "holes": self.holes},
            "rotation": table(self.rotation),
            "reflection": table(self.reflection),
            "detected": pairs(self.detected),
            "approximate": pairs(self.approximate),
            "summary": {"mean_score": self.mean_score, "max_score": self.max_score},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _detected(table: ScoreTable, threshold: float):
    return [(a, s) for a, s in table.entries() if s < threshold or s == 0.0]


def analyze(cx: ShapeComplex, directions: DirectionSet, threshold: float = DEFAULT_THRESHOLD,
            normalized: bool = True, workers: int = 1) -> SymmetryReport:
    """Full pipeline from a raw complex to rotation and reflection score tables."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    shape = prepare(cx, directions, normalized)
    xpht = compute_xpht(shape, directions, workers)
    D = distance_matrix(xpht, workers)
    rot, ref = rotation_scores(D), reflection_scores(D)
    dg0, dg1 = xpht[0]
    return SymmetryReport(
        center=tuple(float(c) for c in shape.center),
        scale=float(shape.scale),
        n_directions=len(directions),
        threshold=float(threshold),
        rotation=rot,
        reflection=ref,
        components=dg0.count(Kind.ESSENTIAL),
        holes=dg1.count(Kind.ESSENTIAL),
        detected={"rotation": _detected(rot, threshold), "reflection": _detected(ref, threshold)},
        approximate={"rotation": find_local_minima(rot), "reflection": find_local_minima(ref)},
    )
