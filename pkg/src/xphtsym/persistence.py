"""Extended persistence of height functions on cubical complexes.

The extended filtration is realised as a single coned filtration: every cell
appears once in the ascending (sublevel) part and once as an algebraic cone
cell in the descending part. Reducing its boundary matrix over GF(2) pairs
every cell; each pair is an interval of the extended persistence diagram.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

import numpy as np

from ._reduce import reduce_columns
from .image_complex import ShapeComplex, height

__all__ = [
    "Tag",
    "Kind",
    "ThetaPoint",
    "XPHInterval",
    "XPHDiagram",
    "ConedFiltration",
    "height",
    "build_extended_filtration",
    "reduce_extended",
    "xph0_fast",
    "xph",
    "diagrams_to_json",
    "diagrams_from_json",
]


class Tag(str, enum.Enum):
    ORD = "Ord"
    REL = "Rel"


class Kind(str, enum.Enum):
    ORDINARY = "ordinary"
    RELATIVE = "relative"
    ESSENTIAL = "essential"


KINDS = (Kind.ORDINARY, Kind.RELATIVE, Kind.ESSENTIAL)


@total_ordering
@dataclass(frozen=True)
class ThetaPoint:
    """Filtration parameter: ascending ``Ord`` values then descending ``Rel`` values."""

    value: float
    tag: Tag

    def __post_init__(self):
        object.__setattr__(self, "tag", Tag(self.tag))
        object.__setattr__(self, "value", float(self.value))

    @property
    def order_key(self):
        return (0, self.value) if self.tag is Tag.ORD else (1, -self.value)

    def __lt__(self, other):
        if not isinstance(other, ThetaPoint):
            return NotImplemented
        return self.order_key < other.order_key


def Ord(value) -> ThetaPoint:
    return ThetaPoint(value, Tag.ORD)


def Rel(value) -> ThetaPoint:
    return ThetaPoint(value, Tag.REL)


_KIND_OF_TAGS = {
    (Tag.ORD, Tag.ORD): Kind.ORDINARY,
    (Tag.REL, Tag.REL): Kind.RELATIVE,
    (Tag.ORD, Tag.REL): Kind.ESSENTIAL,
}


@dataclass(frozen=True)
class XPHInterval:
    birth: ThetaPoint
    death: ThetaPoint
    degree: int

    def __post_init__(self):
        if (self.birth.tag, self.death.tag) not in _KIND_OF_TAGS:
            raise ValueError("an interval cannot be born in the relative part and die in the ordinary part")
        if self.death < self.birth:
            raise ValueError(f"birth {self.birth} after death {self.death}")

    @property
    def kind(self) -> Kind:
        return _KIND_OF_TAGS[(self.birth.tag, self.death.tag)]

    @property
    def persistence(self) -> float:
        return abs(self.birth.value - self.death.value)

    def as_tuple(self):
        return (self.degree, self.kind.value, self.birth.value, self.death.value)


def interval(kind: Kind | str, birth: float, death: float, degree: int = 0) -> XPHInterval:
    kind = Kind(kind)
    bt = Tag.REL if kind is Kind.RELATIVE else Tag.ORD
    dt = Tag.ORD if kind is Kind.ORDINARY else Tag.REL
    return XPHInterval(ThetaPoint(birth, bt), ThetaPoint(death, dt), degree)


@dataclass(frozen=True, eq=False)
class XPHDiagram:
    """Multiset of intervals of a single homology degree.

    Intervals of zero persistence are dropped when the diagram is built.
    """

    degree: int
    intervals: tuple[XPHInterval, ...]

    def __post_init__(self):
        kept = []
        for iv in self.intervals:
            if iv.degree != self.degree:
                raise ValueError(f"degree {iv.degree} interval in a degree {self.degree} diagram")
            if iv.birth.value != iv.death.value:
                kept.append(iv)
        kept.sort(key=lambda iv: (KINDS.index(iv.kind), iv.birth.value, iv.death.value))
        object.__setattr__(self, "intervals", tuple(kept))

    @classmethod
    def from_arrays(cls, degree, kinds, births, deaths) -> "XPHDiagram":
        ivs = [interval(k, b, d, degree) for k, b, d in zip(kinds, births, deaths)]
        return cls(degree, tuple(ivs))

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __eq__(self, other):
        if not isinstance(other, XPHDiagram):
            return NotImplemented
        return self.degree == other.degree and self.multiset() == other.multiset()

    def __hash__(self):
        return hash((self.degree, self.canonical_key))

    def __repr__(self):
        inner = ", ".join(f"{iv.kind.value[:3]}[{iv.birth.value:g},{iv.death.value:g})" for iv in self)
        return f"XPHDiagram(degree={self.degree}, [{inner}])"

    def multiset(self) -> Counter:
        return Counter(iv.as_tuple() for iv in self.intervals)

    def of_kind(self, kind: Kind | str) -> list[XPHInterval]:
        kind = Kind(kind)
        return [iv for iv in self.intervals if iv.kind is kind]

    def count(self, kind: Kind | str) -> int:
        return len(self.arrays(kind)[0])

    @cached_property
    def _arrays(self):
        out = {}
        for kind in KINDS:
            ivs = [iv for iv in self.intervals if iv.kind is kind]
            out[kind] = (np.array([iv.birth.value for iv in ivs], dtype=float),
                         np.array([iv.death.value for iv in ivs], dtype=float))
        return out

    def arrays(self, kind: Kind | str) -> tuple[np.ndarray, np.ndarray]:
        """Birth and death values of the intervals of one kind."""
        return self._arrays[Kind(kind)]

    @cached_property
    def canonical_key(self) -> bytes:
        parts = [str(self.degree).encode()]
        for kind in KINDS:
            b, d = self.arrays(kind)
            parts.append(kind.value.encode() + b.tobytes() + d.tobytes())
        return b"|".join(parts)

    def to_records(self) -> list[dict]:
        return [{"degree": iv.degree, "kind": iv.kind.value,
                 "birth": repr(iv.birth.value), "death": repr(iv.death.value)} for iv in self]


@dataclass(frozen=True, eq=False)
class ConedFiltration:
    """Ascending cells followed by cone cells, one row per filtration position.

    ``cell`` is the global cell id of the base cell, ``cone`` marks cone
    cells, ``dim`` is the dimension in the coned complex and ``value`` the
    height at which the cell enters. Boundaries are stored in CSR form as
    filtration positions.
    """

    cell: np.ndarray
    cone: np.ndarray
    dim: np.ndarray
    value: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray

    def __len__(self):
        return len(self.cell)

    def boundary(self, pos: int) -> np.ndarray:
        return self.indices[self.indptr[pos]:self.indptr[pos + 1]]

    @property
    def n_ascending(self) -> int:
        return int(np.count_nonzero(~self.cone))


def _cell_tables(cx: ShapeComplex, v):
    """Per-cell dimension, max and min vertex height, and face lists."""
    h = height(cx.vertices, v)
    nv, ne, nf = cx.n_vertices, cx.n_edges, cx.n_squares
    eh = h[cx.edges]
    sh = h[cx.squares]
    hi = np.concatenate([h, eh.max(axis=1), sh.max(axis=1)])
    lo = np.concatenate([h, eh.min(axis=1), sh.min(axis=1)])
    dims = np.concatenate([np.zeros(nv, np.int64), np.ones(ne, np.int64), np.full(nf, 2, np.int64)])
    faces = np.full((nv + ne + nf, 4), -1, dtype=np.int64)
    faces[nv:nv + ne, :2] = cx.edges
    faces[nv + ne:, :] = cx.square_edges
    return dims, hi, lo, faces


def build_extended_filtration(cx: ShapeComplex, v) -> ConedFiltration:
    """Coned filtration of the height function ``<x, v>`` on ``cx``.

    Ascending cells enter at their maximum vertex height, sorted by
    (value, dimension, id). Cone cells enter at the minimum vertex height of
    their base, sorted by (value descending, base dimension, id).
    """
    dims, hi, lo, faces = _cell_tables(cx, v)
    n0 = len(dims)
    ids = np.arange(n0)
    asc = np.lexsort((ids, dims, hi))
    con = np.lexsort((ids, dims, -lo))
    pos_asc = np.empty(n0, np.int64)
    pos_asc[asc] = ids
    pos_con = np.empty(n0, np.int64)
    pos_con[con] = ids + n0

    nfaces = (faces >= 0).sum(axis=1)
    safe = np.where(faces >= 0, faces, 0)

    asc_cols = np.where(faces >= 0, pos_asc[safe], -1)[asc]
    # cone(s) has boundary s + cone(faces of s)
    con_cols = np.concatenate([pos_asc[:, None], np.where(faces >= 0, pos_con[safe], -1)], axis=1)[con]

    counts = np.concatenate([nfaces[asc], nfaces[con] + 1])
    indptr = np.zeros(2 * n0 + 1, np.int64)
    np.cumsum(counts, out=indptr[1:])
    flat_asc = asc_cols.ravel()
    flat_con = con_cols.ravel()
    indices = np.concatenate([flat_asc[flat_asc >= 0], flat_con[flat_con >= 0]])

    return ConedFiltration(
        cell=np.concatenate([asc, con]),
        cone=np.concatenate([np.zeros(n0, bool), np.ones(n0, bool)]),
        dim=np.concatenate([dims[asc], dims[con] + 1]),
        value=np.concatenate([hi[asc], lo[con]]),
        indptr=indptr,
        indices=indices,
    )


def persistence_pairs(filt: ConedFiltration) -> np.ndarray:
    """``(birth position, death position)`` pairs of the reduced boundary matrix."""
    low = reduce_columns(filt.indptr, filt.indices, filt.dim, int(filt.dim.max()))
    deaths = np.nonzero(low >= 0)[0]
    pairs = np.column_stack([low[deaths], deaths])
    assert 2 * len(pairs) == len(filt), "coned complex must be acyclic: every cell paired"
    return pairs


def _diagrams_from_pairs(filt: ConedFiltration, pairs: np.ndarray):
    b, d = pairs[:, 0], pairs[:, 1]
    deg = filt.dim[b]
    bval, dval = filt.value[b], filt.value[d]
    bcone, dcone = filt.cone[b], filt.cone[d]
    keep = (deg <= 1) & (bval != dval)
    out = []
    for k in (0, 1):
        sel = keep & (deg == k)
        kinds = np.where(bcone[sel], Kind.RELATIVE.value,
                         np.where(dcone[sel], Kind.ESSENTIAL.value, Kind.ORDINARY.value))
        out.append(XPHDiagram.from_arrays(k, kinds, bval[sel], dval[sel]))
    return tuple(out)


def reduce_extended(filt: ConedFiltration) -> tuple[XPHDiagram, XPHDiagram]:
    """Degree-0 and degree-1 extended persistence diagrams of a coned filtration."""
    return _diagrams_from_pairs(filt, persistence_pairs(filt))


def xph(cx: ShapeComplex, v) -> tuple[XPHDiagram, XPHDiagram]:
    return reduce_extended(build_extended_filtration(cx, v))


def xph0_fast(cx: ShapeComplex, v) -> XPHDiagram:
    """Degree-0 diagram by union-find over the sublevel filtration.

    Merges follow the elder rule: the class with the later birth (height,
    then filtration position) dies. Essential intervals span each component
    from its lowest to its highest vertex.
    """
    h = height(cx.vertices, v)
    nv, ne = cx.n_vertices, cx.n_edges
    eh = np.maximum(h[cx.edges[:, 0]], h[cx.edges[:, 1]])
    vals = np.concatenate([h, eh])
    dims = np.concatenate([np.zeros(nv, np.int64), np.ones(ne, np.int64)])
    order = np.lexsort((np.arange(nv + ne), dims, vals))
    rank = np.empty(nv, np.int64)
    vorder = order[order < nv]
    rank[vorder] = np.arange(nv)

    parent = list(range(nv))
    edges = cx.edges.tolist()
    hl = h.tolist()
    vl = vals.tolist()
    births, deaths = [], []

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in order[order >= nv].tolist():
        u, w = edges[c - nv]
        ru, rw = find(u), find(w)
        if ru == rw:
            continue
        # roots are the oldest vertex of their component
        if rank[ru] > rank[rw]:
            ru, rw = rw, ru
        births.append(hl[rw])
        deaths.append(vl[c])
        parent[rw] = ru

    ncomp = cx.n_components
    cmin = np.full(ncomp, np.inf)
    cmax = np.full(ncomp, -np.inf)
    np.minimum.at(cmin, cx.labels, h)
    np.maximum.at(cmax, cx.labels, h)
    kinds = [Kind.ORDINARY.value] * len(births) + [Kind.ESSENTIAL.value] * ncomp
    return XPHDiagram.from_arrays(0, kinds, births + cmin.tolist(), deaths + cmax.tolist())


def diagrams_to_json(pairs: Sequence[tuple[XPHDiagram, XPHDiagram]] | tuple[XPHDiagram, ...]) -> str:
    """Serialise diagrams as a JSON array of interval records.

    Accepts either one diagram tuple or a sequence of them (one per direction);
    in the latter case every record also carries its ``direction`` index.
    """
    if pairs and isinstance(pairs[0], XPHDiagram):
        records = [r for dg in pairs for r in dg.to_records()]
    else:
        records = [dict(direction=i, **r) for i, dgs in enumerate(pairs) for dg in dgs
                   for r in dg.to_records()]
    return json.dumps(records, indent=1)


def diagrams_from_json(text: str) -> tuple[XPHDiagram, XPHDiagram]:
    records = json.loads(text)
    by_degree: dict[int, list[XPHInterval]] = {0: [], 1: []}
    for r in records:
        by_degree.setdefault(int(r["degree"]), []).append(
            interval(r["kind"], float(r["birth"]), float(r["death"]), int(r["degree"])))
    return XPHDiagram(0, tuple(by_degree[0])), XPHDiagram(1, tuple(by_degree[1]))


def essential_counts(diagrams: Iterable[XPHDiagram]) -> dict[int, int]:
    return {dg.degree: dg.count(Kind.ESSENTIAL) for dg in diagrams}
