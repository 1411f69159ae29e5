"""
Edge boxes: 8-connected components of the edge map and the geometric
filters that discard the ones that cannot be characters.
"""
import logging
from dataclasses import dataclass

import numpy as np

from Textimg2Bin.image_core import BinaryImage
from Textimg2Bin.modules.union_find import UnionFind

logger = logging.getLogger(__name__)

SIZE_METRICS = ('height', 'width', 'area')

# raster-order predecessors in the 8-neighbourhood
_PREVIOUS_NEIGHBOURS = ((-1, -1), (-1, 0), (-1, 1), (0, -1))


@dataclass(frozen=True)
class EdgeBox:
    """Tight bounding box of one edge component; coordinates are inclusive."""

    label: int
    x_min: int
    y_min: int
    x_max: int
    y_max: int
    pixel_count: int

    @property
    def width(self):
        return self.x_max - self.x_min + 1

    @property
    def height(self):
        return self.y_max - self.y_min + 1

    @property
    def area(self):
        return self.width * self.height

    @property
    def aspect_ratio(self):
        return self.width / self.height

    def size(self, metric='height'):
        if metric not in SIZE_METRICS:
            raise ValueError('unknown size metric {!r}'.format(metric))
        return getattr(self, metric)

    def contains(self, other):
        """Strict containment on all four sides."""
        return (self.x_min < other.x_min and self.y_min < other.y_min
                and other.x_max < self.x_max and other.y_max < self.y_max)


@dataclass(frozen=True, eq=False)
class LabeledEdgeMap:
    """Component ids per pixel (0 = background) and one box per id."""

    width: int
    height: int
    labels: np.ndarray
    boxes: tuple

    def box(self, label):
        return self.boxes[label - 1]

    def mask_of(self, boxes):
        """Edge pixels belonging to the given boxes."""
        keep = np.zeros(len(self.boxes) + 1, dtype=bool)
        for b in boxes:
            keep[b.label] = True
        return BinaryImage(keep[self.labels])


@dataclass(frozen=True)
class BoxRejection:
    box: EdgeBox
    reason: str


@dataclass(frozen=True)
class BoxFilterResult:
    kept: tuple
    rejected: tuple


def label_components(edges):
    """Two-pass union-find labelling with 8-connectivity.

    Labels are numbered 1..n in raster order of each component's first pixel.
    """
    pix = edges.pixels
    h, w = pix.shape
    ys, xs = np.nonzero(pix)
    provisional = [[0] * w for _ in range(h)]
    uf = UnionFind(1)

    # first pass
    for y, x in zip(ys.tolist(), xs.tolist()):
        neighbours = []
        for dy, dx in _PREVIOUS_NEIGHBOURS:
            ny, nx = y + dy, x + dx
            if 0 <= ny and 0 <= nx < w:
                lab = provisional[ny][nx]
                if lab:
                    neighbours.append(lab)
        if not neighbours:
            current = uf.make_set()
        else:
            current = min(neighbours)
            for lab in neighbours:
                if lab != current:
                    uf.union(current, lab)
        provisional[y][x] = current

    # second pass: resolve roots and renumber consecutively
    renumber = {}
    labels = np.zeros((h, w), dtype=np.int32)
    flat = np.empty(len(ys), dtype=np.int64)
    for i, (y, x) in enumerate(zip(ys.tolist(), xs.tolist())):
        root = uf.find(provisional[y][x])
        if root not in renumber:
            renumber[root] = len(renumber) + 1
        flat[i] = renumber[root]
    labels[ys, xs] = flat
    labels.setflags(write=False)

    n = len(renumber)
    x_min = np.full(n + 1, w, dtype=np.int64)
    y_min = np.full(n + 1, h, dtype=np.int64)
    x_max = np.full(n + 1, -1, dtype=np.int64)
    y_max = np.full(n + 1, -1, dtype=np.int64)
    np.minimum.at(x_min, flat, xs)
    np.minimum.at(y_min, flat, ys)
    np.maximum.at(x_max, flat, xs)
    np.maximum.at(y_max, flat, ys)
    counts = np.bincount(flat, minlength=n + 1)

    boxes = tuple(EdgeBox(label=k, x_min=int(x_min[k]), y_min=int(y_min[k]),
                          x_max=int(x_max[k]), y_max=int(y_max[k]), pixel_count=int(counts[k]))
                  for k in range(1, n + 1))
    logger.debug('labelled %d edge components', n)
    return LabeledEdgeMap(width=w, height=h, labels=labels, boxes=boxes)


def filter_aspect_ratio(boxes, low=0.1, high=10.0):
    """Keep boxes with low <= width / height <= high."""
    kept, rejected = [], []
    for b in boxes:
        ratio = b.aspect_ratio
        if low <= ratio <= high:
            kept.append(b)
        else:
            rejected.append(BoxRejection(b, 'aspect ratio {:.3f} outside [{}, {}]'.format(ratio, low, high)))
    return BoxFilterResult(kept=tuple(kept), rejected=tuple(rejected))


def _coords(boxes):
    return (np.array([b.x_min for b in boxes], dtype=np.int64),
            np.array([b.y_min for b in boxes], dtype=np.int64),
            np.array([b.x_max for b in boxes], dtype=np.int64),
            np.array([b.y_max for b in boxes], dtype=np.int64))


def containment_filter(boxes):
    """Nested-box rule.

    A box enclosing one or two boxes keeps itself and drops them (inner
    character boundaries); a box enclosing three or more is dropped and its
    internals kept. Every enclosed box counts, nested or not, and all counts
    are taken on the input set in one pass.
    """
    boxes = sorted(boxes, key=lambda b: b.label)
    if not boxes:
        return BoxFilterResult(kept=(), rejected=())
    x0, y0, x1, y1 = _coords(boxes)
    reasons = {}
    for i, outer in enumerate(boxes):
        inside = ((outer.x_min < x0) & (outer.y_min < y0)
                  & (x1 < outer.x_max) & (y1 < outer.y_max))
        internal = np.flatnonzero(inside)
        n_int = len(internal)
        if n_int == 0:
            continue
        if n_int < 3:
            for j in internal.tolist():
                reasons.setdefault(j, 'inner boundary of edge box {}'.format(outer.label))
        else:
            reasons.setdefault(i, 'encloses {} edge boxes'.format(n_int))

    kept = tuple(b for i, b in enumerate(boxes) if i not in reasons)
    rejected = tuple(BoxRejection(boxes[i], reasons[i]) for i in sorted(reasons))
    return BoxFilterResult(kept=kept, rejected=rejected)
