"""
Character-size uniformity check and the final rendering of text pixels.

Edge-box sizes are sorted and scanned with a window anchored at its left
pointer (LP): the window grows while members stay within ``th`` of LP and
freezes at the first that does not. The smallest minimum over all windows of
two or more members becomes the size threshold T_s; boxes smaller than T_s
are removed.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from Textimg2Bin.errors import EmptyInputError, ParameterError
from Textimg2Bin.image_core import BinaryImage

logger = logging.getLogger(__name__)

TH_MODES = ('relative', 'absolute')


@dataclass(frozen=True)
class DifferenceThreshold:
    """Allowed size difference from LP: ``value * LP`` or a fixed ``value``."""

    mode: str = 'relative'
    value: float = 0.2

    def __post_init__(self):
        if self.mode not in TH_MODES:
            raise ParameterError('th mode must be one of {}, got {!r}'.format(TH_MODES, self.mode))
        if not (math.isfinite(self.value) and self.value > 0):
            raise ParameterError('th must be a positive finite number')

    def __call__(self, lp):
        return self.value * lp if self.mode == 'relative' else self.value


@dataclass(frozen=True)
class SizeWindow:
    start_index: int
    end_index: int
    member_sizes: tuple

    @property
    def window_min(self):
        return min(self.member_sizes)

    @property
    def is_valid(self):
        return self.end_index > self.start_index


@dataclass(frozen=True)
class SlidingWindowResult:
    windows: tuple
    t_s: float
    retained: tuple = ()
    removed: tuple = ()


@dataclass(frozen=True)
class BoxPolarity:
    label: int
    polarity: bool
    tie: bool = False


def _as_threshold(th):
    if isinstance(th, DifferenceThreshold):
        return th
    return DifferenceThreshold('absolute', float(th))


def uniformity_threshold(sizes, th=DifferenceThreshold()):
    """Scan sorted sizes into windows of similar size and derive T_s.

    Only windows covering at least two sizes are kept; without any, T_s is 0
    and nothing will be removed.
    """
    sizes = list(sizes)
    if not sizes:
        raise EmptyInputError('uniformity threshold of an empty size list')
    if any(s <= 0 for s in sizes):
        raise ParameterError('edge-box sizes must be positive')
    th = _as_threshold(th)
    a = sorted(sizes)
    n = len(a)

    windows = []
    i = 0
    while i < n:
        lp = a[i]
        limit = th(lp)
        j = i + 1
        while j < n and a[j] - lp <= limit:
            j += 1
        # a lone LP is skipped: the next size becomes LP
        if j - i >= 2:
            windows.append(SizeWindow(start_index=i, end_index=j - 1, member_sizes=tuple(a[i:j])))
        i = j

    t_s = min(w.window_min for w in windows) if windows else 0
    if not windows:
        logger.info('no uniform size window among %d edge boxes; size threshold is 0', n)
    return SlidingWindowResult(windows=tuple(windows), t_s=t_s)


def apply_size_threshold(boxes, t_s, metric='height'):
    """Partition boxes into (size >= t_s, size < t_s)."""
    if t_s < 0:
        raise ParameterError('size threshold must be non-negative')
    retained = tuple(b for b in boxes if b.size(metric) >= t_s)
    removed = tuple(b for b in boxes if b.size(metric) < t_s)
    return retained, removed


def sliding_window_filter(boxes, th=DifferenceThreshold(), metric='height'):
    """uniformity_threshold followed by apply_size_threshold, ids recorded."""
    boxes = tuple(boxes)
    if not boxes:
        return SlidingWindowResult(windows=(), t_s=0)
    result = uniformity_threshold([b.size(metric) for b in boxes], th)
    retained, removed = apply_size_threshold(boxes, result.t_s, metric)
    return SlidingWindowResult(windows=result.windows, t_s=result.t_s,
                               retained=tuple(b.label for b in retained),
                               removed=tuple(b.label for b in removed))


def box_polarity(class_map, box, gray=None):
    """Text class of one box: the class rarer on the ring just outside it.

    The ring lies outside the box and is clipped to the image. The box's own
    border pixels are read only as a fallback, when the box fills the image
    and no ring pixel is left. On an exact tie the class darker on average inside
    the box wins (the foreground class when that cannot be decided).
    """
    pix = class_map.pixels
    h, w = pix.shape
    inner = pix[box.y_min:box.y_max + 1, box.x_min:box.x_max + 1]
    ya, yb = max(box.y_min - 1, 0), min(box.y_max + 1, h - 1)
    xa, xb = max(box.x_min - 1, 0), min(box.x_max + 1, w - 1)
    outer = pix[ya:yb + 1, xa:xb + 1]

    n_ring = outer.size - inner.size
    true_ring = int(outer.sum()) - int(inner.sum())
    if n_ring == 0:
        core = inner[1:-1, 1:-1]
        n_ring = inner.size - core.size
        true_ring = int(inner.sum()) - int(core.sum())

    if 2 * true_ring < n_ring:
        return BoxPolarity(box.label, True)
    if 2 * true_ring > n_ring:
        return BoxPolarity(box.label, False)

    polarity = True
    if gray is not None:
        g = gray.pixels[box.y_min:box.y_max + 1, box.x_min:box.x_max + 1].astype(np.float64)
        if inner.any() and not inner.all():
            polarity = bool(g[inner].mean() < g[~inner].mean())
    return BoxPolarity(box.label, polarity, tie=True)


def box_polarities(class_map, boxes, gray=None):
    return tuple(box_polarity(class_map, b, gray) for b in boxes)


def render_binary(class_map, retained, labeled, gray=None, polarities=None):
    """White text on black: inside each retained box, the pixels of its text class."""
    if class_map.shape != (labeled.height, labeled.width):
        raise ValueError('class map and labelled edge map differ in size')
    retained = tuple(retained)
    if polarities is None:
        polarities = box_polarities(class_map, retained, gray)
    by_label = {p.label: p.polarity for p in polarities}

    pix = class_map.pixels
    out = np.zeros(pix.shape, dtype=bool)
    for b in retained:
        region = pix[b.y_min:b.y_max + 1, b.x_min:b.x_max + 1]
        out[b.y_min:b.y_max + 1, b.x_min:b.x_max + 1] |= region == by_label[b.label]
    return BinaryImage(out)
