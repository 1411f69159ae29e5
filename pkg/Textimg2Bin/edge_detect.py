"""
Edge detection by iterative (isodata) thresholding and erosion.

The gray image is split at the converged threshold, the minority class is
taken as objects, and each object's boundary (object minus its erosion) is
the one-pixel-wide edge map.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from Textimg2Bin.image_core import BinaryImage, histogram
from Textimg2Bin.modules import morphology

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 0.5
DEFAULT_MAX_ITERATIONS = 256


@dataclass(frozen=True)
class IterativeThresholdResult:
    """Outcome of the isodata recurrence.

    history holds T^0, T^1, ... T^k; the last two entries differ by less than
    the tolerance unless the iteration cap was hit. Every pixel has weight
    N(i, j) = 1.
    """

    threshold: float
    iterations: int
    history: tuple
    converged: bool = True


@dataclass(frozen=True, eq=False)
class StructuringElement:
    shape: np.ndarray = field(default_factory=lambda: morphology.FULL_3X3.copy())

    def __post_init__(self):
        arr = np.asarray(self.shape, dtype=bool)
        if arr.shape != (3, 3):
            raise ValueError('structuring element must be 3x3')
        if not arr[1, 1]:
            raise ValueError('structuring element origin must be set')
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, 'shape', arr)


@dataclass(frozen=True)
class EdgeResult:
    """Everything extract_edges derives, for reporting and rendering.

    class_map is the thresholded image oriented so that the foreground is the
    minority class; complemented tells whether that flip happened.
    """

    threshold: IterativeThresholdResult
    class_map: BinaryImage
    complemented: bool
    edges: BinaryImage


def iterative_threshold(img, tolerance=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS):
    h = histogram(img)
    counts = h.bins.astype(np.float64)
    levels = np.arange(256, dtype=np.float64)
    weighted = counts * levels
    cum_n = np.cumsum(counts)
    cum_s = np.cumsum(weighted)
    total_n, total_s = cum_n[-1], cum_s[-1]

    t = (h.min_value + h.max_value) / 2.0
    history = [t]
    converged = False
    iterations = 0
    while iterations < max_iterations:
        # pixels below t are exactly the levels < ceil(t)
        k = int(np.ceil(t))
        n_low = cum_n[k - 1] if k > 0 else 0.0
        s_low = cum_s[k - 1] if k > 0 else 0.0
        n_high, s_high = total_n - n_low, total_s - s_low
        # an empty class takes the current threshold as its mean
        z1 = s_low / n_low if n_low > 0 else t
        z2 = s_high / n_high if n_high > 0 else t
        t_next = (z1 + z2) / 2.0
        history.append(t_next)
        iterations += 1
        if abs(t_next - t) < tolerance:
            converged = True
            t = t_next
            break
        t = t_next

    if not converged:
        logger.info('iterative threshold stopped at the %d-iteration cap', max_iterations)
    return IterativeThresholdResult(threshold=float(t), iterations=iterations,
                                    history=tuple(float(x) for x in history), converged=converged)


def binarize_at(img, t):
    """Foreground is every pixel with f(x, y) >= t."""
    return BinaryImage(img.pixels.astype(np.float64) >= t)


def erode(img, se=None):
    se = se or StructuringElement()
    return BinaryImage(morphology.erode(img.pixels, se.shape))


def boundary(img, se=None):
    """Object pixels removed by one erosion."""
    return BinaryImage(img.pixels & ~erode(img, se).pixels)


def orient_minority(img):
    """Complement the map when more than half of it is foreground."""
    if 2 * img.count > img.pixels.size:
        return img.complement(), True
    return img, False


def edge_map(img, tolerance=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS, se=None):
    result = iterative_threshold(img, tolerance, max_iterations)
    classes, complemented = orient_minority(binarize_at(img, result.threshold))
    edges = boundary(classes, se)
    logger.debug('edges: T*=%.3f after %d iteration(s), complemented=%s, %d edge pixels',
                 result.threshold, result.iterations, complemented, edges.count)
    return EdgeResult(threshold=result, class_map=classes, complemented=complemented, edges=edges)


def extract_edges(img, tolerance=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS, se=None):
    return edge_map(img, tolerance, max_iterations, se).edges
