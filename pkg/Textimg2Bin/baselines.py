"""
Reference binarizers: Otsu's global threshold and Niblack's local one.

Both return white-text BinaryImages so they can be scored against the same
ground truth as the sliding-window pipeline.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from Textimg2Bin.edge_detect import binarize_at, orient_minority
from Textimg2Bin.errors import EmptyInputError, ParameterError
from Textimg2Bin.image_core import BinaryImage, histogram
from Textimg2Bin.modules.integral import local_mean_std

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NiblackParams:
    window: int = 15
    k: float = -0.2

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ParameterError('niblack window must be odd and >= 3, got {}'.format(self.window))
        if not math.isfinite(self.k):
            raise ParameterError('niblack k must be a finite number')


def between_class_variance(bins, t):
    """omega0 * omega1 * (mu0 - mu1)^2 for the split v < t | v >= t, exactly.

    Equals (N*S0 - S*n0)^2 / (N^2 * n0 * n1); an empty class gives 0.
    """
    bins = [int(c) for c in bins]
    n = sum(bins)
    s = sum(i * c for i, c in enumerate(bins))
    n0 = sum(bins[:t])
    s0 = sum(i * c for i, c in enumerate(bins[:t]))
    n1 = n - n0
    if n0 == 0 or n1 == 0:
        return Fraction(0)
    return Fraction((n * s0 - s * n0) ** 2, n * n * n0 * n1)


def otsu_threshold(h):
    """Threshold t in 0..255 maximising the between-class variance.

    Class 0 is v < t. Ties go to the smallest t, so a constant image yields 0.
    """
    if h.total == 0:
        raise EmptyInputError('otsu threshold of an empty histogram')
    bins = [int(c) for c in h.bins]
    n = sum(bins)
    s = sum(i * c for i, c in enumerate(bins))

    best_t, best = 0, Fraction(0)
    n0 = s0 = 0
    for t in range(256):
        # class 0 holds levels 0..t-1 at this point
        n1 = n - n0
        if n0 and n1:
            var = Fraction((n * s0 - s * n0) ** 2, n * n * n0 * n1)
            if var > best:
                best_t, best = t, var
        n0 += bins[t]
        s0 += t * bins[t]
    return best_t


def otsu_binarize(img):
    t = otsu_threshold(histogram(img))
    classes, complemented = orient_minority(binarize_at(img, t))
    logger.debug('otsu: t=%d complemented=%s', t, complemented)
    return classes


def niblack_binarize(img, params=None):
    """Dark text: a pixel is text iff f < m + k * s over its window."""
    params = params or NiblackParams()
    f = img.pixels.astype(np.float64)
    mean, std = local_mean_std(f, params.window)
    return BinaryImage(f < mean + params.k * std)
