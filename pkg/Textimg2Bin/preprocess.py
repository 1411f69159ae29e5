"""
Contrast conditioning ahead of edge detection.

Order is fixed: entropy gate -> sigmoid contrast -> 3x3 smoothing ->
grayscale extension. Every stage rounds half up and clamps to [0, 255].
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from Textimg2Bin.errors import EmptyInputError, ParameterError
from Textimg2Bin.image_core import GrayImage, histogram, to_uint8
from Textimg2Bin.modules.morphology import convolve3x3

logger = logging.getLogger(__name__)

DEFAULT_MASK = ((1, 1, 1), (1, 2, 1), (1, 1, 1))


@dataclass(frozen=True)
class PreprocessParams:
    """Tunables of the preprocessing chain.

    entropy_threshold is in bits (a 256-bin histogram tops out at 8). Images
    below it get the contrast stretch; noisy images stay as they are.
    """

    entropy_threshold: float = 4.75
    v: float = 15.0
    extension_gap: float = 80.0
    smoothing_mask: tuple = field(default=DEFAULT_MASK)
    divisor: int = 10

    def __post_init__(self):
        for name in ('entropy_threshold', 'v', 'extension_gap'):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError('{} must be a finite number'.format(name))
        mask = np.asarray(self.smoothing_mask, dtype=np.int64)
        if mask.shape != (3, 3):
            raise ParameterError('smoothing mask must be 3x3')
        if np.any(mask < 0):
            raise ParameterError('smoothing weights must be non-negative')
        if self.divisor <= 0 or int(mask.sum()) != self.divisor:
            raise ParameterError('divisor {} must equal the sum of mask weights ({})'.format(
                self.divisor, int(mask.sum())))
        if self.v <= 0:
            raise ParameterError('contrast steepness v must be positive')
        if not 0 < self.extension_gap <= 255:
            raise ParameterError('extension_gap must lie in (0, 255]')
        object.__setattr__(self, 'smoothing_mask', tuple(tuple(int(w) for w in row) for row in mask))


@dataclass(frozen=True)
class PreprocessTrace:
    """Intermediate images and decisions of one preprocess run."""

    entropy: float
    contrast_applied: bool
    extension_applied: bool
    contrast: GrayImage
    smoothed: GrayImage
    extended: GrayImage


def entropy(h):
    """Shannon entropy in bits of a gray-level histogram."""
    if h.total == 0:
        raise EmptyInputError('entropy of an empty histogram')
    p = h.probabilities()
    p = p[p > 0]
    # -sum(p log p) is -0.0 for a single bin
    return float(abs(-np.sum(p * np.log2(p))))


def enhance_contrast(img, v):
    """Sigmoid stretch around the mean gray level."""
    if not (math.isfinite(v) and v > 0):
        raise ParameterError('contrast steepness v must be positive')
    t = img.pixels.astype(np.float64)
    avg = t.mean()
    with np.errstate(over='ignore'):
        c = 255.0 / (1.0 + np.exp((avg - t) / v))
    return GrayImage(to_uint8(c))


def smooth(img, mask=DEFAULT_MASK, divisor=10):
    mask = np.asarray(mask, dtype=np.int64)
    if int(mask.sum()) != divisor:
        raise ParameterError('divisor {} must equal the sum of mask weights ({})'.format(
            divisor, int(mask.sum())))
    sums = convolve3x3(img.pixels, mask)
    # exact round-half-up of sums / divisor
    rounded = (2 * sums + divisor) // (2 * divisor)
    return GrayImage(np.clip(rounded, 0, 255).astype(np.uint8))


def extension_fires(img, gap):
    lo, hi = int(img.pixels.min()), int(img.pixels.max())
    return hi > lo and hi - lo < gap


def extend_grayscale(img, gap=80):
    """Linear stretch to [0, 255] when the gray span is narrower than ``gap``."""
    if not extension_fires(img, gap):
        return img
    s = img.pixels.astype(np.int64)
    lo, hi = int(s.min()), int(s.max())
    alpha = -lo
    # (S + alpha) * beta with beta = 255 / (hi - lo), rounded half up exactly
    num = (s + alpha) * 255
    span = hi - lo
    return GrayImage(((2 * num + span) // (2 * span)).astype(np.uint8))


def preprocess_trace(img, params=None):
    params = params or PreprocessParams()
    h = entropy(histogram(img))
    contrast_applied = h < params.entropy_threshold
    contrast = enhance_contrast(img, params.v) if contrast_applied else img
    smoothed = smooth(contrast, params.smoothing_mask, params.divisor)
    extension_applied = extension_fires(smoothed, params.extension_gap)
    extended = extend_grayscale(smoothed, params.extension_gap)
    logger.debug('preprocess: entropy=%.4f contrast=%s extension=%s',
                 h, contrast_applied, extension_applied)
    return PreprocessTrace(entropy=h, contrast_applied=contrast_applied,
                           extension_applied=extension_applied,
                           contrast=contrast, smoothed=smoothed, extended=extended)


def preprocess(img, params=None):
    return preprocess_trace(img, params).extended
