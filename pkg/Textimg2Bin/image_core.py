"""
Image value types and the histogram every thresholding stage builds on.

Images are immutable: the pixel array is copied on construction and marked
read-only, so every operation in the package returns a new image.
"""
from dataclasses import dataclass

import numpy as np

from Textimg2Bin.errors import DimensionMismatchError, EmptyInputError, ImageFormatError

# ITU-R BT.601 luma weights, scaled by 1000 for exact integer rounding
LUMA_WEIGHTS = (299, 587, 114)


def _check_samples(arr, kind):
    if arr.dtype == np.uint8:
        return
    if arr.dtype.kind == 'f' and not np.all(arr == np.round(arr)):
        raise ValueError('{} samples must be whole numbers'.format(kind))
    if np.any(arr < 0) or np.any(arr > 255):
        raise ValueError('{} samples must lie in [0, 255]'.format(kind))


def _frozen(array, dtype):
    arr = np.array(array, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit single-channel raster, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError('GrayImage needs a non-empty 2-D array, got shape {}'.format(arr.shape))
        _check_samples(arr, 'gray')
        object.__setattr__(self, 'pixels', _frozen(arr, np.uint8))

    @classmethod
    def from_rows(cls, rows):
        return cls(np.asarray(rows))

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def data(self):
        """Row-major sequence of samples."""
        return self.pixels.ravel()

    def __eq__(self, other):
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ColorImage:
    """RGB raster, shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError('ColorImage needs a (height, width, 3) array, got shape {}'.format(arr.shape))
        _check_samples(arr, 'color')
        object.__setattr__(self, 'pixels', _frozen(arr, np.uint8))

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape[:2]

    @property
    def data(self):
        return self.pixels.ravel()

    def __eq__(self, other):
        return isinstance(other, ColorImage) and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Boolean raster; True is foreground (rendered white)."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError('BinaryImage needs a non-empty 2-D array, got shape {}'.format(arr.shape))
        object.__setattr__(self, 'pixels', _frozen(arr, bool))

    @classmethod
    def from_rows(cls, rows):
        return cls(np.asarray(rows, dtype=bool))

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def data(self):
        return self.pixels.ravel()

    @property
    def count(self):
        """Number of foreground pixels."""
        return int(np.count_nonzero(self.pixels))

    def complement(self):
        return BinaryImage(~self.pixels)

    def to_gray(self):
        """White (255) foreground on black, for stage dumps."""
        return GrayImage(np.where(self.pixels, 255, 0).astype(np.uint8))

    def __eq__(self, other):
        return isinstance(other, BinaryImage) and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Histogram:
    """256-bin gray-level frequency table."""

    bins: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bins)
        if arr.shape != (256,):
            raise ValueError('a histogram has exactly 256 bins')
        if np.any(arr < 0):
            raise ValueError('histogram counts must be non-negative')
        object.__setattr__(self, 'bins', _frozen(arr, np.int64))

    @property
    def total(self):
        return int(self.bins.sum())

    def probabilities(self):
        total = self.total
        if total == 0:
            raise EmptyInputError('histogram is empty')
        return self.bins / total

    @property
    def min_value(self):
        nonzero = np.flatnonzero(self.bins)
        if nonzero.size == 0:
            raise EmptyInputError('histogram is empty')
        return int(nonzero[0])

    @property
    def max_value(self):
        nonzero = np.flatnonzero(self.bins)
        if nonzero.size == 0:
            raise EmptyInputError('histogram is empty')
        return int(nonzero[-1])

    def __eq__(self, other):
        return isinstance(other, Histogram) and np.array_equal(self.bins, other.bins)

    __hash__ = None


def round_half_up(values):
    """Round to the nearest integer, halves upwards, as float array."""
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


def to_uint8(values):
    """Round half up and clamp to [0, 255]."""
    return np.clip(round_half_up(values), 0, 255).astype(np.uint8)


def to_grayscale(img):
    """BT.601 luma with round-half-up: (299R + 587G + 114B + 500) // 1000."""
    rgb = img.pixels.astype(np.int64)
    wr, wg, wb = LUMA_WEIGHTS
    luma = (wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2] + 500) // 1000
    return GrayImage(np.clip(luma, 0, 255).astype(np.uint8))


def as_gray(img):
    """Pass gray images through, convert color ones."""
    if isinstance(img, GrayImage):
        return img
    if isinstance(img, ColorImage):
        return to_grayscale(img)
    if isinstance(img, BinaryImage):
        raise ImageFormatError('binary image given, expected a gray or color image')
    raise TypeError('expected GrayImage or ColorImage, got {}'.format(type(img).__name__))


def histogram(img):
    counts = np.bincount(img.pixels.ravel(), minlength=256)
    return Histogram(counts)


def check_same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionMismatchError('image shapes differ: {} vs {}'.format(a.shape, b.shape))
