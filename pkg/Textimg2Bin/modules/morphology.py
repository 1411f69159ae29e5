"""3x3 neighbourhood kernels on numpy rasters."""
import cv2 as cv
import numpy as np

FULL_3X3 = cv.getStructuringElement(cv.MORPH_RECT, (3, 3)).astype(bool)


def convolve3x3(arr, mask):
    """Weighted 3x3 neighbourhood sums with edge-replicated borders.

    Returns int64 sums; the caller divides and rounds.
    """
    kernel = np.asarray(mask, dtype=np.float64)
    # integer weights on 8-bit samples: float64 sums are exact
    sums = cv.filter2D(arr.astype(np.float64), -1, kernel, borderType=cv.BORDER_REPLICATE)
    return np.rint(sums).astype(np.int64)


def erode(arr, footprint=FULL_3X3):
    """Binary erosion; pixels outside the raster count as background."""
    element = np.asarray(footprint, dtype=np.uint8)
    src = np.asarray(arr, dtype=bool).astype(np.uint8)
    eroded = cv.erode(src, element, borderType=cv.BORDER_CONSTANT, borderValue=0)
    return eroded.astype(bool)
