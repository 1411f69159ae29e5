"""Summed-area tables for O(1) windowed statistics."""
import numpy as np


def integral_image(val):
    """Summed-area table of ``val`` with a leading zero row and column."""
    ii = val.astype(np.float64)
    for axis in range(ii.ndim):
        ii = ii.cumsum(axis=axis)
    return np.pad(ii, [(1, 0)] * ii.ndim, mode='constant')


def query_integral_image(sat, diam):
    """Window sums in 'VALID' mode: one value per full ``diam`` window."""
    dy, dx = diam
    return sat[dy:, dx:] - sat[dy:, :-dx] - sat[:-dy, dx:] + sat[:-dy, :-dx]


def local_mean_std(arr, window):
    """Mean and standard deviation over a centred odd ``window`` per pixel.

    Borders are edge-replicated. Variance is E[x^2] - E[x]^2 clamped at 0.
    """
    r = window // 2
    padded = np.pad(arr.astype(np.float64), r, mode='edge')
    n = float(window * window)
    sums = query_integral_image(integral_image(padded), (window, window))
    sq_sums = query_integral_image(integral_image(padded * padded), (window, window))
    mean = sums / n
    var = np.maximum(sq_sums / n - mean * mean, 0.0)
    return mean, np.sqrt(var)
