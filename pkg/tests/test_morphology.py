import numpy as np

from Textimg2Bin.modules.morphology import FULL_3X3, convolve3x3, erode


def _naive_sums(arr, mask):
    h, w = arr.shape
    out = np.zeros((h, w), dtype=np.int64)
    for y in range(h):
        for x in range(w):
            for dy in range(3):
                for dx in range(3):
                    sy = min(max(y + dy - 1, 0), h - 1)
                    sx = min(max(x + dx - 1, 0), w - 1)
                    out[y, x] += mask[dy][dx] * int(arr[sy, sx])
    return out


def test_weighted_sums_match_naive_loop(rng):
    mask = ((1, 3, 0), (2, 5, 1), (0, 4, 7))
    for shape in [(1, 1), (1, 6), (5, 1), (9, 7)]:
        arr = rng.integers(0, 256, size=shape, dtype=np.uint8)
        sums = convolve3x3(arr, mask)
        assert sums.dtype == np.int64
        assert np.array_equal(sums, _naive_sums(arr, mask))


def test_full_element_is_a_3x3_square():
    assert FULL_3X3.dtype == bool and FULL_3X3.all() and FULL_3X3.shape == (3, 3)


def test_erosion_treats_the_outside_as_background():
    out = erode(np.ones((3, 5), dtype=bool))
    assert out.dtype == bool
    assert out.tolist() == [[False] * 5, [False, True, True, True, False], [False] * 5]
