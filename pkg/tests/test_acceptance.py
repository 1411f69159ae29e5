"""Oracle, property and benchmark suites over the whole pipeline."""
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ring
from test_edge_boxes import bfs_components, partition

from Textimg2Bin.args import PipelineConfig
from Textimg2Bin.baselines import otsu_binarize, otsu_threshold
from Textimg2Bin.cli import compare_corpus, find_corpus
from Textimg2Bin.edge_boxes import containment_filter, label_components
from Textimg2Bin.edge_detect import extract_edges, iterative_threshold
from Textimg2Bin.image_core import BinaryImage, GrayImage, Histogram, histogram
from Textimg2Bin.output import binarize_pipeline
from Textimg2Bin.preprocess import enhance_contrast, entropy, extend_grayscale, smooth
from Textimg2Bin.sliding_binarize import DifferenceThreshold, uniformity_threshold
from Textimg2Bin.synth import acceptance_corpus, generate
from Textimg2Bin.utils.ims2file import write_binary, write_gray
from Textimg2Bin.utils.metrics import evaluate
from Textimg2Bin.utils.output_utils import format_csv

TEXTURED = ('checker_dark', 'checker_light', 'noise_dark', 'noise_light')


@pytest.fixture(scope='module')
def corpus_images():
    """The 12 seeded benchmark images with their ground truth"""
    return {name: generate(spec) for name, spec in acceptance_corpus(seed=42).items()}


# ----------------------------------------------------------------------------
# labelling against flood fill
# ----------------------------------------------------------------------------
def test_labelling_matches_flood_fill():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    for _ in range(200):
        arr = rng.random((32, 32)) < rng.uniform(0.1, 0.6)
        assert partition(label_components(BinaryImage(arr))) == bfs_components(arr)
    assert time.perf_counter() - start < 5.0


# ----------------------------------------------------------------------------
# Otsu against an exhaustive sweep
# ----------------------------------------------------------------------------
def _otsu_oracle(bins):
    """argmax of w0 * w1 * (mu0 - mu1)^2 over t, smallest t on ties"""
    total = sum(bins)
    best_t, best = 0, Fraction(-1)
    for t in range(256):
        n0 = sum(bins[:t])
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            score = Fraction(0)
        else:
            mu0 = Fraction(sum(i * bins[i] for i in range(t)), n0)
            mu1 = Fraction(sum(i * bins[i] for i in range(t, 256)), n1)
            score = Fraction(n0, total) * Fraction(n1, total) * (mu0 - mu1) ** 2
        if score > best:
            best_t, best = t, score
    return best_t


def test_otsu_matches_exhaustive_oracle():
    rng = np.random.default_rng(2)
    for _ in range(100):
        bins = np.zeros(256, dtype=np.int64)
        levels = rng.integers(0, 256, size=rng.integers(1, 12))
        bins[levels] = rng.integers(1, 50, size=len(levels))
        assert otsu_threshold(Histogram(bins)) == _otsu_oracle(bins.tolist())


# ----------------------------------------------------------------------------
# iterative threshold against a direct re-execution
# ----------------------------------------------------------------------------
def _isodata_oracle(arr):
    f = arr.astype(np.float64).ravel()
    t = (f.min() + f.max()) / 2.0
    for _ in range(256):
        low, high = f[f < t], f[f >= t]
        z1 = low.mean() if low.size else t
        z2 = high.mean() if high.size else t
        t_next = (z1 + z2) / 2.0
        if abs(t_next - t) < 0.5:
            return t_next
        t = t_next
    return t


def test_iterative_threshold_converges():
    rng = np.random.default_rng(3)
    images = [rng.integers(0, 256, size=(16, 16), dtype=np.uint8) for _ in range(100)]
    images.append(np.full((8, 8), 77, dtype=np.uint8))
    images.append(np.where(rng.random((8, 8)) < 0.3, 10, 240).astype(np.uint8))
    for arr in images:
        result = iterative_threshold(GrayImage(arr))
        assert result.iterations <= 256
        assert abs(result.threshold - _isodata_oracle(arr)) <= 0.5


def test_symmetric_two_level_anchor():
    arr = np.full((4, 4), 50, dtype=np.uint8)
    arr[:2] = 200
    assert iterative_threshold(GrayImage(arr)).threshold == 125


# ----------------------------------------------------------------------------
# one-pixel edges
# ----------------------------------------------------------------------------
def test_rectangle_edges_are_exact_rings():
    for h in range(3, 21):
        for w in range(3, 21):
            arr = np.full((2 * h + 4, 2 * w + 4), 30, dtype=np.uint8)
            arr[2:2 + h, 2:2 + w] = 200
            expected = np.zeros(arr.shape, dtype=bool)
            expected[2:2 + h, 2:2 + w] = ring(h, w)
            assert np.array_equal(extract_edges(GrayImage(arr)).pixels, expected), (h, w)


# ----------------------------------------------------------------------------
# nested edge boxes drawn as real edge maps
# ----------------------------------------------------------------------------
def _draw_ring(arr, y0, x0, y1, x1):
    arr[y0:y1 + 1, x0:x1 + 1] |= ring(y1 - y0 + 1, x1 - x0 + 1)


@pytest.mark.parametrize('n_inner', [1, 2, 3, 4])
def test_nested_fixture_accept_sets(n_inner):
    arr = np.zeros((40, 120), dtype=bool)
    _draw_ring(arr, 2, 2, 37, 117)
    for i in range(n_inner):
        _draw_ring(arr, 8, 8 + 26 * i, 30, 26 + 26 * i)
    labeled = label_components(BinaryImage(arr))
    assert len(labeled.boxes) == n_inner + 1
    outer = labeled.box(1)
    result = containment_filter(labeled.boxes)
    if n_inner < 3:
        assert result.kept == (outer,)
    else:
        assert result.kept == labeled.boxes[1:]
        assert [r.box for r in result.rejected] == [outer]


# ----------------------------------------------------------------------------
# size windows against a maximal-run oracle
# ----------------------------------------------------------------------------
def _runs(a, i, limit):
    """Maximal runs from index i: each starts at the first size outside the previous run"""
    if i >= len(a):
        return []
    j = i
    while j + 1 < len(a) and limit(a[i], a[j + 1]):
        j += 1
    return [(i, j)] + _runs(a, j + 1, limit)


def _window_oracle(sizes, limit):
    a = sorted(sizes)
    windows = [(i, j) for i, j in _runs(a, 0, limit) if j > i]
    t_s = min(a[i] for i, _ in windows) if windows else 0
    return windows, t_s


def test_size_windows_match_oracle():
    rng = np.random.default_rng(6)
    relative = lambda lp, s: 5 * (s - lp) <= lp
    start = time.perf_counter()
    for case in range(10 ** 4):
        sizes = rng.integers(1, 21, size=rng.integers(1, 9)).tolist()
        if case % 2:
            th = int(rng.integers(1, 5))
            result = uniformity_threshold(sizes, DifferenceThreshold('absolute', th))
            windows, t_s = _window_oracle(sizes, lambda lp, s, th=th: s - lp <= th)
        else:
            result = uniformity_threshold(sizes)
            windows, t_s = _window_oracle(sizes, relative)
        assert [(w.start_index, w.end_index) for w in result.windows] == windows
        assert result.t_s == t_s
    assert time.perf_counter() - start < 10.0


# ----------------------------------------------------------------------------
# synthetic benchmark
# ----------------------------------------------------------------------------
def test_synthetic_benchmark(corpus_images):
    start = time.perf_counter()
    sliding, otsu = {}, {}
    for name, (img, truth) in corpus_images.items():
        sliding[name] = evaluate(binarize_pipeline(img, keep_stages=False)[0], truth).f_measure
        otsu[name] = evaluate(otsu_binarize(img), truth).f_measure
    elapsed = time.perf_counter() - start

    assert sum(sliding.values()) / len(sliding) >= 0.90
    for name in TEXTURED:
        assert sliding[name] - otsu[name] >= 0.10, name
    assert elapsed < 30.0


def test_benchmark_csv_is_byte_identical(corpus_images, tmp_path):
    for name, (img, truth) in corpus_images.items():
        write_gray(img, tmp_path / (name + '.pgm'))
        write_binary(truth, tmp_path / (name + '.pbm'))
    pairs = find_corpus(str(tmp_path))
    assert len(pairs) == 12
    cfg = PipelineConfig()
    first = format_csv(compare_corpus(pairs, cfg, workers=1))
    second = format_csv(compare_corpus(pairs, cfg, workers=4))
    assert first.encode('utf-8') == second.encode('utf-8')
    assert len(first.splitlines()) == 1 + 12 * 3


# ----------------------------------------------------------------------------
# preprocess properties
# ----------------------------------------------------------------------------
def test_preprocess_properties():
    rng = np.random.default_rng(9)
    for _ in range(500):
        shape = tuple(rng.integers(1, 13, size=2))
        lo, hi = sorted(rng.integers(0, 256, size=2))
        arr = rng.integers(lo, hi + 1, size=shape, dtype=np.int64).astype(np.uint8)
        img = GrayImage(arr)

        assert 0.0 <= entropy(histogram(img)) <= 8.0

        out = enhance_contrast(img, float(rng.uniform(1, 40))).pixels.ravel()
        order = np.argsort(arr.ravel(), kind='stable')
        assert np.all(np.diff(out[order].astype(np.int64)) >= 0)

        smoothed = smooth(img).pixels
        assert arr.min() <= smoothed.min() and smoothed.max() <= arr.max()

        gap = int(rng.integers(1, 256))
        once = extend_grayscale(img, gap)
        assert extend_grayscale(once, gap) == once
        span = int(arr.max()) - int(arr.min())
        if 0 < span < gap:
            assert (once.pixels.min(), once.pixels.max()) == (0, 255)
        else:
            assert once == img
