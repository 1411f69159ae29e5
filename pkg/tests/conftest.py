import numpy as np
import pytest

from Textimg2Bin.image_core import BinaryImage, GrayImage
from Textimg2Bin.synth import SynthSpec, TextItem


@pytest.fixture
def rng():
    """Seeded generator so every property suite is reproducible"""
    return np.random.default_rng(1234)


@pytest.fixture
def gradient():
    """3x3 gradient, values 0..240"""
    return GrayImage(np.arange(9, dtype=np.uint8).reshape(3, 3) * 30)


@pytest.fixture
def square_scene():
    """10x10 bright square (200) in a 20x20 dark field (30)"""
    arr = np.full((20, 20), 30, dtype=np.uint8)
    arr[5:15, 5:15] = 200
    return GrayImage(arr)


@pytest.fixture
def small_spec():
    """64x64 constant background with one dark word"""
    return SynthSpec(width=64, height=64, texture='constant', background=170,
                     texts=(TextItem(x=4, y=20, height=21, polarity='dark', text='HI'),))


def ring(h, w):
    """Expected one-pixel perimeter of an h x w solid rectangle"""
    out = np.ones((h, w), dtype=bool)
    out[1:-1, 1:-1] = False
    return out


def binary(rows):
    return BinaryImage(np.asarray(rows, dtype=bool))
