"""
Synthetic textured-text images with pixel-exact ground truth.

A SynthSpec describes a canvas, one background texture and a list of text
runs drawn with the embedded 5x7 font. Rendering is fully deterministic: the
only randomness is the uniform-noise texture, which comes from a linear
congruential generator seeded by the spec.
"""
import logging
from dataclasses import dataclass

import numpy as np

from Textimg2Bin.args import parse_key_values
from Textimg2Bin.errors import SynthError
from Textimg2Bin.image_core import BinaryImage, GrayImage
from Textimg2Bin.utils import font5x7

logger = logging.getLogger(__name__)

TEXTURES = ('constant', 'checkerboard', 'stripes', 'noise')
STRIPE_ANGLES = (0, 45, 90)
POLARITIES = ('dark', 'light')

LCG_MULTIPLIER = 1664525
LCG_INCREMENT = 1013904223
LCG_MODULUS = 2 ** 32


@dataclass(frozen=True)
class TextItem:
    """One run of glyphs; (x, y) is the top-left corner of its first glyph."""

    x: int
    y: int
    height: int
    polarity: str
    text: str

    @property
    def scale(self):
        return self.height // font5x7.GLYPH_HEIGHT

    @property
    def width(self):
        if not self.text:
            return 0
        s = self.scale
        return len(self.text) * font5x7.ADVANCE * s - s


@dataclass(frozen=True)
class SynthSpec:
    width: int = 256
    height: int = 256
    texture: str = 'constant'
    background: int = 170
    amplitude: int = 0
    period: int = 4
    angle: int = 0
    seed: int = 42
    dark_ink: int = 20
    light_ink: int = 235
    texts: tuple = ()

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise SynthError('canvas must be non-empty, got {}x{}'.format(self.width, self.height))
        if self.texture not in TEXTURES:
            raise SynthError('unknown texture {!r} (expected one of {})'.format(
                self.texture, ', '.join(TEXTURES)))
        if self.texture in ('checkerboard', 'stripes') and (self.period < 2 or self.period % 2):
            raise SynthError('texture period must be even and >= 2, got {}'.format(self.period))
        if self.texture == 'stripes' and self.angle not in STRIPE_ANGLES:
            raise SynthError('stripe angle must be one of {}, got {}'.format(STRIPE_ANGLES, self.angle))
        if self.amplitude < 0:
            raise SynthError('amplitude must be non-negative')
        for name in ('background', 'dark_ink', 'light_ink'):
            if not 0 <= getattr(self, name) <= 255:
                raise SynthError('{} must lie in [0, 255]'.format(name))
        object.__setattr__(self, 'texts', tuple(self.texts))


# ============================================================================
# Textures
# ============================================================================
def lcg_noise(count, amplitude, seed):
    """``count`` samples in [-amplitude, amplitude] from the seeded LCG."""
    span = 2 * amplitude + 1
    out = np.empty(count, dtype=np.int64)
    state = seed % LCG_MODULUS
    for i in range(count):
        state = (LCG_MULTIPLIER * state + LCG_INCREMENT) % LCG_MODULUS
        out[i] = (state >> 16) % span - amplitude
    return out


def render_texture(spec):
    h, w = spec.height, spec.width
    bg = np.full((h, w), spec.background, dtype=np.int64)
    if spec.texture == 'constant' or spec.amplitude == 0:
        return _clip(bg)

    if spec.texture == 'noise':
        return _clip(bg + lcg_noise(h * w, spec.amplitude, spec.seed).reshape(h, w))

    # half a period bright, half dark
    ys, xs = np.mgrid[0:h, 0:w]
    cell = spec.period // 2
    if spec.texture == 'checkerboard':
        phase = (xs // cell + ys // cell) % 2
    else:
        u = {0: xs, 90: ys, 45: xs + ys}[spec.angle]
        phase = (u // cell) % 2
    return _clip(np.where(phase == 0, bg + spec.amplitude, bg - spec.amplitude))


def _clip(arr):
    return np.clip(arr, 0, 255).astype(np.uint8)


# ============================================================================
# Text
# ============================================================================
def text_mask(spec, item):
    """Stroke pixels of one text run, checked against the canvas."""
    if item.height <= 0 or item.height % font5x7.GLYPH_HEIGHT:
        raise SynthError('glyph height must be a positive multiple of {}, got {}'.format(
            font5x7.GLYPH_HEIGHT, item.height))
    if item.polarity not in POLARITIES:
        raise SynthError('polarity must be dark or light, got {!r}'.format(item.polarity))
    for ch in item.text:
        if not font5x7.has_glyph(ch):
            raise SynthError('no glyph for {!r}'.format(ch))
    if (item.x < 0 or item.y < 0 or item.x + item.width > spec.width
            or item.y + item.height > spec.height):
        raise SynthError('text {!r} at ({}, {}) height {} does not fit a {}x{} canvas'.format(
            item.text, item.x, item.y, item.height, spec.width, spec.height))

    mask = np.zeros((spec.height, spec.width), dtype=bool)
    s = item.scale
    for i, ch in enumerate(item.text):
        x0 = item.x + i * font5x7.ADVANCE * s
        glyph = font5x7.glyph_mask(ch, s)
        mask[item.y:item.y + glyph.shape[0], x0:x0 + glyph.shape[1]] |= glyph
    return mask


def generate(spec):
    """Return (image, ground truth) for a spec; ground truth marks glyph strokes."""
    img = render_texture(spec).copy()
    truth = np.zeros((spec.height, spec.width), dtype=bool)
    for item in spec.texts:
        mask = text_mask(spec, item)
        img[mask] = spec.dark_ink if item.polarity == 'dark' else spec.light_ink
        truth |= mask
    logger.debug('synth: %dx%d %s, %d text run(s), %d text pixels',
                 spec.width, spec.height, spec.texture, len(spec.texts), int(truth.sum()))
    return GrayImage(img), BinaryImage(truth)


# ============================================================================
# Spec files
# ============================================================================
_INT_KEYS = ('width', 'height', 'background', 'amplitude', 'period', 'angle', 'seed',
             'dark_ink', 'light_ink')


def parse_text_item(value):
    """``x y height polarity STRING``; the string is the rest of the line."""
    parts = value.split(None, 4)
    if len(parts) < 5:
        raise ValueError('expected "x y height polarity STRING"')
    x, y, height, polarity, text = parts
    return TextItem(x=int(x), y=int(y), height=int(height), polarity=polarity.lower(),
                    text=text.upper())


def parse_synth_spec(text, source='<synth>'):
    values = {}
    texts = []
    for key, value, lineno in parse_key_values(text, source, repeatable=('text',)):
        try:
            if key == 'text':
                texts.append(parse_text_item(value))
            elif key == 'texture':
                values[key] = value.lower()
            elif key in _INT_KEYS:
                values[key] = int(value)
            else:
                raise SynthError('{}:{}: unknown key {!r}'.format(source, lineno, key))
        except ValueError as e:
            if isinstance(e, SynthError):
                raise
            raise SynthError('{}:{}: bad value for {}: {}'.format(source, lineno, key, e))
    return SynthSpec(texts=tuple(texts), **values)


def load_synth_spec(path):
    with open(path, 'r', encoding='utf-8') as f:
        try:
            text = f.read()
        except UnicodeDecodeError as e:
            raise SynthError('{}: not valid UTF-8 text ({})'.format(path, e.reason))
    return parse_synth_spec(text, source=str(path))


# ============================================================================
# Built-in evaluation corpus
# ============================================================================
CORPUS_TEXTURES = {
    'constant': dict(texture='constant'),
    'checker': dict(texture='checkerboard', period=2, amplitude=60),
    'stripes': dict(texture='stripes', period=4, angle=0, amplitude=10),
    'noise': dict(texture='noise', amplitude=75),
}

DARK_BACKGROUND = 170
LIGHT_BACKGROUND = 85


def _lines(polarity, rows):
    return tuple(TextItem(x=x, y=y, height=height, polarity=polarity, text=text)
                 for x, y, height, text in rows)


_UNIFORM_ROWS = ((12, 24, 28, 'SLIDING'), (12, 84, 28, 'WINDOW 42'),
                 (12, 144, 28, 'TEXT ON'), (12, 204, 28, 'TEXTURE'))
_MIXED_ROWS = ((12, 16, 35, 'HEADING'), (12, 70, 21, 'SMALL BODY'),
               (12, 110, 21, 'TEXT LINES 7'), (12, 150, 21, 'MIXED SIZES'),
               (12, 200, 35, 'TITLE 2'))

CORPUS_VARIANTS = {
    'dark': (DARK_BACKGROUND, _lines('dark', _UNIFORM_ROWS)),
    'light': (LIGHT_BACKGROUND, _lines('light', _UNIFORM_ROWS)),
    'mixed': (DARK_BACKGROUND, _lines('dark', _MIXED_ROWS)),
}


def acceptance_corpus(seed=42):
    """The 12 named specs: four textures times three text variants."""
    corpus = {}
    for tex_name, texture in CORPUS_TEXTURES.items():
        for var_name, (background, texts) in CORPUS_VARIANTS.items():
            corpus['{}_{}'.format(tex_name, var_name)] = SynthSpec(
                width=256, height=256, background=background, seed=seed, texts=texts, **texture)
    return dict(sorted(corpus.items()))
