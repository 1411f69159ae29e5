"""
Bit-exact NetPBM (P4/P5/P6, maxval 255) reading and writing.

Anything that is not binary NetPBM is handed to Pillow and mapped onto the
same GrayImage / ColorImage contract.
"""
import io
import logging
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from Textimg2Bin.errors import (ImageFormatError, MalformedHeaderError, TruncatedPayloadError,
                                UnsupportedMaxvalError)
from Textimg2Bin.image_core import BinaryImage, ColorImage, GrayImage

logger = logging.getLogger(__name__)

MAXVAL = 255
NETPBM_MAGIC = (b'P4', b'P5', b'P6')


def _parse_header(buf):
    """Return (magic, numeric header fields, payload offset)."""
    magic = buf[:2]
    if magic not in NETPBM_MAGIC:
        raise MalformedHeaderError('not a binary NetPBM file (magic {!r})'.format(magic))
    if len(buf) < 3 or not buf[2:3].isspace():
        raise MalformedHeaderError('malformed header: no whitespace after magic number')

    wanted = 2 if magic == b'P4' else 3
    fields = []
    pos = 2
    while len(fields) < wanted:
        if pos >= len(buf):
            raise MalformedHeaderError('malformed header: ends after {} field(s)'.format(len(fields)))
        c = buf[pos:pos + 1]
        if c.isspace():
            pos += 1
            continue
        if c == b'#':
            end = buf.find(b'\n', pos)
            pos = len(buf) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(buf) and buf[pos:pos + 1].isdigit():
            pos += 1
        if pos == start:
            raise MalformedHeaderError('malformed header: unexpected byte {!r}'.format(c))
        fields.append(int(buf[start:pos]))

    # exactly one whitespace byte separates the header from the raster
    if pos >= len(buf) or not buf[pos:pos + 1].isspace():
        raise MalformedHeaderError('malformed header: missing separator before raster')
    return magic, fields, pos + 1


def decode_netpbm(buf):
    magic, fields, offset = _parse_header(buf)
    width, height = fields[0], fields[1]
    if width <= 0 or height <= 0:
        raise MalformedHeaderError('malformed header: size {}x{}'.format(width, height))
    if magic != b'P4' and fields[2] != MAXVAL:
        raise UnsupportedMaxvalError('unsupported maxval {} (only 255 is accepted)'.format(fields[2]))

    if magic == b'P4':
        row_bytes = (width + 7) // 8
        expected = row_bytes * height
    elif magic == b'P5':
        expected = width * height
    else:
        expected = 3 * width * height

    payload = buf[offset:offset + expected]
    if len(payload) < expected:
        raise TruncatedPayloadError('truncated payload: expected {} bytes, found {}'.format(
            expected, len(payload)))
    raster = np.frombuffer(payload, dtype=np.uint8)

    if magic == b'P4':
        bits = np.unpackbits(raster.reshape(height, row_bytes), axis=1)[:, :width]
        # PBM: 1 is black; our foreground is white
        return BinaryImage(bits == 0)
    if magic == b'P5':
        return GrayImage(raster.reshape(height, width))
    return ColorImage(raster.reshape(height, width, 3))


def encode_netpbm(img):
    if isinstance(img, BinaryImage):
        header = 'P4\n{} {}\n'.format(img.width, img.height).encode('ascii')
        bits = np.packbits(~img.pixels, axis=1)
        return header + bits.tobytes()
    if isinstance(img, GrayImage):
        header = 'P5\n{} {}\n{}\n'.format(img.width, img.height, MAXVAL).encode('ascii')
        return header + img.pixels.tobytes()
    if isinstance(img, ColorImage):
        header = 'P6\n{} {}\n{}\n'.format(img.width, img.height, MAXVAL).encode('ascii')
        return header + img.pixels.tobytes()
    raise TypeError('cannot encode {}'.format(type(img).__name__))


def _decode_with_pillow(buf, path):
    try:
        pil = Image.open(io.BytesIO(buf))
        pil.load()
    except (UnidentifiedImageError, OSError) as e:
        raise ImageFormatError('{}: unrecognised image format ({})'.format(path, e))
    logger.debug('decoded %s with Pillow (mode %s)', path, pil.mode)
    if pil.mode in ('L', '1', 'I', 'I;16', 'F'):
        return GrayImage(np.asarray(pil.convert('L')))
    return ColorImage(np.asarray(pil.convert('RGB')))


def read_image(path):
    """Read a GrayImage (P5), ColorImage (P6), BinaryImage (P4) or any Pillow format."""
    with open(path, 'rb') as f:
        buf = f.read()
    if buf[:2] in NETPBM_MAGIC:
        return decode_netpbm(buf)
    return _decode_with_pillow(buf, path)


def read_binary(path):
    """Read a binary mask; gray files count pixels >= 128 as foreground."""
    img = read_image(path)
    if isinstance(img, BinaryImage):
        return img
    if isinstance(img, ColorImage):
        raise ImageFormatError('{}: expected a binary or gray mask, found a color image'.format(path))
    return BinaryImage(img.pixels >= 128)


def _write(img, path):
    parent = os.path.dirname(os.fspath(path))
    if parent and not os.path.exists(parent):
        os.makedirs(parent)
    with open(path, 'wb') as f:
        f.write(encode_netpbm(img))


def write_gray(img, path):
    if not isinstance(img, GrayImage):
        raise TypeError('write_gray expects a GrayImage')
    _write(img, path)


def write_color(img, path):
    if not isinstance(img, ColorImage):
        raise TypeError('write_color expects a ColorImage')
    _write(img, path)


def write_binary(img, path):
    if not isinstance(img, BinaryImage):
        raise TypeError('write_binary expects a BinaryImage')
    _write(img, path)


def write_image(img, path):
    """Dispatch on image type; the file extension is not consulted."""
    _write(img, path)
