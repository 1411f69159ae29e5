import argparse
import dataclasses
import math
from dataclasses import dataclass

from Textimg2Bin import settings
from Textimg2Bin.baselines import NiblackParams
from Textimg2Bin.edge_boxes import SIZE_METRICS
from Textimg2Bin.errors import ConfigError
from Textimg2Bin.preprocess import DEFAULT_MASK, PreprocessParams
from Textimg2Bin.sliding_binarize import TH_MODES, DifferenceThreshold

METHODS = ('sliding', 'otsu', 'niblack')

STAGES = ('01_gray', '02_contrast', '03_smooth', '04_extend', '05_threshold', '06_edges',
          '07_aspect_filter', '08_containment_filter', '09_size_filter', '10_binary')

_TRUE = ('true', 'yes', 'on', '1')
_FALSE = ('false', 'no', 'off', '0')


# ============================================================================
# key = value grammar
# ============================================================================
def parse_key_values(text, source='<config>', repeatable=()):
    """Split ``key = value`` lines into (key, value, line number) triples.

    ``#`` starts a comment and blank lines are skipped; a key may only appear
    once unless it is listed in ``repeatable``.
    """
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError('{}:{}: expected "key = value", got {!r}'.format(source, lineno, raw.strip()))
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError('{}:{}: missing key'.format(source, lineno))
        if key in seen and key not in repeatable:
            raise ConfigError('{}:{}: duplicate key {!r}'.format(source, lineno, key))
        seen.add(key)
        entries.append((key, value, lineno))
    return entries


def parse_bool(value):
    v = value.lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ValueError('not a boolean: {!r}'.format(value))


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return ' '.join(str(w) for row in value for w in row)
    return str(value)


def _parse_mask(value):
    weights = [int(w) for w in value.replace(',', ' ').split()]
    if len(weights) != 9:
        raise ValueError('smoothing_mask needs 9 weights, got {}'.format(len(weights)))
    return tuple(tuple(weights[r * 3:r * 3 + 3]) for r in range(3))


def _choice(options):
    def parse(value):
        if value not in options:
            raise ValueError('expected one of {}, got {!r}'.format(', '.join(options), value))
        return value
    return parse


# ============================================================================
# Pipeline configuration
# ============================================================================
@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the pipeline and the baselines.

    entropy_threshold is in bits.
    """

    entropy_threshold: float = 4.75
    contrast_v: float = 15.0
    extension_gap: float = 80.0
    smoothing_mask: tuple = DEFAULT_MASK
    smoothing_divisor: int = 10
    threshold_tolerance: float = 0.5
    threshold_max_iterations: int = 256
    aspect_ratio_min: float = 0.1
    aspect_ratio_max: float = 10.0
    containment_filter: bool = True
    size_metric: str = 'height'
    th_mode: str = 'relative'
    th_value: float = 0.2
    niblack_window: int = 15
    niblack_k: float = -0.2
    method: str = 'sliding'
    dump_boxes: bool = False

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError('{} must be a finite number'.format(f.name))
        # the component parameter types validate themselves
        self.preprocess_params
        self.niblack_params
        self.difference_threshold
        if self.size_metric not in SIZE_METRICS:
            raise ConfigError('size_metric must be one of {}'.format(', '.join(SIZE_METRICS)))
        if self.method not in METHODS:
            raise ConfigError('method must be one of {}'.format(', '.join(METHODS)))
        if not 0 < self.aspect_ratio_min <= self.aspect_ratio_max:
            raise ConfigError('aspect ratio bounds must satisfy 0 < min <= max')
        if self.threshold_tolerance <= 0:
            raise ConfigError('threshold_tolerance must be positive')
        if self.threshold_max_iterations < 1:
            raise ConfigError('threshold_max_iterations must be at least 1')

    @property
    def preprocess_params(self):
        return PreprocessParams(entropy_threshold=self.entropy_threshold, v=self.contrast_v,
                                extension_gap=self.extension_gap,
                                smoothing_mask=self.smoothing_mask, divisor=self.smoothing_divisor)

    @property
    def niblack_params(self):
        return NiblackParams(window=self.niblack_window, k=self.niblack_k)

    @property
    def difference_threshold(self):
        return DifferenceThreshold(mode=self.th_mode, value=self.th_value)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_text(cls, text, source='<config>'):
        values = {}
        for key, value, lineno in parse_key_values(text, source):
            parser = _FIELD_PARSERS.get(key)
            if parser is None:
                raise ConfigError('{}:{}: unknown key {!r}'.format(source, lineno, key))
            try:
                values[key] = parser(value)
            except ValueError as e:
                raise ConfigError('{}:{}: bad value for {}: {}'.format(source, lineno, key, e))
        try:
            return cls(**values)
        except ConfigError as e:
            raise ConfigError('{}: {}'.format(source, e))

    @classmethod
    def load(cls, path=None):
        """Read a config file; no path (and no TEXTBIN_CONFIG) means defaults."""
        path = path or settings['CONFIG']
        if not path:
            return cls()
        with open(path, 'r', encoding='utf-8') as f:
            try:
                text = f.read()
            except UnicodeDecodeError as e:
                raise ConfigError('{}: not valid UTF-8 text ({})'.format(path, e.reason))
        return cls.from_text(text, source=str(path))

    def to_text(self):
        lines = ['# effective pipeline configuration']
        for f in dataclasses.fields(self):
            lines.append('{} = {}'.format(f.name, _format(getattr(self, f.name))))
        return '\n'.join(lines) + '\n'


_FIELD_PARSERS = {
    'entropy_threshold': float,
    'contrast_v': float,
    'extension_gap': float,
    'smoothing_mask': _parse_mask,
    'smoothing_divisor': int,
    'threshold_tolerance': float,
    'threshold_max_iterations': int,
    'aspect_ratio_min': float,
    'aspect_ratio_max': float,
    'containment_filter': parse_bool,
    'size_metric': _choice(SIZE_METRICS),
    'th_mode': _choice(TH_MODES),
    'th_value': float,
    'niblack_window': int,
    'niblack_k': float,
    'method': _choice(METHODS),
    'dump_boxes': parse_bool,
}


# ============================================================================
# Command line
# ============================================================================
def get_parser():

    parser = argparse.ArgumentParser(prog='textimg2bin',
                                     description='binarize text in textured images')

    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (-v info, -vv debug)')

    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('binarize', help='binarize one image')
    p.add_argument('input', help='PGM/PPM (or any Pillow-readable) image')
    p.add_argument('output', help='output PBM (PGM for gray stages)')
    p.add_argument('--config', type=str, default=None,
                   help='key = value config file (default: $TEXTBIN_CONFIG or built-in)')
    p.add_argument('--method', type=str, default=None, choices=METHODS,
                   help='overrides the method in the config')
    p.add_argument('--dump-stages', dest='dump_stages', type=str, default=None,
                   help='directory for per-stage images and report.txt')
    p.add_argument('--stage', type=str, default=None, choices=STAGES,
                   help='write this stage image instead of the final result')

    p = sub.add_parser('synth', help='render synthetic text images with ground truth')
    p.add_argument('spec', nargs='?', default=None, help='synthetic image spec file')
    p.add_argument('out_dir', help='directory for <name>.pgm and <name>.pbm')
    p.add_argument('--builtin-corpus', dest='builtin_corpus', action='store_true',
                   help='write the 12-image evaluation corpus instead of one spec')
    p.add_argument('--seed', type=int, default=42, help='seed of the built-in corpus')

    p = sub.add_parser('eval', help='score a predicted mask against ground truth')
    p.add_argument('pred')
    p.add_argument('truth')

    p = sub.add_parser('compare', help='score every method on a corpus directory')
    p.add_argument('corpus_dir', help='pairs of <name>.pgm image and <name>.pbm ground truth')
    p.add_argument('--config', type=str, default=None)
    p.add_argument('--workers', type=int, default=settings['WORKERS'])
    p.add_argument('--out', type=str, default=None,
                   help='where compare.csv and compare.txt go (default: corpus_dir)')
    p.add_argument('--no-progress', dest='progress', action='store_false',
                   help='disable the progress bar')
    parser.set_defaults(progress=True)

    return parser


def get_args(argv=None):
    return get_parser().parse_args(argv)
