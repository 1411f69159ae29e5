"""Command-line front end. Exit codes: 0 ok, 1 I/O, 2 config or corpus, 3 image format."""
import concurrent.futures as ccf
import logging
import os
import sys

from tqdm import tqdm

from Textimg2Bin import setup_logging
from Textimg2Bin.args import METHODS, PipelineConfig, get_args
from Textimg2Bin.errors import ConfigError, CorpusError, DimensionMismatchError, ImageFormatError
from Textimg2Bin.image_core import BinaryImage, as_gray
from Textimg2Bin.output import (StageReport, binarize_pipeline, dump_stages, run_method,
                                stage_image)
from Textimg2Bin.synth import acceptance_corpus, generate, load_synth_spec
from Textimg2Bin.utils.ims2file import read_binary, read_image, write_binary, write_gray, write_image
from Textimg2Bin.utils.metrics import evaluate
from Textimg2Bin.utils.output_utils import format_csv, format_eval, format_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_FORMAT = 3


def _load_config(path):
    cfg = PipelineConfig.load(path)
    logger.debug('effective configuration:\n%s', cfg.to_text())
    return cfg


# ============================================================================
# binarize
# ============================================================================
def cmd_binarize(args):
    cfg = _load_config(args.config)
    method = args.method or cfg.method
    img = read_image(args.input)
    if isinstance(img, BinaryImage):
        raise ImageFormatError('{}: binary image given, expected a gray or color image'.format(args.input))

    if method == 'sliding':
        want_stages = bool(args.dump_stages or args.stage)
        binary, report = binarize_pipeline(img, cfg, keep_stages=want_stages)
    else:
        if args.stage:
            raise ConfigError('--stage is only available for the sliding method')
        gray = as_gray(img)
        binary = run_method(gray, cfg, method)
        report = StageReport(stages={'01_gray': gray, '10_binary': binary})
        report.add('width', gray.width)
        report.add('height', gray.height)
        report.add('foreground_pixels', binary.count)
    report.items.insert(0, ('method', method))

    if args.dump_stages:
        dump_stages(report, args.dump_stages, dump_boxes=cfg.dump_boxes)
    out = stage_image(report, args.stage) if args.stage else binary
    write_image(out, args.output)
    logger.info('%s: %s -> %s', method, args.input, args.output)
    return EXIT_OK


# ============================================================================
# synth
# ============================================================================
def cmd_synth(args):
    if args.builtin_corpus:
        specs = acceptance_corpus(seed=args.seed)
    elif args.spec:
        name = os.path.splitext(os.path.basename(args.spec))[0]
        specs = {name: load_synth_spec(args.spec)}
    else:
        raise ConfigError('synth needs a spec file or --builtin-corpus')

    os.makedirs(args.out_dir, exist_ok=True)
    for name, spec in specs.items():
        img, truth = generate(spec)
        write_gray(img, os.path.join(args.out_dir, name + '.pgm'))
        write_binary(truth, os.path.join(args.out_dir, name + '.pbm'))
        print(name)
    return EXIT_OK


# ============================================================================
# eval
# ============================================================================
def cmd_eval(args):
    pred = read_binary(args.pred)
    truth = read_binary(args.truth)
    sys.stdout.write(format_eval(evaluate(pred, truth)))
    return EXIT_OK


# ============================================================================
# compare
# ============================================================================
def find_corpus(corpus_dir):
    """Sorted (name, image path, truth path) for every <name>.pgm with a <name>.pbm."""
    if not os.path.isdir(corpus_dir):
        raise CorpusError('{}: not a directory'.format(corpus_dir))
    pairs = []
    for fname in sorted(os.listdir(corpus_dir)):
        stem, ext = os.path.splitext(fname)
        truth = os.path.join(corpus_dir, stem + '.pbm')
        if ext == '.pgm' and os.path.isfile(truth):
            pairs.append((stem, os.path.join(corpus_dir, fname), truth))
    if not pairs:
        raise CorpusError('{}: no <name>.pgm / <name>.pbm pairs found'.format(corpus_dir))
    return pairs


def score_image(name, image_path, truth_path, cfg, methods=METHODS):
    img = as_gray(read_image(image_path))
    truth = read_binary(truth_path)
    return [(name, m, evaluate(run_method(img, cfg, m), truth)) for m in methods]


def compare_corpus(pairs, cfg, workers=1, progress=False, methods=METHODS):
    """Score every method on every pair; rows come back in (image, method) order."""
    rows = []
    with ccf.ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(score_image, name, img, truth, cfg, methods)
                   for name, img, truth in pairs]
        for future in tqdm(ccf.as_completed(futures), total=len(futures),
                           desc='compare', disable=not progress):
            rows.extend(future.result())
    order = {m: i for i, m in enumerate(methods)}
    rows.sort(key=lambda r: (r[0], order[r[1]]))
    return rows


def cmd_compare(args):
    cfg = _load_config(args.config)
    if args.workers < 1:
        raise ConfigError('--workers must be at least 1')
    pairs = find_corpus(args.corpus_dir)
    rows = compare_corpus(pairs, cfg, workers=args.workers, progress=args.progress)

    out_dir = args.out or args.corpus_dir
    os.makedirs(out_dir, exist_ok=True)
    table = format_table(rows, METHODS)
    with open(os.path.join(out_dir, 'compare.csv'), 'w', encoding='utf-8', newline='') as f:
        f.write(format_csv(rows))
    with open(os.path.join(out_dir, 'compare.txt'), 'w', encoding='utf-8') as f:
        f.write(table)
    sys.stdout.write(table)
    return EXIT_OK


COMMANDS = {
    'binarize': cmd_binarize,
    'synth': cmd_synth,
    'eval': cmd_eval,
    'compare': cmd_compare,
}


def main(argv=None):
    args = get_args(argv)
    level = {0: None, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    setup_logging(level)
    try:
        return COMMANDS[args.command](args)
    except ImageFormatError as e:
        code, msg = EXIT_FORMAT, str(e)
    except DimensionMismatchError as e:
        code, msg = EXIT_FORMAT, str(e)
    except ConfigError as e:
        code, msg = EXIT_CONFIG, str(e)
    except OSError as e:
        code = EXIT_IO
        msg = '{}: {}'.format(e.filename, e.strerror) if e.filename else str(e)
    print('textimg2bin: error: {}'.format(msg), file=sys.stderr)
    return code


if __name__ == '__main__':
    sys.exit(main())
