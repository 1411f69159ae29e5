import os

import numpy as np
import pytest

from Textimg2Bin.cli import main
from Textimg2Bin.image_core import BinaryImage, GrayImage
from Textimg2Bin.synth import generate
from Textimg2Bin.utils.ims2file import read_image, write_binary, write_gray

SPEC = ('width = 64\nheight = 48\ntexture = checkerboard\nperiod = 2\namplitude = 40\n'
        'text = 4 12 21 dark AB\n')


@pytest.fixture
def sample(tmp_path, small_spec):
    """A synthetic image and its ground truth on disk"""
    img, truth = generate(small_spec)
    write_gray(img, tmp_path / 'img.pgm')
    write_binary(truth, tmp_path / 'img.pbm')
    return tmp_path


@pytest.fixture
def corpus(tmp_path):
    """Two-image corpus written by the synth command"""
    spec = tmp_path / 'words.txt'
    spec.write_text(SPEC)
    out = tmp_path / 'corpus'
    assert main(['synth', str(spec), str(out)]) == 0
    write_gray(GrayImage(np.full((32, 32), 150, dtype=np.uint8)), out / 'blank.pgm')
    write_binary(BinaryImage(np.zeros((32, 32), dtype=bool)), out / 'blank.pbm')
    return out


def test_binarize_writes_pbm(sample):
    """Valid PGM in, default config: PBM out and exit 0"""
    out = sample / 'out.pbm'
    assert main(['binarize', str(sample / 'img.pgm'), str(out)]) == 0
    assert out.read_bytes().startswith(b'P4\n64 64\n')
    assert isinstance(read_image(out), BinaryImage)


def test_binarize_missing_file(tmp_path, capsys):
    """Missing input exits 1 with a one-line diagnostic"""
    assert main(['binarize', str(tmp_path / 'nope.pgm'), str(tmp_path / 'o.pbm')]) == 1
    err = capsys.readouterr().err
    assert err.count('\n') == 1
    assert 'nope.pgm' in err


def test_binarize_bad_config(sample, capsys):
    cfg = sample / 'bad.cfg'
    cfg.write_text('contrast_v = -1\n')
    assert main(['binarize', str(sample / 'img.pgm'), str(sample / 'o.pbm'),
                 '--config', str(cfg)]) == 2
    assert 'bad.cfg' in capsys.readouterr().err


def test_binarize_bad_image(tmp_path, capsys):
    bad = tmp_path / 'deep.ppm'
    bad.write_bytes(b'P6\n1 1\n65535\n' + b'\x00' * 6)
    assert main(['binarize', str(bad), str(tmp_path / 'o.pbm')]) == 3
    assert 'unsupported maxval' in capsys.readouterr().err


def test_binarize_dump_stages(sample):
    dump = sample / 'stages'
    assert main(['binarize', str(sample / 'img.pgm'), str(sample / 'o.pbm'),
                 '--dump-stages', str(dump)]) == 0
    names = sorted(os.listdir(dump))
    assert names[0] == '01_gray.pgm' and '06_edges.pbm' in names and '10_binary.pbm' in names
    assert 'report.txt' in names
    report = (dump / 'report.txt').read_text()
    assert report.startswith('method = sliding\n')
    assert (dump / '10_binary.pbm').read_bytes() == (sample / 'o.pbm').read_bytes()


def test_binarize_single_stage(sample):
    out = sample / 'edges.pbm'
    assert main(['binarize', str(sample / 'img.pgm'), str(out), '--stage', '06_edges']) == 0
    assert isinstance(read_image(out), BinaryImage)
    out = sample / 'smooth.pgm'
    assert main(['binarize', str(sample / 'img.pgm'), str(out), '--stage', '03_smooth']) == 0
    assert isinstance(read_image(out), GrayImage)


def test_binarize_rejects_binary_input(sample, capsys):
    """A PBM mask is not a valid input image: exit 3, one-line diagnostic"""
    assert main(['binarize', str(sample / 'img.pbm'), str(sample / 'o.pbm')]) == 3
    err = capsys.readouterr().err
    assert err.count('\n') == 1
    assert 'img.pbm' in err and 'binary image' in err


def test_binarize_undecodable_config(sample, capsys):
    cfg = sample / 'latin1.cfg'
    cfg.write_bytes(b'contrast_v = 1\xff5\n')
    assert main(['binarize', str(sample / 'img.pgm'), str(sample / 'o.pbm'),
                 '--config', str(cfg)]) == 2
    assert 'latin1.cfg' in capsys.readouterr().err


def test_binarize_non_finite_config(sample):
    cfg = sample / 'nan.cfg'
    cfg.write_text('contrast_v = nan\n')
    assert main(['binarize', str(sample / 'img.pgm'), str(sample / 'o.pbm'),
                 '--config', str(cfg)]) == 2
    assert not (sample / 'o.pbm').exists()


@pytest.mark.parametrize('method', ['otsu', 'niblack'])
def test_binarize_baselines(sample, method):
    out = sample / (method + '.pbm')
    assert main(['binarize', str(sample / 'img.pgm'), str(out), '--method', method]) == 0
    assert read_image(out).shape == (64, 64)


def test_stage_needs_sliding(sample):
    assert main(['binarize', str(sample / 'img.pgm'), str(sample / 'o.pbm'),
                 '--method', 'otsu', '--stage', '06_edges']) == 2


def test_eval_identical(sample, capsys):
    """Eval of identical files prints F = 1.000"""
    truth = str(sample / 'img.pbm')
    assert main(['eval', truth, truth]) == 0
    out = capsys.readouterr().out
    assert 'f_measure = 1.000' in out
    assert 'precision = 1.000' in out


def test_eval_shape_mismatch(sample, tmp_path):
    write_binary(BinaryImage(np.zeros((3, 3), dtype=bool)), tmp_path / 'small.pbm')
    assert main(['eval', str(tmp_path / 'small.pbm'), str(sample / 'img.pbm')]) == 3


def test_synth_from_spec(corpus):
    assert {'words.pgm', 'words.pbm'} <= set(os.listdir(corpus))
    truth = read_image(corpus / 'words.pbm')
    assert truth.shape == (48, 64) and truth.count > 0


def test_synth_without_spec(tmp_path):
    assert main(['synth', str(tmp_path / 'x')]) == 2


def test_synth_bad_spec(tmp_path, capsys):
    spec = tmp_path / 'bad.txt'
    spec.write_text('width = 20\nheight = 20\ntext = 0 0 21 dark A\n')
    assert main(['synth', str(spec), str(tmp_path / 'out')]) == 2
    assert 'does not fit' in capsys.readouterr().err


def test_compare_empty_corpus(tmp_path, capsys):
    """Empty corpus directory exits 2 with a diagnostic"""
    (tmp_path / 'empty').mkdir()
    assert main(['compare', str(tmp_path / 'empty')]) == 2
    assert 'no <name>.pgm' in capsys.readouterr().err


def test_compare_writes_table_and_csv(corpus, capsys):
    capsys.readouterr()
    assert main(['compare', str(corpus), '--workers', '2', '--no-progress']) == 0
    rows = (corpus / 'compare.csv').read_text().splitlines()
    assert rows[0] == 'image,method,precision,recall,f_measure'
    assert [r.split(',')[:2] for r in rows[1:]] == [
        ['blank', 'sliding'], ['blank', 'otsu'], ['blank', 'niblack'],
        ['words', 'sliding'], ['words', 'otsu'], ['words', 'niblack']]
    table = (corpus / 'compare.txt').read_text()
    assert table == capsys.readouterr().out
    assert 'MEAN' in table


def test_compare_is_deterministic(corpus, tmp_path):
    assert main(['compare', str(corpus), '--out', str(tmp_path / 'a'), '--no-progress']) == 0
    assert main(['compare', str(corpus), '--out', str(tmp_path / 'b'), '--workers', '3',
                 '--no-progress']) == 0
    assert (tmp_path / 'a' / 'compare.csv').read_bytes() == (tmp_path / 'b' / 'compare.csv').read_bytes()
