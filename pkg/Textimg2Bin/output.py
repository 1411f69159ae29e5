"""
End-to-end binarization: the sliding-window pipeline, the baseline
dispatcher and stage dumping.
"""
import logging
import os
from dataclasses import dataclass, field

from Textimg2Bin.args import PipelineConfig
from Textimg2Bin.baselines import niblack_binarize, otsu_binarize
from Textimg2Bin.edge_boxes import containment_filter, filter_aspect_ratio, label_components
from Textimg2Bin.edge_detect import edge_map
from Textimg2Bin.image_core import BinaryImage, as_gray
from Textimg2Bin.preprocess import preprocess_trace
from Textimg2Bin.sliding_binarize import box_polarities, render_binary, sliding_window_filter
from Textimg2Bin.utils.ims2file import write_image
from Textimg2Bin.utils.output_utils import format_boxes, format_report

logger = logging.getLogger(__name__)


@dataclass
class StageReport:
    """Per-stage counts and thresholds of one pipeline run.

    ``stages`` maps stage names (``01_gray`` ... ``10_binary``) to full-size
    images; ``boxes`` are the edge boxes that survived every filter.
    """

    items: list = field(default_factory=list)
    stages: dict = field(default_factory=dict)
    boxes: tuple = ()
    rejections: tuple = ()

    def add(self, key, value):
        self.items.append((key, value))

    def get(self, key, default=None):
        for k, v in self.items:
            if k == key:
                return v
        return default

    def to_text(self):
        return format_report(self.items)


def binarize_pipeline(img, cfg=None, keep_stages=True):
    """Run the sliding-window pipeline; returns (BinaryImage, StageReport)."""
    cfg = cfg or PipelineConfig()
    report = StageReport()
    gray = as_gray(img)
    report.add('width', gray.width)
    report.add('height', gray.height)

    trace = preprocess_trace(gray, cfg.preprocess_params)
    report.add('entropy', trace.entropy)
    report.add('contrast_applied', trace.contrast_applied)
    report.add('extension_applied', trace.extension_applied)

    edges = edge_map(trace.extended, cfg.threshold_tolerance, cfg.threshold_max_iterations)
    report.add('threshold', edges.threshold.threshold)
    report.add('threshold_iterations', edges.threshold.iterations)
    report.add('threshold_converged', edges.threshold.converged)
    report.add('complemented', edges.complemented)
    report.add('edge_pixels', edges.edges.count)
    if edges.complemented:
        logger.info('class map complemented so that objects are the minority class')

    labeled = label_components(edges.edges)
    report.add('components', len(labeled.boxes))

    aspect = filter_aspect_ratio(labeled.boxes, cfg.aspect_ratio_min, cfg.aspect_ratio_max)
    report.add('aspect_rejected', len(aspect.rejected))
    candidates = aspect.kept
    rejections = list(aspect.rejected)
    if cfg.containment_filter:
        nested = containment_filter(candidates)
        candidates = nested.kept
        rejections.extend(nested.rejected)
        report.add('containment_rejected', len(nested.rejected))
    else:
        report.add('containment_rejected', 0)

    sliding = sliding_window_filter(candidates, cfg.difference_threshold, cfg.size_metric)
    kept_labels = set(sliding.retained)
    retained = tuple(b for b in candidates if b.label in kept_labels)
    report.add('size_metric', cfg.size_metric)
    report.add('windows', len(sliding.windows))
    report.add('t_s', sliding.t_s)
    report.add('retained', len(retained))
    report.add('removed', len(sliding.removed))

    polarities = box_polarities(edges.class_map, retained, trace.extended)
    ties = tuple(p.label for p in polarities if p.tie)
    report.add('polarity_ties', ties)
    if ties:
        logger.info('border polarity tie in %d box(es); darker class chosen', len(ties))

    binary = render_binary(edges.class_map, retained, labeled, trace.extended, polarities)
    report.add('foreground_pixels', binary.count)
    report.boxes = retained
    report.rejections = tuple(rejections)

    if keep_stages:
        report.stages = {
            '01_gray': gray,
            '02_contrast': trace.contrast,
            '03_smooth': trace.smoothed,
            '04_extend': trace.extended,
            '05_threshold': edges.class_map,
            '06_edges': edges.edges,
            '07_aspect_filter': labeled.mask_of(aspect.kept),
            '08_containment_filter': labeled.mask_of(candidates),
            '09_size_filter': labeled.mask_of(retained),
            '10_binary': binary,
        }
    logger.debug('pipeline: T*=%.3f, %d components, t_s=%s, %d retained',
                 edges.threshold.threshold, len(labeled.boxes), sliding.t_s, len(retained))
    return binary, report


def run_method(img, cfg=None, method=None):
    """Binarize with ``method`` (default: cfg.method) and return a BinaryImage."""
    cfg = cfg or PipelineConfig()
    method = method or cfg.method
    gray = as_gray(img)
    if method == 'sliding':
        return binarize_pipeline(gray, cfg, keep_stages=False)[0]
    if method == 'otsu':
        return otsu_binarize(gray)
    if method == 'niblack':
        return niblack_binarize(gray, cfg.niblack_params)
    raise ValueError('unknown method {!r}'.format(method))


def stage_filename(name, img):
    return name + ('.pbm' if isinstance(img, BinaryImage) else '.pgm')


def dump_stages(report, out_dir, dump_boxes=False):
    """Write every stage image, report.txt and optionally boxes.txt."""
    os.makedirs(out_dir, exist_ok=True)
    for name, img in report.stages.items():
        write_image(img, os.path.join(out_dir, stage_filename(name, img)))
    with open(os.path.join(out_dir, 'report.txt'), 'w', encoding='utf-8') as f:
        f.write(report.to_text())
    if dump_boxes:
        with open(os.path.join(out_dir, 'boxes.txt'), 'w', encoding='utf-8') as f:
            f.write(format_boxes(report.boxes))
    logger.debug('dumped %d stage image(s) to %s', len(report.stages), out_dir)


def stage_image(report, name):
    img = report.stages.get(name)
    if img is None:
        raise KeyError('no stage named {!r}'.format(name))
    return img
