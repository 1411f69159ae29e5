from dataclasses import dataclass

import numpy as np

from Textimg2Bin.image_core import check_same_shape


@dataclass(frozen=True)
class EvalReport:
    true_positive: int
    false_positive: int
    false_negative: int
    precision: float
    recall: float
    f_measure: float


def new_error_types():
    return {'tp_all': 0, 'fp_all': 0, 'fn_all': 0}


def update_error_types(error_types, y_pred, y_true):

    error_types['tp_all'] += int(np.count_nonzero(y_pred & y_true))
    error_types['fp_all'] += int(np.count_nonzero(y_pred & ~y_true))
    error_types['fn_all'] += int(np.count_nonzero(~y_pred & y_true))


def compute_metrics(error_types):
    """Precision, recall and F from accumulated counts; an empty denominator gives 0."""
    tp, fp, fn = error_types['tp_all'], error_types['fp_all'], error_types['fn_all']
    pre = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * pre * rec / (pre + rec) if pre + rec else 0.0
    return EvalReport(true_positive=tp, false_positive=fp, false_negative=fn,
                      precision=pre, recall=rec, f_measure=f1)


def evaluate(pred, truth):
    """Pixel-level scores of a predicted text mask against ground truth."""
    check_same_shape(pred, truth)
    error_types = new_error_types()
    update_error_types(error_types, pred.pixels, truth.pixels)
    return compute_metrics(error_types)
