import csv
import io

CSV_HEADER = ('image', 'method', 'precision', 'recall', 'f_measure')


def format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return '{:.6f}'.format(value)
    if isinstance(value, (tuple, list)):
        return ' '.join(str(v) for v in value)
    return str(value)


def format_report(items):
    """``key = value`` lines from (key, value) pairs, in order."""
    return ''.join('{} = {}\n'.format(k, format_value(v)) for k, v in items)


def format_eval(report):
    return ('tp = {}\nfp = {}\nfn = {}\nprecision = {:.3f}\nrecall = {:.3f}\nf_measure = {:.3f}\n'
            .format(report.true_positive, report.false_positive, report.false_negative,
                    report.precision, report.recall, report.f_measure))


def format_boxes(boxes):
    """Sidecar lines ``label x_min y_min x_max y_max pixel_count``."""
    return ''.join('{} {} {} {} {} {}\n'.format(b.label, b.x_min, b.y_min, b.x_max, b.y_max,
                                                 b.pixel_count) for b in boxes)


def method_means(rows, methods):
    """Mean precision, recall and F per method over (image, method, report) rows."""
    means = {}
    for m in methods:
        reports = [r for _, method, r in rows if method == m]
        if not reports:
            continue
        n = len(reports)
        means[m] = (sum(r.precision for r in reports) / n,
                    sum(r.recall for r in reports) / n,
                    sum(r.f_measure for r in reports) / n)
    return means


def format_table(rows, methods):
    """Aligned plain-text table followed by per-method means."""
    body = [(image, method, '{:.3f}'.format(r.precision), '{:.3f}'.format(r.recall),
             '{:.3f}'.format(r.f_measure)) for image, method, r in rows]
    for m, (p, rc, f) in method_means(rows, methods).items():
        body.append(('MEAN', m, '{:.3f}'.format(p), '{:.3f}'.format(rc), '{:.3f}'.format(f)))

    widths = [max(len(str(cell)) for cell in col) for col in zip(CSV_HEADER, *body)]
    lines = []
    for i, row in enumerate([CSV_HEADER] + body):
        lines.append('  '.join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append('  '.join('-' * w for w in widths))
    return '\n'.join(lines) + '\n'


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for image, method, r in rows:
        writer.writerow([image, method, '%.6f' % r.precision, '%.6f' % r.recall, '%.6f' % r.f_measure])
    return buf.getvalue()
