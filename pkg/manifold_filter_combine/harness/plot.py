# -*- coding: utf-8 -*-
"""Static SVG figures of convergence reports."""
import re

import matplotlib
matplotlib.use('Agg')
import matplotlib as mpl
from matplotlib.figure import Figure

import numpy as np

mpl.rcParams.update({
    'interactive': False,
    'svg.hashsalt': 'mfcn',
    'axes.unicode_minus': False,
    'figure.figsize': [6.4, 4.2],
})

# svg metadata without a creation date keeps files reproducible
SVG_METADATA = {'Date': None}


def element_id(prefix, label):
    return "%s-%s" % (prefix, re.sub(r'[^A-Za-z0-9_.-]+', '-', label).strip('-'))


def _save(fig, out):
    fig.savefig(out, format='svg', metadata=SVG_METADATA, bbox_inches='tight')


def plot_convergence(reports, out, title=None):
    """Log-log median error against n, one line and one 25-75% band per report."""
    fig = Figure()
    ax = fig.add_subplot(111)
    for report in reports:
        ns, median, q25, q75 = report.series()
        if not len(ns):
            continue
        line, = ax.loglog(ns, median, marker='o', label=report.label)
        line.set_gid(element_id('median', report.label))
        band = ax.fill_between(ns, q25, q75, color=line.get_color(), alpha=0.25, linewidth=0)
        band.set_gid(element_id('band', report.label))
    ax.set_xlabel('n')
    ax.set_ylabel('error')
    if title:
        ax.set_title(title)
    ax.legend(loc='best')
    _save(fig, out)


def plot_eigen_tracks(report, out):
    """Median tracked eigenvalues against n with their continuum limits dashed."""
    fig = Figure()
    ax = fig.add_subplot(111)
    ns = np.asarray([s['n'] for s in report.summary], dtype=np.float64)
    targets = report.summary[0]['eigenvalue_targets']
    for i, target in enumerate(targets):
        medians = [s['eigenvalues'][i]['median'] for s in report.summary]
        keep = [m is not None for m in medians]
        if any(keep):
            line, = ax.semilogx(ns[keep], [m for m in medians if m is not None], marker='.',
                                label="lambda_%d" % (i + 2))
            line.set_gid(element_id('track', "%s-%d" % (report.label, i + 2)))
    for target in sorted(set(targets)):
        ax.axhline(target, color='gray', linestyle='--', linewidth=0.8)
    ax.set_xlabel('n')
    ax.set_ylabel('eigenvalue')
    ax.legend(loc='best', fontsize='small')
    _save(fig, out)
