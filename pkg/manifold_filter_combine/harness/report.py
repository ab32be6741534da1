# -*- coding: utf-8 -*-
import csv

import numpy as np

from manifold_filter_combine import __version__
from manifold_filter_combine.sphere_oracle import ContinuumOracle

# leading eigenvalues whose medians are gated: the degree-one triplet
GATED_EIGENVALUES = 3


def quantiles(values):
    """Median with 25th and 75th percentiles (linear interpolation); None when empty."""
    values = [v for v in values if v is not None]
    if not values:
        return {'q25': None, 'median': None, 'q75': None, 'count': 0}
    q25, median, q75 = np.percentile(np.asarray(values, dtype=np.float64), [25, 50, 75])
    return {'q25': float(q25), 'median': float(median), 'q75': float(q75), 'count': len(values)}


def _eigenvalue_error(record, targets):
    if not record.eigenvalues:
        return None
    return float(np.mean(np.abs(np.asarray(record.eigenvalues) - targets[:len(record.eigenvalues)])))


def _depth_ratios(record):
    if not record.depth_errors or record.depth_errors[0] == 0.0:
        return ()
    return tuple(e / record.depth_errors[0] for e in record.depth_errors)


def summarize(cfg, records):
    """Per-n statistics, recomputable from the raw records."""
    oracle = ContinuumOracle.for_graph_mode(cfg.graph.mode)
    targets = np.asarray(oracle.eigenvalues(cfg.eigentrack_count))
    depth = len(cfg.network) if cfg.experiment == 'multilayer' else 0
    summary = []
    for n in cfg.n_grid:
        rows = [r for r in records if r.n == n]
        ok = [r for r in rows if r.status == 'ok']
        ratios = [_depth_ratios(r) for r in ok]
        summary.append({
            'n': n,
            'eps_or_k': rows[0].eps_or_k if rows else None,
            'trials': len(rows),
            'ok': len(ok),
            'skipped': sum(1 for r in rows if r.status == 'skipped'),
            'failed': sum(1 for r in rows if r.status == 'failed'),
            'filter_error': quantiles([r.filter_error for r in ok]),
            'eigenvalues': [quantiles([r.eigenvalues[i] for r in ok]) for i in range(cfg.eigentrack_count)],
            'eigenvalue_targets': targets.tolist(),
            'eigenvalue_error': quantiles([_eigenvalue_error(r, targets) for r in ok]),
            'depth_errors': [quantiles([r.depth_errors[d] for r in ok]) for d in range(depth)],
            'depth_ratios': [quantiles([q[d] for q in ratios if q]) for d in range(depth)],
        })
    return summary


def _gate(value, threshold, passed):
    return {'value': value, 'threshold': threshold, 'passed': bool(passed) if value is not None else False}


def _decreasing_pairs(medians):
    return sum(1 for a, b in zip(medians, medians[1:]) if a is not None and b is not None and b < a)


def evaluate_gates(cfg, summary):
    """Acceptance checks against the frozen thresholds in ``cfg.gates``."""
    gates = {}
    last = summary[-1]
    if cfg.experiment in ('filter', 'multilayer'):
        medians = [s['filter_error']['median'] for s in summary]
        decay = None
        if medians[0] is not None and medians[-1]:
            decay = medians[0] / medians[-1]
        gates['decay_factor'] = _gate(decay, cfg.gates['decay_factor'],
                                      decay is not None and decay >= cfg.gates['decay_factor'])
        pairs = len(medians) - 1
        gates['strictly_decreasing'] = _gate(_decreasing_pairs(medians), pairs,
                                             _decreasing_pairs(medians) == pairs)
    if cfg.experiment == 'eigenvalue':
        rel = []
        for q, target in list(zip(last['eigenvalues'], last['eigenvalue_targets']))[:GATED_EIGENVALUES]:
            rel.append(None if q['median'] is None else abs(q['median'] - target) / target)
        worst = None if None in rel or not rel else max(rel)
        gates['eigenvalue_rel'] = _gate(worst, cfg.gates['eigenvalue_rel'],
                                        worst is not None and worst <= cfg.gates['eigenvalue_rel'])
        errors = [s['eigenvalue_error']['median'] for s in summary]
        nonincreasing = None not in errors and all(b <= a for a, b in zip(errors, errors[1:]))
        gates['eigenvalue_error_nonincreasing'] = _gate(nonincreasing, True, nonincreasing)
    if cfg.experiment == 'multilayer' and last['depth_ratios']:
        ratio = last['depth_ratios'][-1]['median']
        gates['depth_ratio'] = _gate(ratio, cfg.gates['depth_ratio'],
                                     ratio is not None and ratio <= cfg.gates['depth_ratio'])
    return gates


def _record_to_dict(record, timings):
    data = record._asdict()
    data['depth_errors'] = list(record.depth_errors)
    data['eigenvalues'] = list(record.eigenvalues)
    if not timings:
        del data['seconds']
    return data


class ConvergenceReport(object):

    def __init__(self, config, records, summary, gates, version=__version__):
        self.config = config
        self.records = list(records)
        self.summary = summary
        self.gates = gates
        self.version = version

    @classmethod
    def from_records(cls, cfg, records):
        records = sorted(records, key=lambda r: r.sort_key)
        summary = summarize(cfg, records)
        return cls(cfg, records, summary, evaluate_gates(cfg, summary))

    @property
    def experiment(self):
        return self.config.experiment

    @property
    def label(self):
        return self.config.label

    @property
    def passed(self):
        return all(g['passed'] for g in self.gates.values())

    def series(self):
        """(n, median, q25, q75) of the headline error, for plotting."""
        if self.experiment == 'eigenvalue':
            stats = [s['eigenvalue_error'] for s in self.summary]
        elif self.experiment == 'multilayer' and self.summary[0]['depth_errors']:
            stats = [s['depth_errors'][-1] for s in self.summary]
        else:
            stats = [s['filter_error'] for s in self.summary]
        rows = [(s['n'], q['median'], q['q25'], q['q75']) for s, q in zip(self.summary, stats)
                if q['median'] is not None]
        return tuple(np.asarray(column, dtype=np.float64) for column in zip(*rows)) if rows else ((),) * 4

    def medians(self, key='filter_error'):
        return [s[key]['median'] for s in self.summary]

    def to_dict(self, timings=False):
        return {'kind': 'convergence',
                'experiment': self.experiment,
                'label': self.label,
                'version': self.version,
                'config': self.config.to_dict(),
                'summary': self.summary,
                'gates': self.gates,
                'trials': [_record_to_dict(r, timings) for r in self.records]}


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_raw_csv(reports, stream, timings=False):
    """Flat table of every trial of every report, rows sorted by (n, trial) within a report."""
    depth = max([len(r.config.network) if r.experiment == 'multilayer' else 0 for r in reports] or [0])
    tracked = max([r.config.eigentrack_count for r in reports] or [0])
    header = ['experiment', 'n', 'trial', 'mode', 'eps_or_k', 'connected', 'status', 'filter_error']
    header += ['depth_error_%d' % (d + 1) for d in range(depth)]
    header += ['lambda_%d' % (i + 1) for i in range(tracked)]
    if timings:
        header.append('seconds')
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for report in reports:
        for r in report.records:
            row = [report.label, r.n, r.trial, r.mode, r.eps_or_k, r.connected, r.status, r.filter_error]
            row += [r.depth_errors[d] if d < len(r.depth_errors) else None for d in range(depth)]
            row += [r.eigenvalues[i] if i < len(r.eigenvalues) else None for i in range(tracked)]
            if timings:
                row.append(r.seconds)
            writer.writerow([_cell(v) for v in row])
