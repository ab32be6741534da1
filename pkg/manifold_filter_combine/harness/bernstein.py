# -*- coding: utf-8 -*-
"""Empirical check of the inner-product concentration bound

|<P_n f, P_n g> - <f, g>| <= 6 sqrt(log n / n) ||f||_4 ||g||_4

for band-limited f, g on the uniformly sampled sphere.
"""
import logging
import math
from collections import namedtuple
from multiprocessing import Pool

import numpy as np

from manifold_filter_combine import __version__
from manifold_filter_combine.errors import ArgumentError
from manifold_filter_combine.pointcloud import sample_sphere
from manifold_filter_combine.settings import default_settings
from manifold_filter_combine.sphere_oracle import HarmonicExpansion, l4_norm, real_harmonics
from manifold_filter_combine.utils import derive_seed

logger = logging.getLogger("mfcn.harness")

DEFAULT_MAX_DEGREE = 2
BOUND_CONSTANT = 6.0

HarmonicPair = namedtuple("HarmonicPair", ["label", "f", "g"])


def _label(f):
    terms = f.terms()
    if len(terms) == 1 and terms[0][2] == 1.0:
        return "Y[%d,%d]" % terms[0][:2]
    return repr(f)


def default_pairs(max_degree=DEFAULT_MAX_DEGREE):
    """Every unordered pair (including f = g) of real harmonics up to ``max_degree``."""
    harmonics = [HarmonicExpansion.harmonic(l, m) for l, m in real_harmonics(max_degree)]
    pairs = []
    for i, f in enumerate(harmonics):
        for g in harmonics[i:]:
            pairs.append(HarmonicPair("%s,%s" % (_label(f), _label(g)), f, g))
    return pairs


def concentration_bound(n, f, g):
    return BOUND_CONSTANT * math.sqrt(math.log(n) / n) * l4_norm(f) * l4_norm(g)


def _trial_deviations(n, seed, pairs):
    cloud = sample_sphere(n, seed)
    cache = {}

    def projected(f):
        if id(f) not in cache:
            cache[id(f)] = f.evaluate(cloud.points) / math.sqrt(n)
        return cache[id(f)]

    return [abs(float(np.dot(projected(p.f), projected(p.g))) - p.f.inner(p.g)) for p in pairs]


def _trial_deviations_star(args):
    return _trial_deviations(*args)


class BernsteinReport(object):

    def __init__(self, n_grid, pairs, trials, base_seed, rows, gate, version=__version__):
        self.n_grid = list(n_grid)
        self.pairs = pairs
        self.trials = trials
        self.base_seed = base_seed
        self.rows = rows
        self.gate = gate
        self.version = version

    @property
    def label(self):
        return 'bernstein'

    @property
    def worst_frequency(self):
        return max(row['violation_frequency'] for row in self.rows)

    @property
    def passed(self):
        return self.worst_frequency <= self.gate

    def frequency(self, n, label):
        for row in self.rows:
            if row['n'] == n and row['pair'] == label:
                return row['violation_frequency']
        raise KeyError((n, label))

    def to_dict(self, timings=False):
        return {'kind': 'bernstein',
                'label': self.label,
                'version': self.version,
                'config': {'n_grid': self.n_grid,
                           'trials': self.trials,
                           'base_seed': self.base_seed,
                           'bound_constant': BOUND_CONSTANT,
                           'pairs': [{'label': p.label, 'f': p.f.to_list(), 'g': p.g.to_list()}
                                     for p in self.pairs]},
                'rows': self.rows,
                'gates': {'violation_frequency': {'value': self.worst_frequency, 'threshold': self.gate,
                                                  'passed': self.passed}}}


def run_bernstein_check(n_grid, pairs=None, trials=100, base_seed=0, jobs=1,
                        gate=default_settings.BERNSTEIN_GATE):
    """Violation frequency of the concentration bound per (n, pair)."""
    if trials < 1 or not n_grid or any(n < 2 for n in n_grid):
        raise ArgumentError("Bernstein check needs trials >= 1 and sizes n >= 2")
    pairs = [p if isinstance(p, HarmonicPair) else HarmonicPair(*p) for p in (pairs or default_pairs())]
    tasks = [(n, derive_seed(base_seed, 'bernstein', n, trial), pairs) for n in n_grid for trial in range(trials)]
    if jobs > 1:
        pool = Pool(jobs)
        try:
            deviations = pool.map(_trial_deviations_star, tasks)
        finally:
            pool.close()
            pool.join()
    else:
        deviations = [_trial_deviations(*task) for task in tasks]

    rows = []
    for index, n in enumerate(n_grid):
        block = np.asarray(deviations[index * trials:(index + 1) * trials])
        for column, pair in enumerate(pairs):
            bound = concentration_bound(n, pair.f, pair.g)
            violations = int(np.sum(block[:, column] > bound))
            rows.append({'n': n,
                         'pair': pair.label,
                         'target': pair.f.inner(pair.g),
                         'bound': bound,
                         'max_deviation': float(block[:, column].max()),
                         'violations': violations,
                         'violation_frequency': violations / float(trials)})
        logger.info("Bernstein n=%d: worst violation frequency %.3f", n,
                    max(r['violation_frequency'] for r in rows if r['n'] == n))
    return BernsteinReport(n_grid, pairs, trials, base_seed, rows, gate)
