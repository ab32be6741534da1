# -*- coding: utf-8 -*-
"""Seeded Monte Carlo convergence experiments on the uniformly sampled sphere."""
import logging
import time
from collections import namedtuple
from multiprocessing import Pool

import numpy as np

from manifold_filter_combine.errors import ExperimentError, SolverError, UnsupportedOracleError
from manifold_filter_combine.graph import build_laplacian, check_connected
from manifold_filter_combine.harness.config import DEFAULT_DEPTH
from manifold_filter_combine.harness.report import ConvergenceReport
from manifold_filter_combine.mfcn.layers import layer_forward
from manifold_filter_combine.mfcn.presets import linear_heat_network
from manifold_filter_combine.pointcloud import sample_sphere
from manifold_filter_combine.spectral.basis import eigensolve
from manifold_filter_combine.sphere_oracle import (GRAPH_LIMITS, continuum_filter, continuum_network_forward,
                                                   project_expansion)
from manifold_filter_combine.utils import chunks, derive_seed

logger = logging.getLogger("mfcn.harness")

OK, SKIPPED, FAILED = 'ok', 'skipped', 'failed'


class TrialRecord(namedtuple("TrialRecord", [
        "n", "trial", "seed", "mode", "eps_or_k", "connected", "component_count", "status", "filter_error",
        "depth_errors", "eigenvalues", "trivial_eigenvalue", "seconds", "message"])):
    """One (n, trial) row of a convergence run.

    ``eigenvalues`` are the tracked nonzero eigenvalues; error fields are None
    unless ``status`` is ok.
    """

    __slots__ = ()

    @property
    def sort_key(self):
        return self.n, self.trial


def trial_seed(base_seed, n, trial):
    """Seed of trial ``trial`` at size ``n``; independent of execution order."""
    return derive_seed(base_seed, 'trial', n, trial)


def _error(discrete, target):
    return float(np.linalg.norm(np.asarray(discrete) - np.asarray(target)))


def _projected(expansions, cloud):
    return np.column_stack([project_expansion(f, cloud).values[:, 0] for f in expansions])


def _depth_errors(cfg, basis, cloud, x, kind):
    errors = []
    current = x
    for depth, layer in enumerate(cfg.network.layers, 1):
        current = layer_forward(layer, basis, current)
        target = _projected(continuum_network_forward(cfg.network.truncated(depth), [cfg.signal], kind), cloud)
        errors.append(_error(current, target))
    return tuple(errors)


def run_trial(cfg, n, trial):
    """Sample, build, eigensolve and compare against the continuum for one trial."""
    seed = trial_seed(cfg.base_seed, n, trial)
    mode = cfg.graph.mode
    started = time.perf_counter()
    cloud = sample_sphere(n, seed)
    graph, laplacian = build_laplacian(cloud, cfg.graph)
    eps_or_k = laplacian.eps_or_k
    connectivity = check_connected(graph)

    def record(status, filter_error=None, depth_errors=(), eigenvalues=(), trivial=None, message=''):
        return TrialRecord(n, trial, seed, mode, eps_or_k, connectivity.connected, connectivity.component_count,
                           status, filter_error, tuple(depth_errors), tuple(float(v) for v in eigenvalues),
                           trivial, time.perf_counter() - started, message)

    if not connectivity.connected:
        logger.warning("n=%d trial %d: graph has %d components, trial skipped",
                       n, trial, connectivity.component_count)
        return record(SKIPPED, message="disconnected (%d components)" % connectivity.component_count)
    try:
        basis = eigensolve(laplacian, cfg.kappa, cfg.dense_max_n, cfg.solver_tol, cfg.residual_tol)
    except SolverError as e:
        logger.warning("n=%d trial %d: eigensolver failed: %s", n, trial, e)
        return record(FAILED, message=str(e))

    kind = GRAPH_LIMITS[mode]
    x = project_expansion(cfg.signal, cloud).values
    # two-dimensional n x 1 input so depth one reproduces the filter experiment bit for bit
    discrete = basis.apply(cfg.filter, x)
    target = project_expansion(continuum_filter(cfg.filter, cfg.signal, kind), cloud).values
    depth_errors = _depth_errors(cfg, basis, cloud, x, kind) if cfg.experiment == 'multilayer' else ()
    tracked = basis.eigenvalues[1:cfg.eigentrack_count + 1]
    return record(OK, _error(discrete, target), depth_errors, tracked, float(basis.eigenvalues[0]))


def _run_batch(cfg, tasks):
    return [run_trial(cfg, n, trial) for n, trial in tasks]


def _run_batch_star(args):
    return _run_batch(*args)


def _run_records(cfg, jobs=1):
    tasks = [(n, trial) for n in cfg.n_grid for trial in range(cfg.trials)]
    if jobs > 1:
        size = max(1, len(tasks) // (4 * jobs))
        pool = Pool(jobs)
        try:
            batches = pool.map(_run_batch_star, [(cfg, batch) for batch in chunks(tasks, size)])
        finally:
            pool.close()
            pool.join()
        records = [r for batch in batches for r in batch]
    else:
        records = []
        for n in cfg.n_grid:
            logger.info("%s: n=%d, %d trials", cfg.label, n, cfg.trials)
            records.extend(_run_batch(cfg, [(n, trial) for trial in range(cfg.trials)]))
    return sorted(records, key=lambda r: r.sort_key)


def _check_failures(cfg, records):
    for n in cfg.n_grid:
        failed = sum(1 for r in records if r.n == n and r.status == FAILED)
        if failed > cfg.failed_trial_limit * cfg.trials:
            raise ExperimentError("%d of %d trials failed at n=%d" % (failed, cfg.trials, n), n=n, failed=failed)


def _run(cfg, experiment, jobs):
    if cfg.experiment != experiment:
        label = cfg.label
        if label == "%s-%s" % (cfg.experiment, cfg.graph.mode):
            label = "%s-%s" % (experiment, cfg.graph.mode)
        cfg = cfg._replace(experiment=experiment, label=label)
    started = time.perf_counter()
    records = _run_records(cfg, jobs)
    _check_failures(cfg, records)
    logger.info("%s finished in %.1fs", cfg.label, time.perf_counter() - started)
    return ConvergenceReport.from_records(cfg, records)


def run_filter_convergence(cfg, jobs=1):
    """||w(L_n) P_n f - P_n w(L) f||_2 per (n, trial)."""
    return _run(cfg, 'filter', jobs)


def run_eigenvalue_convergence(cfg, jobs=1):
    """The first ``eigentrack_count`` nonzero eigenvalues per (n, trial) against their continuum limits."""
    return _run(cfg, 'eigenvalue', jobs)


def run_multilayer_convergence(cfg, net=None, jobs=1):
    """Per-depth error of a linear network against its exact continuum counterpart."""
    if net is None:
        net = cfg.network if cfg.network is not None else linear_heat_network(DEFAULT_DEPTH)
    for index, layer in enumerate(net.layers):
        if layer.activation != 'identity':
            raise UnsupportedOracleError("layer %d uses %s; no continuum oracle exists for nonlinear layers"
                                         % (index, layer.activation))
    cfg = cfg._replace(experiment='multilayer', network=net)
    cfg.validate()
    return _run(cfg, 'multilayer', jobs)


RUNNERS = {
    'filter': run_filter_convergence,
    'eigenvalue': run_eigenvalue_convergence,
    'multilayer': run_multilayer_convergence,
}


def run_experiment(cfg, jobs=1):
    return RUNNERS[cfg.experiment](cfg, jobs=jobs)
