# -*- coding: utf-8 -*-
from manifold_filter_combine.harness.config import ExperimentConfig, load_experiments
from manifold_filter_combine.harness.experiments import (TrialRecord, trial_seed, run_trial, run_filter_convergence,
                                                         run_eigenvalue_convergence, run_multilayer_convergence,
                                                         run_experiment)
from manifold_filter_combine.harness.report import ConvergenceReport, quantiles, write_raw_csv
from manifold_filter_combine.harness.bernstein import (BernsteinReport, HarmonicPair, default_pairs,
                                                       concentration_bound, run_bernstein_check)

__all__ = ['ExperimentConfig', 'load_experiments', 'TrialRecord', 'trial_seed', 'run_trial',
           'run_filter_convergence', 'run_eigenvalue_convergence', 'run_multilayer_convergence', 'run_experiment',
           'ConvergenceReport', 'quantiles', 'write_raw_csv', 'BernsteinReport', 'HarmonicPair', 'default_pairs',
           'concentration_bound', 'run_bernstein_check']
