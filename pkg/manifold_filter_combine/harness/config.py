# -*- coding: utf-8 -*-
from collections import namedtuple

from manifold_filter_combine.codecs.json import network_from_config, network_to_dict
from manifold_filter_combine.errors import ConfigurationError, MFCNError
from manifold_filter_combine.graph import GraphConfig
from manifold_filter_combine.mfcn.norms import weight_norms
from manifold_filter_combine.mfcn.presets import linear_heat_network
from manifold_filter_combine.settings import Settings
from manifold_filter_combine.spectral.filters import SpectralFilter, filter_from_spec, filter_to_spec
from manifold_filter_combine.sphere_oracle import HarmonicExpansion, default_signal

EXPERIMENTS = ('filter', 'eigenvalue', 'multilayer')

CONFIG_KEYS = frozenset(['experiment', 'label', 'n_grid', 'trials', 'graph', 'kappa', 'filter', 'signal',
                         'base_seed', 'eigentrack_count', 'network', 'depth', 'dense_max_n', 'solver_tol',
                         'residual_tol', 'failed_trial_limit', 'gates'])
GRAPH_KEYS = frozenset(['mode', 'scale_c', 'eps', 'k', 'intrinsic_dim'])

GATE_SETTINGS = {
    'eigenvalue_rel': 'EIGENVALUE_GATE',
    'decay_factor': 'DECAY_GATE',
    'depth_ratio': 'DEPTH_RATIO_GATE',
}

DEFAULT_DEPTH = 3


class ExperimentConfig(namedtuple("ExperimentConfig", [
        "experiment", "label", "n_grid", "trials", "graph", "kappa", "filter", "signal", "base_seed",
        "eigentrack_count", "network", "dense_max_n", "solver_tol", "residual_tol", "failed_trial_limit",
        "gates"])):
    """Everything a convergence run depends on; echoed verbatim into its report."""

    __slots__ = ()

    def __new__(cls, experiment='filter', label=None, n_grid=None, trials=None, graph=None, kappa=None,
                filter=None, signal=None, base_seed=None, eigentrack_count=None, network=None, dense_max_n=None,
                solver_tol=None, residual_tol=None, failed_trial_limit=None, gates=None, settings=None):
        s = settings or Settings()
        if experiment not in EXPERIMENTS:
            raise ConfigurationError("experiment must be one of %s, got %r" % (", ".join(EXPERIMENTS), experiment),
                                     keys=['experiment'])
        graph = graph or GraphConfig.from_settings(s)
        n_grid = [int(n) for n in (n_grid if n_grid is not None else s.N_GRID)]
        trials = int(trials if trials is not None else s.TRIALS)
        kappa = int(kappa if kappa is not None else s.KAPPA)
        eigentrack_count = int(eigentrack_count if eigentrack_count is not None else s.EIGENTRACK_COUNT)
        if experiment == 'multilayer' and network is None:
            network = linear_heat_network(DEFAULT_DEPTH)
        if gates is None:
            gates = dict((name, s.get(key)) for name, key in GATE_SETTINGS.items())
        config = super(ExperimentConfig, cls).__new__(
            cls, experiment, label or "%s-%s" % (experiment, graph.mode), tuple(n_grid), trials, graph, kappa,
            filter or SpectralFilter.heat(), signal if signal is not None else default_signal(),
            int(base_seed if base_seed is not None else s.BASE_SEED), eigentrack_count, network,
            int(dense_max_n if dense_max_n is not None else s.DENSE_SOLVER_MAX_N),
            float(solver_tol if solver_tol is not None else s.SOLVER_TOL),
            float(residual_tol if residual_tol is not None else s.SOLVER_RESIDUAL_TOL),
            float(failed_trial_limit if failed_trial_limit is not None else s.FAILED_TRIAL_LIMIT),
            dict(gates))
        config.validate()
        return config

    @classmethod
    def from_settings(cls, settings, experiment='filter', mode='epsilon', **kwargs):
        kwargs.setdefault('graph', GraphConfig.from_settings(settings, mode))
        return cls(experiment, settings=settings, **kwargs)

    @classmethod
    def from_dict(cls, data, settings=None):
        """Build from a JSON object; unknown keys are rejected together."""
        if not isinstance(data, dict):
            raise ConfigurationError("experiment config must be a JSON object")
        unknown = sorted(set(data) - CONFIG_KEYS)
        graph_data = data.get('graph') or {}
        if not isinstance(graph_data, dict):
            raise ConfigurationError("graph must be an object", keys=['graph'])
        unknown += ['graph.%s' % key for key in sorted(set(graph_data) - GRAPH_KEYS)]
        gate_data = data.get('gates') or {}
        if not isinstance(gate_data, dict):
            raise ConfigurationError("gates must be an object", keys=['gates'])
        unknown += ['gates.%s' % key for key in sorted(set(gate_data) - set(GATE_SETTINGS))]
        if unknown:
            raise ConfigurationError("unknown configuration keys: %s" % ", ".join(unknown), keys=unknown)
        settings = settings or Settings()
        kwargs = {}
        try:
            mode = graph_data.get('mode', 'epsilon')
            kwargs['graph'] = GraphConfig.from_settings(settings, mode, **_graph_kwargs(graph_data))
            for key in ('label', 'n_grid', 'trials', 'kappa', 'base_seed', 'eigentrack_count', 'dense_max_n',
                        'solver_tol', 'residual_tol', 'failed_trial_limit'):
                if key in data:
                    kwargs[key] = data[key]
            if 'filter' in data:
                kwargs['filter'] = filter_from_spec(data['filter'])
            if 'signal' in data:
                kwargs['signal'] = HarmonicExpansion.from_list(data['signal'])
            if 'network' in data:
                kwargs['network'] = network_from_config(data['network'])
            elif 'depth' in data:
                kwargs['network'] = linear_heat_network(int(data['depth']))
            if gate_data:
                gates = dict((name, settings.get(key)) for name, key in GATE_SETTINGS.items())
                gates.update((name, float(value)) for name, value in gate_data.items())
                kwargs['gates'] = gates
            return cls(data.get('experiment', 'filter'), settings=settings, **kwargs)
        except ConfigurationError:
            raise
        except (MFCNError, TypeError, ValueError) as e:
            raise ConfigurationError("invalid experiment config: %s" % e, keys=_offending(data, e))

    def validate(self):
        grid = self.n_grid
        if not grid or any(n < 2 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigurationError("n_grid must be strictly increasing sizes >= 2, got %s" % (list(grid),),
                                     keys=['n_grid'])
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1", keys=['trials'])
        if self.kappa < 2 or self.kappa > grid[0]:
            raise ConfigurationError("kappa must lie in [2, %d], got %d" % (grid[0], self.kappa), keys=['kappa'])
        # index 0 is the trivial eigenvalue, tracking starts after it
        if not 1 <= self.eigentrack_count < self.kappa:
            raise ConfigurationError("eigentrack_count must lie in [1, kappa - 1], got %d" % self.eigentrack_count,
                                     keys=['eigentrack_count'])
        if self.experiment == 'multilayer':
            products = weight_norms(self.network).products
            if any(abs(p - 1.0) > 1e-12 for p in products):
                raise ConfigurationError("multilayer runs need A1*A2 = 1 in every layer, got %s" % (products,),
                                         keys=['network'])
            if self.network.C_in != 1:
                raise ConfigurationError("multilayer runs use a single input channel", keys=['network'])
        if not 0.0 <= self.failed_trial_limit <= 1.0:
            raise ConfigurationError("failed_trial_limit must lie in [0, 1]", keys=['failed_trial_limit'])

    def to_dict(self):
        data = {
            'experiment': self.experiment,
            'label': self.label,
            'n_grid': list(self.n_grid),
            'trials': self.trials,
            'graph': {'mode': self.graph.mode, 'scale_c': self.graph.scale_c, 'eps': self.graph.explicit_eps,
                      'k': self.graph.explicit_k, 'intrinsic_dim': self.graph.intrinsic_dim},
            'kappa': self.kappa,
            'filter': filter_to_spec(self.filter),
            'signal': self.signal.to_list(),
            'base_seed': self.base_seed,
            'eigentrack_count': self.eigentrack_count,
            'dense_max_n': self.dense_max_n,
            'solver_tol': self.solver_tol,
            'residual_tol': self.residual_tol,
            'failed_trial_limit': self.failed_trial_limit,
            'gates': dict(self.gates),
        }
        if self.network is not None:
            data['network'] = network_to_dict(self.network)
        return data


def _graph_kwargs(graph_data):
    kwargs = {}
    for key, name in (('scale_c', 'scale_c'), ('eps', 'explicit_eps'), ('k', 'explicit_k'),
                      ('intrinsic_dim', 'intrinsic_dim')):
        if graph_data.get(key) is not None:
            kwargs[name] = graph_data[key]
    return kwargs


def _offending(data, error):
    keys = [key for key in sorted(data) if key in str(error)]
    return keys or sorted(data)


def _merge(base, entry):
    merged = dict(base)
    merged.update(entry)
    if isinstance(base.get('graph'), dict) and isinstance(entry.get('graph'), dict):
        merged['graph'] = dict(base['graph'], **entry['graph'])
    return merged


def load_experiments(data, settings=None, overrides=None):
    """One or several configs from a JSON document.

    An ``experiments`` list is expanded with the remaining top-level keys as
    shared defaults; ``overrides`` (command-line flags) beat both.
    """
    overrides = overrides or {}
    if not isinstance(data, dict):
        raise ConfigurationError("experiment config must be a JSON object")
    if 'experiments' not in data:
        return [ExperimentConfig.from_dict(_merge(data, overrides), settings)]
    entries = data['experiments']
    if not isinstance(entries, list) or not entries or not all(isinstance(e, dict) for e in entries):
        raise ConfigurationError("experiments must be a non-empty list of objects", keys=['experiments'])
    shared = dict((k, v) for k, v in data.items() if k != 'experiments')
    return [ExperimentConfig.from_dict(_merge(_merge(shared, entry), overrides), settings) for entry in entries]
