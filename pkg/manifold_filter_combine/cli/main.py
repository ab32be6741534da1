# -*- coding: utf-8 -*-
"""Command-line entry point: ``mfcn <subcommand> ...``."""
import logging
import sys
from argparse import ArgumentParser
from contextlib import contextmanager

from manifold_filter_combine import __version__
from manifold_filter_combine.codecs.json import Decoder, Encoder
from manifold_filter_combine.codecs.msgpack import Decoder as BasisDecoder, Encoder as BasisEncoder
from manifold_filter_combine.errors import ConfigurationError, MFCNError, USAGE_ERRORS
from manifold_filter_combine.graph import GraphConfig, build_laplacian, check_connected, write_edge_list
from manifold_filter_combine.mfcn.layers import network_forward
from manifold_filter_combine.mfcn.norms import weight_norms
from manifold_filter_combine.pointcloud import (SignalMatrix, load_points, load_signals, normalize_signal,
                                                sample_sphere, save_points, save_signals)
from manifold_filter_combine.settings import Settings
from manifold_filter_combine.spectral.basis import eigensolve
from manifold_filter_combine.spectral.chebyshev import ChebyshevOperator
from manifold_filter_combine.spectral.filters import filter_from_spec

logger = logging.getLogger("mfcn.cli")

MODE_ALIASES = {'eps': 'epsilon', 'epsilon': 'epsilon', 'knn': 'knn'}
METHODS = ('exact', 'chebyshev')


@contextmanager
def _output(path, mode='w'):
    if path in (None, '-'):
        yield sys.stdout.buffer if 'b' in mode else sys.stdout
    else:
        with open(path, mode) as stream:
            yield stream


def _read_text(path):
    with open(path) as stream:
        return stream.read()


def _write_sidecar(path, text):
    with open(path, 'w') as stream:
        stream.write(text)
        stream.write('\n')
    logger.info("Wrote %s", path)


def _graph_config(args, settings):
    mode = MODE_ALIASES[args.mode]
    kwargs = {'intrinsic_dim': args.intrinsic_dim or settings.INTRINSIC_DIM}
    if args.scale is not None:
        kwargs['scale_c'] = args.scale
    if args.eps is not None:
        kwargs['explicit_eps'] = args.eps
    if args.k is not None:
        kwargs['explicit_k'] = args.k
    return GraphConfig.from_settings(settings, mode, **kwargs)


def _load_graph(args, settings):
    cloud = load_points(args.points, args.intrinsic_dim or settings.INTRINSIC_DIM)
    config = _graph_config(args, settings)
    graph, laplacian = build_laplacian(cloud, config, check=settings.CHECK_INVARIANTS, workers=args.jobs)
    connectivity = check_connected(graph)
    logger.info("Graph: n=%d, %s=%s, %d edges", cloud.n, 'eps' if config.mode == 'epsilon' else 'k',
                laplacian.eps_or_k, graph.edge_count)
    if not connectivity.connected:
        logger.warning("Graph is disconnected (%d components)", connectivity.component_count)
    return cloud, config, graph, laplacian, connectivity


def _basis(args, settings, laplacian):
    if getattr(args, 'basis', None):
        with open(args.basis, 'rb') as stream:
            basis = BasisDecoder().decode_basis(stream.read())
        if basis.source != laplacian.fingerprint():
            raise ConfigurationError("basis cache %s belongs to a different Laplacian" % args.basis,
                                     keys=['basis'])
        logger.info("Loaded %d cached eigenpairs from %s", basis.kappa, args.basis)
        return basis
    kappa = args.kappa if args.kappa is not None else min(settings.KAPPA, laplacian.n)
    return eigensolve(laplacian, kappa, settings.DENSE_SOLVER_MAX_N, settings.SOLVER_TOL,
                      settings.SOLVER_RESIDUAL_TOL)


def _operator(args, settings, laplacian):
    if args.method == 'chebyshev':
        return ChebyshevOperator(laplacian, args.degree or settings.CHEBYSHEV_DEGREE,
                                 safety=settings.LAMBDA_MAX_SAFETY)
    return _basis(args, settings, laplacian)


def _signals(args, cloud):
    signal = load_signals(args.signals, n=cloud.n)
    return normalize_signal(signal) if args.normalize else signal


def cmd_sample(args, settings):
    cloud = sample_sphere(args.n, args.seed)
    with _output(args.out) as stream:
        save_points(cloud, stream)
    return 0


def cmd_graph(args, settings):
    cloud, config, graph, laplacian, connectivity = _load_graph(args, settings)
    with _output(args.out) as stream:
        write_edge_list(graph, stream)
    meta = args.meta or (args.out + '.json' if args.out not in (None, '-') else None)
    if meta:
        _write_sidecar(meta, Encoder().encode_graph_meta(laplacian, connectivity, graph))
    return 0


def cmd_eigen(args, settings):
    cloud, config, graph, laplacian, connectivity = _load_graph(args, settings)
    basis = _basis(args, settings, laplacian)
    with _output(args.out) as stream:
        stream.write(Encoder().encode_basis(basis))
        stream.write('\n')
    if args.cache:
        with open(args.cache, 'wb') as stream:
            stream.write(BasisEncoder().encode_basis(basis))
    if args.vectors:
        with open(args.vectors, 'w') as stream:
            save_signals(SignalMatrix(basis.eigenvectors), stream, header=False)
    return 0


def cmd_filter(args, settings):
    cloud, config, graph, laplacian, connectivity = _load_graph(args, settings)
    w = filter_from_spec(args.filter)
    signal = _signals(args, cloud)
    operator = _operator(args, settings, laplacian)
    result = SignalMatrix(operator.apply(w, signal.values), signal.channel_names, signal.normalized)
    with _output(args.out) as stream:
        save_signals(result, stream)
    return 0


def cmd_forward(args, settings):
    cloud, config, graph, laplacian, connectivity = _load_graph(args, settings)
    net = Decoder().decode_network(_read_text(args.net))
    signal = _signals(args, cloud)
    operator = _operator(args, settings, laplacian)
    result = network_forward(net, operator, signal)
    with _output(args.out) as stream:
        save_signals(result, stream)
    meta = args.meta or (args.out + '.json' if args.out not in (None, '-') else None)
    if meta:
        resolved = {'points': args.points, 'signals': args.signals, 'net': args.net, 'graph': config.to_dict(),
                    'eps_or_k': laplacian.eps_or_k, 'method': args.method, 'normalize': args.normalize,
                    'kappa': getattr(operator, 'kappa', None), 'degree': getattr(operator, 'degree', None),
                    'version': __version__}
        _write_sidecar(meta, Encoder().encode_forward_meta(laplacian, connectivity, weight_norms(net), resolved))
    return 0


def _converge_overrides(args):
    overrides = {}
    if args.experiment:
        overrides['experiment'] = args.experiment
    if args.n_grid:
        overrides['n_grid'] = args.n_grid
    if args.trials is not None:
        overrides['trials'] = args.trials
    if args.kappa is not None:
        overrides['kappa'] = args.kappa
    if args.seed_given:
        overrides['base_seed'] = args.seed
    if args.mode:
        overrides['graph'] = {'mode': MODE_ALIASES[args.mode]}
    return overrides


def cmd_converge(args, settings):
    from manifold_filter_combine.harness.config import load_experiments
    from manifold_filter_combine.harness.experiments import run_experiment
    from manifold_filter_combine.harness.report import write_raw_csv

    data = Decoder().decode(_read_text(args.config)) if args.config else {}
    configs = load_experiments(data, settings, _converge_overrides(args))
    reports = [run_experiment(cfg, jobs=args.jobs) for cfg in configs]
    for report in reports:
        for name, gate in sorted(report.gates.items()):
            if not gate['passed']:
                logger.warning("%s: gate %s not met (value %s, threshold %s)", report.label, name, gate['value'],
                               gate['threshold'])
    with _output(args.out) as stream:
        stream.write(Encoder(timings=args.timings).encode_report(reports, __version__))
        stream.write('\n')
    if args.csv:
        with open(args.csv, 'w') as stream:
            write_raw_csv(reports, stream, timings=args.timings)
    if args.svg or args.eigen_svg:
        from manifold_filter_combine.harness.plot import plot_convergence, plot_eigen_tracks
        if args.svg:
            plot_convergence(reports, args.svg)
        if args.eigen_svg:
            for report in reports:
                if report.experiment == 'eigenvalue':
                    plot_eigen_tracks(report, args.eigen_svg)
    return 0


def cmd_bernstein(args, settings):
    from manifold_filter_combine.harness.bernstein import default_pairs, run_bernstein_check

    report = run_bernstein_check(args.n_grid or [1024, 4096], default_pairs(args.max_degree),
                                 args.trials, args.seed, args.jobs, settings.BERNSTEIN_GATE)
    if not report.passed:
        logger.warning("Bernstein bound violated in %.1f%% of trials", 100.0 * report.worst_frequency)
    with _output(args.out) as stream:
        stream.write(Encoder().encode_report([report], __version__))
        stream.write('\n')
    return 0


def _int_list(text):
    return [int(v) for v in text.split(',') if v.strip()]


def _common_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='Base random seed')
    common.add_argument('--jobs', type=int, default=None, help='Parallel worker processes')
    common.add_argument('--verbose', '-v', action='store_true', help='Shorthand for --log-level DEBUG')
    common.add_argument('--log-level', '-L', type=str, default='INFO',
                        help="Log level, for ex. DEBUG, INFO, WARN, ERROR")
    common.add_argument('--settings', type=str, help='Settings module name, should be accessible by import')
    return common


def _graph_arguments(parser):
    parser.add_argument('--points', type=str, required=True, help='Point CSV file')
    parser.add_argument('--intrinsic-dim', type=int, default=None, help='Intrinsic dimension d')
    parser.add_argument('--mode', choices=sorted(MODE_ALIASES), default='epsilon', help='Graph construction')
    parser.add_argument('--eps', type=float, help='Explicit radius (epsilon mode)')
    parser.add_argument('--k', type=int, help='Explicit neighbor count (knn mode)')
    parser.add_argument('--scale', type=float, help='Schedule multiplier c')


def _operator_arguments(parser):
    parser.add_argument('--signals', type=str, required=True, help='Signal CSV aligned with the points')
    parser.add_argument('--normalize', action='store_true', help='Apply the 1/sqrt(n) projection scaling')
    parser.add_argument('--method', choices=METHODS, default='exact', help='Filtering implementation')
    parser.add_argument('--kappa', type=int, help='Eigenpair count for exact filtering')
    parser.add_argument('--degree', type=int, help='Chebyshev degree')
    parser.add_argument('--basis', type=str, help='Cached eigenpairs written by "eigen --cache"')
    parser.add_argument('--out', type=str, default='-', help='Output signal CSV')


def build_parser():
    common = _common_parser()
    parser = ArgumentParser(prog='mfcn', description="Manifold filter-combine networks on point clouds.")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('sample', parents=[common], help='Sample points on a manifold')
    p.add_argument('--shape', choices=['sphere'], default='sphere')
    p.add_argument('--n', type=int, required=True, help='Number of points')
    p.add_argument('--out', type=str, default='-', help='Point CSV, standard output by default')
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('graph', parents=[common], help='Build a graph and dump its edge list')
    _graph_arguments(p)
    p.add_argument('--out', type=str, default='-', help='Edge list file')
    p.add_argument('--meta', type=str, help='JSON sidecar, <out>.json by default')
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser('eigen', parents=[common], help='Eigendecompose a graph Laplacian')
    _graph_arguments(p)
    p.add_argument('--kappa', type=int, help='Number of eigenpairs')
    p.add_argument('--out', type=str, default='-', help='JSON basis dump')
    p.add_argument('--cache', type=str, help='Binary eigenpair cache for later --basis use')
    p.add_argument('--vectors', type=str, help='Eigenvector CSV (n rows x kappa columns)')
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser('filter', parents=[common], help='Apply a spectral filter to signals')
    _graph_arguments(p)
    _operator_arguments(p)
    p.add_argument('--filter', type=str, default='heat', help='heat, heat:t, wavelet:j, constant:c, poly_in_heat:c0,..')
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser('forward', parents=[common], help='Run a network forward pass')
    _graph_arguments(p)
    _operator_arguments(p)
    p.add_argument('--net', type=str, required=True, help='Network JSON')
    p.add_argument('--meta', type=str, help='JSON sidecar, <out>.json by default')
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser('converge', parents=[common], help='Run convergence experiments')
    p.add_argument('--config', type=str, help='Experiment JSON')
    p.add_argument('--out', type=str, default='-', help='Report JSON')
    p.add_argument('--csv', type=str, help='Raw trial CSV')
    p.add_argument('--svg', type=str, help='Median error plot')
    p.add_argument('--eigen-svg', type=str, help='Eigenvalue track plot')
    p.add_argument('--timings', action='store_true', help='Record wall time per trial')
    p.add_argument('--experiment', choices=['filter', 'eigenvalue', 'multilayer'])
    p.add_argument('--mode', choices=sorted(MODE_ALIASES))
    p.add_argument('--n-grid', type=_int_list, help='Comma separated sample sizes')
    p.add_argument('--trials', type=int)
    p.add_argument('--kappa', type=int)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser('bernstein', parents=[common], help='Check inner-product concentration')
    p.add_argument('--n-grid', type=_int_list, help='Comma separated sample sizes')
    p.add_argument('--trials', type=int, default=100)
    p.add_argument('--max-degree', type=int, default=2)
    p.add_argument('--out', type=str, default='-', help='Report JSON')
    p.set_defaults(func=cmd_bernstein)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    logging.basicConfig()
    try:
        logging.getLogger("mfcn").setLevel('DEBUG' if args.verbose else args.log_level.upper())
    except ValueError as e:
        logger.error("%s", e)
        return 2
    try:
        settings = Settings(module=args.settings)
    except (ImportError, ValueError, NameError) as e:
        logger.error("Cannot load settings module %s: %s", args.settings, e)
        return 2
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = settings.BASE_SEED
    if args.jobs is None:
        args.jobs = settings.JOBS
    try:
        return args.func(args, settings) or 0
    except USAGE_ERRORS as e:
        logger.error("%s", e)
        return 2
    except MFCNError as e:
        logger.error("%s", e)
        return 1
    except (IOError, OSError) as e:
        logger.error("%s", e)
        return 1


if __name__ == '__main__':
    sys.exit(main())
