# -*- coding: utf-8 -*-
"""Point clouds, manifold samplers, signal projection and CSV ingestion."""
import csv
import io
import logging
import math
import numbers
from collections import namedtuple

import numpy as np

from manifold_filter_combine.errors import ArgumentError, EvaluationError, ParseError, DimensionError
from manifold_filter_combine.utils import derive_rng

logger = logging.getLogger("mfcn.pointcloud")

SPHERE_SHAPES = ('unit_sphere_uniform', 'from_file')

# uniform density on the unit 2-sphere with respect to surface measure
SPHERE_DENSITY = 1.0 / (4.0 * math.pi)


class PointCloud(namedtuple("PointCloud", ["points", "intrinsic_dim", "provenance"])):
    """n samples x_i in R^D (rows of ``points``) with a declared intrinsic dimension d."""

    __slots__ = ()

    def __new__(cls, points, intrinsic_dim, provenance=None):
        points = np.array(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise ArgumentError("point cloud needs an n x D matrix with n >= 1, got shape %s"
                                % (points.shape,))
        if not np.all(np.isfinite(points)):
            bad = int(np.argwhere(~np.isfinite(points))[0][0])
            raise ArgumentError("point %d has non-finite coordinates" % bad)
        intrinsic_dim = int(intrinsic_dim)
        if not 1 <= intrinsic_dim <= points.shape[1]:
            raise ArgumentError("intrinsic dimension %d outside [1, %d]" % (intrinsic_dim, points.shape[1]))
        points.setflags(write=False)
        return super(PointCloud, cls).__new__(cls, points, intrinsic_dim, provenance or {})

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def ambient_dim(self):
        return self.points.shape[1]


class SignalMatrix(namedtuple("SignalMatrix", ["values", "channel_names", "normalized"])):
    """n x C matrix of discretized channels.

    ``normalized`` records whether the 1/sqrt(n) projection scaling was applied.
    """

    __slots__ = ()

    def __new__(cls, values, channel_names=None, normalized=False):
        values = np.array(values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise DimensionError("signal must be an n x C matrix, got shape %s" % (values.shape,))
        if not np.all(np.isfinite(values)):
            bad = int(np.argwhere(~np.isfinite(values))[0][0])
            raise EvaluationError("signal row %d is not finite" % bad, index=bad)
        if channel_names is None:
            channel_names = ["x%d" % (k + 1) for k in range(values.shape[1])]
        channel_names = tuple(str(c) for c in channel_names)
        if len(channel_names) != values.shape[1]:
            raise DimensionError("%d channel names for %d columns" % (len(channel_names), values.shape[1]))
        values.setflags(write=False)
        return super(SignalMatrix, cls).__new__(cls, values, channel_names, bool(normalized))

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def channels(self):
        return self.values.shape[1]

    def check_rows(self, cloud):
        if self.n != cloud.n:
            raise DimensionError("signal has %d rows but the cloud has %d points" % (self.n, cloud.n))
        return self


SamplerSpec = namedtuple("SamplerSpec", ["shape", "seed", "n"])


def _check_count(n):
    if isinstance(n, bool) or not isinstance(n, numbers.Real) or int(n) != n or n < 1:
        raise ArgumentError("sample count must be a positive integer, got %r" % (n,))
    return int(n)


def _check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise ArgumentError("seed must be an integer, got %r" % (seed,))
    return int(seed)


def sample_sphere(n, seed):
    """n i.i.d. uniform points on the unit 2-sphere in R^3.

    Three independent standard Gaussians per point, normalized.
    """
    n = _check_count(n)
    rng = derive_rng(_check_seed(seed), 'sample_sphere')
    g = rng.standard_normal((n, 3))
    norms = np.linalg.norm(g, axis=1)
    # a zero Gaussian triple has probability zero; redraw to keep the contract anyway
    while np.any(norms == 0.0):
        zero = norms == 0.0
        g[zero] = rng.standard_normal((int(zero.sum()), 3))
        norms = np.linalg.norm(g, axis=1)
    points = g / norms[:, None]
    logger.debug("Sampled %d sphere points with seed %d", n, seed)
    return PointCloud(points, 2, {'sampler': 'unit_sphere_uniform', 'seed': int(seed), 'n': n})


def sample(spec, path=None, intrinsic_dim=None):
    """Dispatch on a :class:`SamplerSpec`."""
    if spec.shape == 'unit_sphere_uniform':
        return sample_sphere(spec.n, spec.seed)
    if spec.shape == 'from_file':
        if path is None or intrinsic_dim is None:
            raise ArgumentError("from_file sampling needs a path and an intrinsic dimension")
        return load_points(path, intrinsic_dim)
    raise ArgumentError("unknown sampler shape %r, expected one of %s" % (spec.shape, ", ".join(SPHERE_SHAPES)))


def _evaluate(f, points, pointwise=False):
    if pointwise:
        values = np.array([float(f(p)) for p in points])
    else:
        values = np.asarray(f(points), dtype=np.float64).reshape(-1)
    if values.shape != (points.shape[0],):
        raise DimensionError("signal function returned %d values for %d points" % (values.size, points.shape[0]),
                             step="project_signal")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise EvaluationError("signal is not finite at point %d" % bad[0], index=int(bad[0]))
    return values


def project_signal(f, cloud, name='f', pointwise=False):
    """P_n f: entry i is f(x_i) / sqrt(n).

    ``f`` is called with the whole n x D point matrix and must return n values,
    or once per point when ``pointwise`` is set.
    """
    values = _evaluate(f, cloud.points, pointwise) / math.sqrt(cloud.n)
    return SignalMatrix(values, [name], normalized=True)


def project_signals(functions, cloud):
    """Project several named functions into one n x C signal matrix."""
    names = list(functions)
    columns = [_evaluate(functions[name], cloud.points) for name in names]
    values = np.column_stack(columns) / math.sqrt(cloud.n)
    return SignalMatrix(values, names, normalized=True)


def normalize_signal(signal):
    """Apply the 1/sqrt(n) projection scaling, exactly once."""
    if signal.normalized:
        return signal
    return SignalMatrix(signal.values / math.sqrt(signal.n), signal.channel_names, normalized=True)


def _parse_float(cell, line, path):
    try:
        value = float(cell)
    except ValueError:
        raise ParseError("non-numeric cell %r" % cell, line=line, path=path)
    if not math.isfinite(value):
        raise ParseError("non-finite cell %r" % cell, line=line, path=path)
    return value


def _read_rows(stream, path):
    rows = []
    for line_no, row in enumerate(csv.reader(stream), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        rows.append((line_no, [c.strip() for c in row]))
    return rows


def _open(path_or_stream):
    if hasattr(path_or_stream, 'read'):
        return path_or_stream, getattr(path_or_stream, 'name', None), False
    return io.open(path_or_stream, 'r', newline=''), str(path_or_stream), True


def load_points(path, intrinsic_dim, format='csv'):
    """Read a headerless CSV, one point per row."""
    if format != 'csv':
        raise ArgumentError("unsupported point format %r" % format)
    stream, name, owned = _open(path)
    try:
        rows = _read_rows(stream, name)
    finally:
        if owned:
            stream.close()
    if not rows:
        raise ParseError("empty point file", line=1, path=name)
    width = len(rows[0][1])
    points = []
    for line_no, row in rows:
        if len(row) != width:
            raise ParseError("expected %d columns, found %d" % (width, len(row)), line=line_no, path=name)
        points.append([_parse_float(c, line_no, name) for c in row])
    cloud = PointCloud(points, intrinsic_dim, {'sampler': 'from_file', 'path': name})
    logger.info("Loaded %d points in R^%d from %s", cloud.n, cloud.ambient_dim, name)
    return cloud


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_signals(path, n=None):
    """Read a signal CSV: an optional header of channel names, then n rows x C columns.

    Values are taken as raw f(x_i), so the returned matrix is not normalized.
    """
    stream, name, owned = _open(path)
    try:
        rows = _read_rows(stream, name)
    finally:
        if owned:
            stream.close()
    if not rows:
        raise ParseError("empty signal file", line=1, path=name)
    names = None
    if not all(_is_number(c) for c in rows[0][1]):
        names = rows[0][1]
        rows = rows[1:]
        if not rows:
            raise ParseError("signal file has a header but no rows", line=2, path=name)
    width = len(names) if names is not None else len(rows[0][1])
    values = []
    for line_no, row in rows:
        if len(row) != width:
            raise ParseError("expected %d columns, found %d" % (width, len(row)), line=line_no, path=name)
        values.append([_parse_float(c, line_no, name) for c in row])
    if n is not None and len(values) != n:
        raise DimensionError("signal file has %d rows, expected %d" % (len(values), n), step="load_signals")
    return SignalMatrix(values, names, normalized=False)


def _write_matrix(matrix, stream, header=None):
    writer = csv.writer(stream, lineterminator='\n')
    if header is not None:
        writer.writerow(header)
    for row in matrix:
        # repr round-trips exactly, so files reload bit for bit
        writer.writerow([repr(float(v)) for v in row])


def save_points(cloud, stream):
    _write_matrix(cloud.points, stream)


def save_signals(signal, stream, header=True):
    _write_matrix(signal.values, stream, list(signal.channel_names) if header else None)
