# -*- coding: utf-8 -*-
"""epsilon-graphs, symmetric k-NN graphs and the scaled graph Laplacians built on them."""
import hashlib
import logging
import math
from collections import namedtuple

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from manifold_filter_combine.errors import ArgumentError, ConfigurationError, DimensionError
from manifold_filter_combine.settings import default_settings

logger = logging.getLogger("mfcn.graph")

MODES = ('epsilon', 'knn')


def unit_ball_volume(d):
    """v_d, the volume of the d-dimensional Euclidean unit ball."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def _check_schedule_args(n, d, c):
    if not n >= 2:
        raise ArgumentError("schedules need n >= 2, got %r" % (n,))
    if int(d) != d or d < 1:
        raise ArgumentError("intrinsic dimension must be a positive integer, got %r" % (d,))
    if not c > 0:
        raise ArgumentError("schedule multiplier must be positive, got %r" % (c,))


def eps_schedule(n, d, c=default_settings.EPS_SCALE):
    """Radius c * (log n / n)^(1/(d+4))."""
    _check_schedule_args(n, d, c)
    return c * (math.log(n) / n) ** (1.0 / (d + 4))


def knn_schedule(n, d, c=default_settings.KNN_SCALE):
    """Neighbor count round(c * log(n)^(d/(d+4)) * n^(4/(d+4))), clamped to [1, n-1]."""
    _check_schedule_args(n, d, c)
    if int(n) != n:
        raise ArgumentError("k-NN schedule needs an integer n, got %r" % (n,))
    n = int(n)
    raw = c * math.log(n) ** (float(d) / (d + 4)) * n ** (4.0 / (d + 4))
    return int(min(max(math.floor(raw + 0.5), 1), n - 1))


class GraphConfig(namedtuple("GraphConfig", ["mode", "scale_c", "explicit_eps", "explicit_k", "intrinsic_dim"])):
    __slots__ = ()

    def __new__(cls, mode='epsilon', scale_c=None, explicit_eps=None, explicit_k=None,
                intrinsic_dim=default_settings.INTRINSIC_DIM):
        if mode not in MODES:
            raise ConfigurationError("graph mode must be one of %s, got %r" % (", ".join(MODES), mode),
                                     keys=['mode'])
        if scale_c is None:
            scale_c = default_settings.EPS_SCALE if mode == 'epsilon' else default_settings.KNN_SCALE
        if not scale_c > 0:
            raise ConfigurationError("scale_c must be positive, got %r" % (scale_c,), keys=['scale_c'])
        if explicit_eps is not None and not explicit_eps > 0:
            raise ConfigurationError("explicit eps must be positive", keys=['eps'])
        if explicit_k is not None and (int(explicit_k) != explicit_k or explicit_k < 1):
            raise ConfigurationError("explicit k must be a positive integer", keys=['k'])
        return super(GraphConfig, cls).__new__(cls, mode, float(scale_c),
                                               None if explicit_eps is None else float(explicit_eps),
                                               None if explicit_k is None else int(explicit_k),
                                               int(intrinsic_dim))

    @classmethod
    def from_settings(cls, settings, mode='epsilon', **kwargs):
        scale = settings.get('EPS_SCALE') if mode == 'epsilon' else settings.get('KNN_SCALE')
        kwargs.setdefault('scale_c', scale)
        kwargs.setdefault('intrinsic_dim', settings.get('INTRINSIC_DIM'))
        return cls(mode, **kwargs)

    def resolve(self, n):
        """The radius (epsilon mode) or neighbor count (knn mode) for n points.

        An explicit value always wins over the schedule.
        """
        if self.mode == 'epsilon':
            if self.explicit_eps is not None:
                return self.explicit_eps
            return eps_schedule(n, self.intrinsic_dim, self.scale_c)
        if self.explicit_k is not None:
            return self.explicit_k
        return knn_schedule(n, self.intrinsic_dim, self.scale_c)

    def to_dict(self):
        return dict(self._asdict())


class SparseGraph(namedtuple("SparseGraph", ["n", "adjacency", "degrees"])):
    """Unweighted undirected graph; ``adjacency`` is CSR with sorted column indices."""

    __slots__ = ()

    @classmethod
    def from_edges(cls, n, rows, cols):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        keep = rows != cols
        rows, cols = rows[keep], cols[keep]
        data = np.ones(2 * rows.size, dtype=np.float64)
        adjacency = sparse.csr_matrix((data, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
                                      shape=(n, n))
        adjacency.sum_duplicates()
        # repeated edges collapse to a single 0/1 entry
        adjacency.data[:] = 1.0
        adjacency.sort_indices()
        degrees = np.diff(adjacency.indptr).astype(np.int64)
        return cls(int(n), adjacency, degrees)

    @property
    def edge_count(self):
        return int(self.adjacency.nnz // 2)

    def edges(self):
        """Sorted (i, j) pairs with i < j."""
        upper = sparse.triu(self.adjacency, k=1).tocsr()
        upper.sort_indices()
        rows = np.repeat(np.arange(self.n), np.diff(upper.indptr))
        return np.column_stack([rows, upper.indices]).astype(np.int64)


class GraphLaplacian(namedtuple("GraphLaplacian", ["matrix", "scaling_s", "mode", "eps_or_k"])):
    """matrix = scaling_s * (D - A) as a symmetric CSR matrix."""

    __slots__ = ()

    @property
    def n(self):
        return self.matrix.shape[0]

    def fingerprint(self):
        m = self.matrix
        digest = hashlib.sha1()
        digest.update(np.asarray(m.shape, dtype=np.int64).tobytes())
        digest.update(m.indptr.astype(np.int64).tobytes())
        digest.update(m.indices.astype(np.int64).tobytes())
        digest.update(m.data.astype(np.float64).tobytes())
        return digest.hexdigest()

    def max_degree(self):
        return float(self.matrix.diagonal().max()) / self.scaling_s if self.n else 0.0

    def metadata(self):
        return {'n': self.n, 'mode': self.mode, 'eps_or_k': self.eps_or_k, 'scaling_s': self.scaling_s}


def _edge_lengths(points, rows, cols):
    return np.sqrt(np.sum((points[cols] - points[rows]) ** 2, axis=1))


def build_eps_graph(cloud, eps):
    """Edge {i, j} iff i != j and ||x_i - x_j|| < eps (strict)."""
    if not eps > 0:
        raise ArgumentError("eps must be positive, got %r" % (eps,))
    points = cloud.points
    tree = cKDTree(points)
    # the kd-tree test is inclusive; widen slightly and apply the strict test exactly below
    pairs = tree.query_pairs(eps * (1.0 + 1e-9), output_type='ndarray')
    if pairs.size:
        rows, cols = pairs[:, 0], pairs[:, 1]
        keep = _edge_lengths(points, rows, cols) < eps
        rows, cols = rows[keep], cols[keep]
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    graph = SparseGraph.from_edges(cloud.n, rows, cols)
    if graph.edge_count == 0:
        logger.warning("epsilon-graph with eps=%g on %d points has no edges", eps, cloud.n)
    logger.info("Built epsilon-graph: n=%d eps=%.6g edges=%d", cloud.n, eps, graph.edge_count)
    return graph


def build_knn_graph(cloud, k, workers=1):
    """Union-symmetrized k-NN graph; distance ties are broken by ascending vertex index."""
    n = cloud.n
    if int(k) != k or not 1 <= k <= n - 1:
        raise ArgumentError("k must satisfy 1 <= k <= n-1 = %d, got %r" % (n - 1, k))
    k = int(k)
    points = cloud.points
    tree = cKDTree(points)
    # distance to the k-th other point is the (k+1)-th distance counting the point itself
    dists, _ = tree.query(points, k=k + 1, workers=workers)
    radius = dists[:, k] * (1.0 + 1e-9) + 1e-12
    candidates = tree.query_ball_point(points, radius, workers=workers)
    rows = np.empty(n * k, dtype=np.int64)
    cols = np.empty(n * k, dtype=np.int64)
    for i in range(n):
        cand = np.asarray(candidates[i], dtype=np.int64)
        cand = cand[cand != i]
        d = np.sqrt(np.sum((points[cand] - points[i]) ** 2, axis=1))
        nearest = cand[np.lexsort((cand, d))[:k]]
        rows[i * k:(i + 1) * k] = i
        cols[i * k:(i + 1) * k] = nearest
    graph = SparseGraph.from_edges(n, rows, cols)
    logger.info("Built k-NN graph: n=%d k=%d edges=%d", n, k, graph.edge_count)
    return graph


def laplacian_from_graph(graph, scaling_s=1.0, mode=None, eps_or_k=None):
    """scaling_s * (D - A), assembled symmetrically."""
    if not scaling_s > 0:
        raise ArgumentError("Laplacian scaling must be positive, got %r" % (scaling_s,))
    degree = sparse.diags(graph.degrees.astype(np.float64), format='csr')
    matrix = (degree - graph.adjacency).tocsr() * float(scaling_s)
    matrix.sum_duplicates()
    matrix.sort_indices()
    return GraphLaplacian(matrix, float(scaling_s), mode, eps_or_k)


def laplacian_scaling(mode, n, d, eps_or_k):
    v_d = unit_ball_volume(d)
    if mode == 'epsilon':
        return (d + 2.0) / (v_d * n * eps_or_k ** (d + 2))
    if mode == 'knn':
        return (d + 2.0) / (v_d * n) * (n * v_d / eps_or_k) ** (1.0 + 2.0 / d)
    raise ConfigurationError("unknown graph mode %r" % (mode,), keys=['mode'])


def assemble_laplacian(graph, config, n, d, eps_or_k):
    """Scaled Laplacian of a graph built with ``config``.

    epsilon mode: s = (d+2) / (v_d n eps^(d+2));
    knn mode: s = (d+2)/(v_d n) * (n v_d / k)^(1 + 2/d).
    """
    if config.intrinsic_dim != d:
        raise ConfigurationError("intrinsic dimension mismatch: config has d=%d, cloud has d=%d"
                                 % (config.intrinsic_dim, d), keys=['intrinsic_dim'])
    if graph.n != n:
        raise DimensionError("graph has %d vertices but n=%d" % (graph.n, n), step="assemble_laplacian")
    s = laplacian_scaling(config.mode, n, d, eps_or_k)
    laplacian = laplacian_from_graph(graph, s, config.mode, eps_or_k)
    logger.debug("Assembled %s Laplacian: n=%d s=%.6g", config.mode, n, s)
    return laplacian


Connectivity = namedtuple("Connectivity", ["connected", "component_count"])


def check_connected(graph):
    count, _ = connected_components(graph.adjacency, directed=False)
    return Connectivity(bool(count == 1), int(count))


def check_laplacian(laplacian, dense_max_n=default_settings.DENSE_SOLVER_MAX_N):
    """Assert symmetry, constants in the kernel and positive semidefiniteness."""
    m = laplacian.matrix
    if (m != m.T).nnz:
        raise ArgumentError("Laplacian is not exactly symmetric")
    norm = float(abs(m).sum(axis=1).max()) if m.nnz else 0.0
    max_degree = laplacian.max_degree()
    kernel = np.abs(m.dot(np.ones(m.shape[0]))).max() if m.shape[0] else 0.0
    if kernel > 1e-10 * laplacian.scaling_s * max(max_degree, 1.0):
        raise ArgumentError("constant vector is not in the Laplacian kernel (residual %g)" % kernel)
    if m.shape[0] <= dense_max_n:
        smallest = np.linalg.eigvalsh(m.toarray())[0] if m.shape[0] else 0.0
    else:
        from scipy.sparse.linalg import eigsh
        smallest = eigsh(m, k=1, which='SA', return_eigenvectors=False)[0]
    if smallest < -1e-10 * max(norm, 1.0):
        raise ArgumentError("Laplacian is not positive semidefinite (smallest eigenvalue %g)" % smallest)
    return True


def build_graph(cloud, config, workers=1):
    """Resolve the schedule for ``cloud`` and build the graph; returns (graph, eps_or_k)."""
    if cloud.intrinsic_dim != config.intrinsic_dim:
        raise ConfigurationError("intrinsic dimension mismatch: config has d=%d, cloud has d=%d"
                                 % (config.intrinsic_dim, cloud.intrinsic_dim), keys=['intrinsic_dim'])
    value = config.resolve(cloud.n)
    if config.mode == 'epsilon':
        return build_eps_graph(cloud, value), value
    return build_knn_graph(cloud, value, workers=workers), value


def build_laplacian(cloud, config, check=default_settings.CHECK_INVARIANTS, workers=1):
    """Graph plus scaled Laplacian for ``cloud``; returns (graph, laplacian)."""
    graph, value = build_graph(cloud, config, workers=workers)
    laplacian = assemble_laplacian(graph, config, cloud.n, cloud.intrinsic_dim, value)
    if check:
        check_laplacian(laplacian)
    return graph, laplacian


def write_edge_list(graph, stream):
    """One "i j" line per edge, 0-based with i < j."""
    for i, j in graph.edges():
        stream.write("%d %d\n" % (i, j))
