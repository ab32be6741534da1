# -*- coding: utf-8 -*-
"""Continuum ground truth on the unit 2-sphere with uniform sampling.

Real spherical harmonics are orthonormal with respect to the uniform
probability measure mu, i.e. the usual surface-orthonormal harmonics scaled by
sqrt(4 pi). The epsilon-graph Laplacian converges to -Delta / (8 pi) and the
k-NN one to -2 pi Delta, so degree l has eigenvalue l(l+1)/(8 pi) or
2 pi l(l+1) respectively.
"""
import math
from collections import OrderedDict

import numpy as np
from numpy.polynomial.legendre import leggauss

from manifold_filter_combine.errors import ArgumentError, DimensionError, ParseError, UnsupportedOracleError
from manifold_filter_combine.pointcloud import project_signal

LIMIT_KINDS = ('eps_limit', 'knn_limit')
GRAPH_LIMITS = {'epsilon': 'eps_limit', 'knn': 'knn_limit'}

ON_SPHERE_TOL = 1e-9


def _check_degree(l, m):
    if int(l) != l or int(m) != m or l < 0 or abs(m) > l:
        raise ArgumentError("invalid harmonic degree/order (l=%r, m=%r)" % (l, m))
    return int(l), int(m)


def _check_points(points):
    points = np.asarray(points, dtype=np.float64)
    single = points.ndim == 1
    points = np.atleast_2d(points)
    if points.shape[1] != 3:
        raise DimensionError("sphere points must be in R^3, got shape %s" % (points.shape,), step="eval_harmonic")
    off = np.flatnonzero(np.abs(np.linalg.norm(points, axis=1) - 1.0) > ON_SPHERE_TOL)
    if off.size:
        raise ArgumentError("point %d is off the unit sphere (norm %.12g)"
                            % (off[0], np.linalg.norm(points[off[0]])))
    return points, single


def legendre(l, m, x):
    """Associated Legendre function P_l^m(x), m >= 0, without the Condon-Shortley phase."""
    x = np.asarray(x, dtype=np.float64)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    p_mm = np.ones_like(x)
    for i in range(1, m + 1):
        p_mm = p_mm * (2 * i - 1) * s
    if l == m:
        return p_mm
    p_prev, p = p_mm, x * (2 * m + 1) * p_mm
    for ll in range(m + 2, l + 1):
        p_prev, p = p, ((2 * ll - 1) * x * p - (ll + m - 1) * p_prev) / (ll - m)
    return p


def harmonic_values(l, m, points):
    """Real harmonic Y_l^m at each row of ``points`` (probability-orthonormal)."""
    l, m = _check_degree(l, m)
    points, single = _check_points(points)
    z = np.clip(points[:, 2], -1.0, 1.0)
    am = abs(m)
    norm = math.sqrt((2 * l + 1) * math.factorial(l - am) / float(math.factorial(l + am)))
    values = norm * legendre(l, am, z)
    if m != 0:
        phi = np.arctan2(points[:, 1], points[:, 0])
        values = values * math.sqrt(2.0) * (np.cos(am * phi) if m > 0 else np.sin(am * phi))
    return values[0] if single else values


def eval_harmonic(l, m, point):
    return float(harmonic_values(l, m, np.asarray(point, dtype=np.float64).reshape(3)))


def real_harmonics(max_degree):
    """All (l, m) with l <= max_degree, ordered by l then m."""
    return [(l, m) for l in range(max_degree + 1) for m in range(-l, l + 1)]


class HarmonicBasis(object):
    """All real harmonics up to ``max_degree``, probability-orthonormal."""

    convention = 'probability'

    def __init__(self, max_degree):
        if int(max_degree) != max_degree or max_degree < 0:
            raise ArgumentError("max_degree must be a non-negative integer, got %r" % (max_degree,))
        self.max_degree = int(max_degree)
        self.indices = real_harmonics(self.max_degree)

    def __len__(self):
        return len(self.indices)

    def evaluate(self, points):
        """n x len(self) matrix with column i holding Y_{indices[i]}."""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.column_stack([harmonic_values(l, m, points) for l, m in self.indices])

    def gram(self, points):
        """<P_n Y, P_n Y'> over the sample, which tends to the identity."""
        values = self.evaluate(points)
        return values.T.dot(values) / values.shape[0]


def continuum_eigenvalue(l, kind='eps_limit'):
    if int(l) != l or l < 0:
        raise ArgumentError("degree must be a non-negative integer, got %r" % (l,))
    if kind == 'eps_limit':
        return l * (l + 1) / (8.0 * math.pi)
    if kind == 'knn_limit':
        return 2.0 * math.pi * l * (l + 1)
    raise ArgumentError("unknown Laplacian limit %r, expected one of %s" % (kind, ", ".join(LIMIT_KINDS)))


class ContinuumOracle(object):

    def __init__(self, laplacian_kind='eps_limit'):
        if laplacian_kind not in LIMIT_KINDS:
            raise ArgumentError("unknown Laplacian limit %r" % (laplacian_kind,))
        self.laplacian_kind = laplacian_kind

    @classmethod
    def for_graph_mode(cls, mode):
        return cls(GRAPH_LIMITS[mode])

    def eigenvalue(self, l):
        return continuum_eigenvalue(l, self.laplacian_kind)

    def eigenvalues(self, count, skip_zero=True):
        """The first ``count`` eigenvalues with multiplicity 2l+1, ascending."""
        values = []
        l = 1 if skip_zero else 0
        while len(values) < count:
            values.extend([self.eigenvalue(l)] * (2 * l + 1))
            l += 1
        return values[:count]


class HarmonicExpansion(object):
    """Finite real-harmonic expansion sum c_{l,m} Y_l^m."""

    def __init__(self, terms=()):
        if isinstance(terms, dict):
            terms = [(l, m, c) for (l, m), c in terms.items()]
        coeffs = {}
        for l, m, c in terms:
            key = _check_degree(l, m)
            coeffs[key] = coeffs.get(key, 0.0) + float(c)
        self.coeffs = OrderedDict(sorted(coeffs.items()))

    @classmethod
    def harmonic(cls, l, m, coeff=1.0):
        return cls([(l, m, coeff)])

    @classmethod
    def from_list(cls, items):
        try:
            return cls([(item['l'], item['m'], item['coeff']) for item in items])
        except (KeyError, TypeError) as e:
            raise ParseError("expansion entries need l, m and coeff: %s" % e)

    def to_list(self):
        return [{'l': l, 'm': m, 'coeff': c} for (l, m), c in self.coeffs.items()]

    @property
    def max_degree(self):
        return max([l for l, _ in self.coeffs] or [0])

    def coefficient(self, l, m):
        return self.coeffs.get((l, m), 0.0)

    def map_coefficients(self, func):
        return HarmonicExpansion([(l, m, func(l, m, c)) for (l, m), c in self.coeffs.items()])

    def evaluate(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.zeros(points.shape[0])
        for (l, m), c in self.coeffs.items():
            if c != 0.0:
                out += c * harmonic_values(l, m, points)
        return out

    __call__ = evaluate

    def inner(self, other):
        """<f, g> in L^2(mu), exact by orthonormality."""
        return sum(c * other.coefficient(l, m) for (l, m), c in self.coeffs.items())

    def norm(self):
        return math.sqrt(self.inner(self))

    def __add__(self, other):
        return HarmonicExpansion(self.terms() + other.terms())

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        return self.map_coefficients(lambda l, m, c: c * scalar)

    __rmul__ = __mul__

    def terms(self):
        return [(l, m, c) for (l, m), c in self.coeffs.items()]

    def is_zero(self):
        return all(c == 0.0 for c in self.coeffs.values())

    def __repr__(self):
        return "HarmonicExpansion(%s)" % ", ".join("%r*Y[%d,%d]" % (c, l, m) for l, m, c in self.terms())


def default_signal():
    """Y_1^0 + Y_2^0."""
    return HarmonicExpansion([(1, 0, 1.0), (2, 0, 1.0)])


def project_expansion(f, cloud, name='f'):
    """P_n f for an expansion on a sphere cloud."""
    return project_signal(f.evaluate, cloud, name)


def sphere_quadrature(degree):
    """Product rule on the sphere exact for polynomials up to ``degree``.

    Gauss-Legendre in z with degree//2 + 1 nodes times the trapezoid rule in phi
    with degree + 1 nodes; weights sum to one (uniform probability measure).
    """
    z, wz = leggauss(degree // 2 + 1)
    count = degree + 1
    phi = 2.0 * math.pi * np.arange(count) / count
    zz, pp = np.meshgrid(z, phi, indexing='ij')
    r = np.sqrt(np.maximum(0.0, 1.0 - zz * zz))
    points = np.column_stack([(r * np.cos(pp)).ravel(), (r * np.sin(pp)).ravel(), zz.ravel()])
    # re-project so nodes pass the on-sphere check exactly
    points /= np.linalg.norm(points, axis=1)[:, None]
    weights = np.repeat(wz / 2.0, count) / count
    return points, weights


def lp_norm(f, p=4):
    """||f||_{L^p(mu)} by quadrature, exact for even integer p on band-limited f."""
    points, weights = sphere_quadrature(p * max(f.max_degree, 1))
    return float(np.dot(weights, np.abs(f.evaluate(points)) ** p) ** (1.0 / p))


def l4_norm(f):
    return lp_norm(f, 4)


def continuum_filter(w, f, kind='eps_limit'):
    """w(L) f: each coefficient scaled by w at its continuum eigenvalue."""
    return f.map_coefficients(lambda l, m, c: c * float(w(continuum_eigenvalue(l, kind))))


def continuum_network_forward(net, F, kind='eps_limit'):
    """Exact continuum forward pass of a linear network on band-limited inputs.

    ``F`` is one expansion per input channel; returns one per output channel.
    """
    if isinstance(F, HarmonicExpansion):
        F = [F]
    F = list(F)
    for index, layer in enumerate(net.layers):
        if layer.activation != 'identity':
            raise UnsupportedOracleError("layer %d uses %s; the continuum oracle needs identity activations"
                                         % (index, layer.activation))
        if len(F) != layer.C_in:
            raise DimensionError("layer %d expects %d channels, got %d" % (index, layer.C_in, len(F)),
                                 step="filtering")
        filtered = [[continuum_filter(layer.filters[j][k], F[k], kind) for k in range(layer.C_in)]
                    for j in range(layer.J)]
        combined = [[_combine(filtered[j], layer.theta[j][:, k]) for k in range(layer.C_mid)]
                    for j in range(layer.J)]
        crossed = [[_combine([combined[i][k] for i in range(layer.J)], layer.alpha[k][j]) for k in range(layer.C_mid)]
                   for j in range(layer.J_out)]
        F = [crossed[j][k] for j in range(layer.J_out) for k in range(layer.C_mid)]
    if net.layers and net.output_permutation is not None:
        F = [F[p] for p in net.output_permutation]
    return F


def _combine(expansions, weights):
    out = HarmonicExpansion()
    for f, w in zip(expansions, weights):
        if w != 0.0:
            out = out + float(w) * f
    return out
