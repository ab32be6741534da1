# -*- coding: utf-8 -*-
"""Decomposition-free filtering with Chebyshev expansions of the response."""
import logging
from collections import namedtuple

import numpy as np
from numpy.polynomial import chebyshev

from manifold_filter_combine.errors import ApproximationError, ArgumentError, DimensionError, DomainError
from manifold_filter_combine.pointcloud import SignalMatrix
from manifold_filter_combine.settings import default_settings
from manifold_filter_combine.utils import derive_rng

logger = logging.getLogger("mfcn.spectral")

# degree of the reference expansion the truncation is taken from
_REFERENCE_DEGREE = 256
_CHECK_POINTS = 4097


class ChebyshevApprox(namedtuple("ChebyshevApprox", ["degree", "coefficients", "domain_max", "error_bound"])):
    """sum_k c_k T_k(2 lambda / domain_max - 1) on [0, domain_max].

    ``error_bound`` bounds sup |p - w| over the domain.
    """

    __slots__ = ()

    def __call__(self, lam):
        t = 2.0 * np.asarray(lam, dtype=np.float64) / self.domain_max - 1.0
        return chebyshev.chebval(t, self.coefficients)


def chebyshev_approx(w, degree=default_settings.CHEBYSHEV_DEGREE, domain_max=None, tol=None):
    """Truncated Chebyshev expansion of ``w`` on [0, domain_max].

    The expansion is cut from a high-degree interpolant; the stored error bound
    is the discarded coefficient mass plus the interpolant's observed error on a
    dense grid.
    """
    if int(degree) != degree or degree < 0:
        raise ArgumentError("Chebyshev degree must be a non-negative integer, got %r" % (degree,))
    if domain_max is None or not domain_max > 0:
        raise ArgumentError("Chebyshev domain maximum must be positive, got %r" % (domain_max,))
    degree = int(degree)
    domain_max = float(domain_max)

    def on_interval(t):
        return w((t + 1.0) * 0.5 * domain_max)

    reference_degree = max(_REFERENCE_DEGREE, 4 * (degree + 1))
    reference = chebyshev.chebinterpolate(on_interval, reference_degree)
    coefficients = np.array(reference[:degree + 1])
    tail = float(np.abs(reference[degree + 1:]).sum())
    grid = np.cos(np.linspace(0.0, np.pi, _CHECK_POINTS))
    resolution = float(np.abs(chebyshev.chebval(grid, reference) - on_interval(grid)).max())
    bound = tail + resolution
    if tol is not None and bound > tol:
        raise ApproximationError("degree %d leaves a sup error bound of %.3g above %.3g" % (degree, bound, tol),
                                 error_bound=bound)
    return ChebyshevApprox(degree, coefficients, domain_max, bound)


def estimate_lambda_max(laplacian, iterations=default_settings.POWER_ITERATIONS, tol=1e-10):
    """Power-iteration estimate of the largest eigenvalue (a lower bound)."""
    matrix = laplacian.matrix
    n = matrix.shape[0]
    v = derive_rng(int(laplacian.fingerprint()[:15], 16), 'power_iteration').standard_normal(n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for i in range(iterations):
        u = matrix.dot(v)
        rayleigh = float(v.dot(u))
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return 0.0
        v = u / norm
        if abs(rayleigh - estimate) <= tol * max(abs(rayleigh), 1.0):
            estimate = rayleigh
            break
        estimate = rayleigh
    logger.debug("Power iteration: lambda_max ~ %.6g after %d steps", estimate, i + 1)
    return estimate


def _as_matrix(x, n):
    if isinstance(x, SignalMatrix):
        x = x.values
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != n or x.ndim not in (1, 2):
        raise DimensionError("expected %d rows, got shape %s" % (n, x.shape), step="chebyshev filter")
    return x


def apply_filter_chebyshev(approx, laplacian, x, lambda_max=None):
    """p(L) x by the Clenshaw recurrence, using only mat-vec products."""
    matrix = laplacian.matrix
    x = _as_matrix(x, matrix.shape[0])
    if lambda_max is None:
        lambda_max = estimate_lambda_max(laplacian)
    if lambda_max > approx.domain_max:
        raise DomainError(lambda_max, approx.domain_max)
    scale = 2.0 / approx.domain_max

    def shifted(v):
        return scale * matrix.dot(v) - v

    c = approx.coefficients
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(len(c) - 1, 0, -1):
        b1, b2 = c[k] * x + 2.0 * shifted(b1) - b2, b1
    return c[0] * x + shifted(b1) - b2


class ChebyshevOperator(object):
    """Filters a fixed Laplacian without an eigendecomposition.

    Exposes the same ``apply(w, x)`` as :class:`SpectralBasis`, so networks can run
    on either.
    """

    def __init__(self, laplacian, degree=default_settings.CHEBYSHEV_DEGREE, domain_max=None,
                 safety=default_settings.LAMBDA_MAX_SAFETY):
        self.laplacian = laplacian
        self.degree = degree
        self.lambda_max = estimate_lambda_max(laplacian)
        self.domain_max = domain_max if domain_max is not None else max(self.lambda_max * safety, 1e-12)
        if self.lambda_max > self.domain_max:
            raise DomainError(self.lambda_max, self.domain_max)
        self._approx = {}

    @property
    def n(self):
        return self.laplacian.n

    def approximation(self, w):
        if w not in self._approx:
            self._approx[w] = chebyshev_approx(w, self.degree, self.domain_max)
        return self._approx[w]

    def apply(self, w, x):
        return apply_filter_chebyshev(self.approximation(w), self.laplacian, x, self.lambda_max)
