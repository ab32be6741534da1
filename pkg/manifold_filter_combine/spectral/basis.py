# -*- coding: utf-8 -*-
import logging
from collections import namedtuple

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import eigsh, ArpackNoConvergence

from manifold_filter_combine.errors import ArgumentError, DimensionError, SolverError
from manifold_filter_combine.pointcloud import SignalMatrix
from manifold_filter_combine.settings import default_settings
from manifold_filter_combine.utils import derive_rng

logger = logging.getLogger("mfcn.spectral")


class SpectralBasis(namedtuple("SpectralBasis", ["eigenvalues", "eigenvectors", "kappa", "source", "residual_max"])):
    """The kappa smallest eigenpairs of a graph Laplacian, eigenvalues ascending."""

    __slots__ = ()

    @property
    def n(self):
        return self.eigenvectors.shape[0]

    def coefficients(self, x):
        return fourier_coeffs(x, self)

    def apply(self, w, x):
        return apply_filter_exact(w, self, x)


def _sign_fix(vectors, tol=1e-12):
    """Make the first entry with |v_i| > tol of each column positive."""
    for c in range(vectors.shape[1]):
        column = vectors[:, c]
        nonzero = np.flatnonzero(np.abs(column) > tol * max(np.abs(column).max(), 1e-300))
        if nonzero.size and column[nonzero[0]] < 0:
            vectors[:, c] = -column
    return vectors


def _residuals(matrix, values, vectors):
    return np.linalg.norm(matrix.dot(vectors) - vectors * values[None, :], axis=0)


def eigensolve(laplacian, kappa=default_settings.KAPPA, dense_max_n=default_settings.DENSE_SOLVER_MAX_N,
               tol=default_settings.SOLVER_TOL, residual_tol=default_settings.SOLVER_RESIDUAL_TOL,
               max_iter=None, start_seed=None):
    """kappa smallest eigenpairs of ``laplacian``.

    Dense symmetric solver up to ``dense_max_n`` vertices, implicitly restarted
    Lanczos (ARPACK) above it. The Krylov start vector is derived from the
    Laplacian fingerprint unless ``start_seed`` is given, so results are
    deterministic for a given matrix.
    """
    matrix = laplacian.matrix
    n = matrix.shape[0]
    if int(kappa) != kappa or not 1 <= kappa <= n:
        raise ArgumentError("kappa must satisfy 1 <= kappa <= n = %d, got %r" % (n, kappa))
    kappa = int(kappa)
    fingerprint = laplacian.fingerprint()

    if n <= dense_max_n or kappa >= n - 1:
        logger.debug("Dense eigensolve: n=%d kappa=%d", n, kappa)
        values, vectors = scipy.linalg.eigh(matrix.toarray(), subset_by_index=[0, kappa - 1])
    else:
        if max_iter is None:
            max_iter = 10 * kappa + 200
        seed = start_seed if start_seed is not None else int(fingerprint[:15], 16)
        v0 = derive_rng(seed, 'eigensolve').standard_normal(n)
        logger.debug("Lanczos eigensolve: n=%d kappa=%d maxiter=%d", n, kappa, max_iter)
        try:
            values, vectors = eigsh(matrix, k=kappa, which='SA', tol=tol, maxiter=max_iter, v0=v0)
        except ArpackNoConvergence as e:
            residuals = _residuals(matrix, e.eigenvalues, e.eigenvectors) if len(e.eigenvalues) else None
            raise SolverError("Lanczos did not converge after %d iterations: %d of %d eigenpairs found"
                              % (max_iter, len(e.eigenvalues), kappa), residuals=residuals)
        order = np.argsort(values, kind='stable')
        values, vectors = values[order], vectors[:, order]

    vectors = _sign_fix(np.array(vectors, dtype=np.float64, order='C'))
    values = np.asarray(values, dtype=np.float64)
    residuals = _residuals(matrix, values, vectors)
    limit = residual_tol * max(1.0, abs(values[-1]))
    if residuals.max() > limit:
        raise SolverError("eigenpair residual %.3g exceeds %.3g" % (residuals.max(), limit), residuals=residuals)
    values.setflags(write=False)
    vectors.setflags(write=False)
    logger.debug("Eigensolve residual max %.3g, lambda_kappa %.6g", residuals.max(), values[-1])
    return SpectralBasis(values, vectors, kappa, fingerprint, float(residuals.max()))


def _as_matrix(x, n, step):
    if isinstance(x, SignalMatrix):
        x = x.values
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != n or x.ndim not in (1, 2):
        raise DimensionError("expected %d rows, got shape %s" % (n, x.shape), step=step)
    return x


def fourier_coeffs(x, basis):
    """<x, phi_i> for i = 1..kappa (column-wise for matrices)."""
    x = _as_matrix(x, basis.n, "fourier_coeffs")
    return basis.eigenvectors.T.dot(x)


def apply_filter_exact(w, basis, x):
    """sum_{i <= kappa} w(lambda_i) <x, phi_i> phi_i.

    Components of x outside the span of the basis are annihilated.
    """
    x = _as_matrix(x, basis.n, "filter")
    response = w(basis.eigenvalues)
    coeffs = basis.eigenvectors.T.dot(x)
    if coeffs.ndim == 1:
        return basis.eigenvectors.dot(response * coeffs)
    return basis.eigenvectors.dot(response[:, None] * coeffs)


def filter_bank_apply(bank, basis, X):
    """Apply every filter in ``bank`` to every channel of X.

    Returns an array of shape (J, n, C); entry [j, :, k] is w_j(L) x_k.
    """
    X = _as_matrix(X, basis.n, "filter_bank")
    if X.ndim == 1:
        X = X[:, None]
    coeffs = basis.eigenvectors.T.dot(X)
    out = np.empty((len(bank), basis.n, X.shape[1]))
    for j, w in enumerate(bank):
        out[j] = basis.eigenvectors.dot(w(basis.eigenvalues)[:, None] * coeffs)
    return out
