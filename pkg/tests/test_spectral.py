# -*- coding: utf-8 -*-
import numpy as np
import pytest
from scipy.sparse.linalg import ArpackNoConvergence
from scipy.special import i0e, i1e

from manifold_filter_combine.errors import (ApproximationError, ArgumentError, DimensionError, DomainError,
                                            ParseError, SolverError)
from manifold_filter_combine.graph import SparseGraph, laplacian_from_graph
from manifold_filter_combine.spectral import (ChebyshevOperator, SpectralFilter, apply_filter_chebyshev,
                                              apply_filter_exact, chebyshev_approx, eigensolve, estimate_lambda_max,
                                              filter_bank_apply, filter_from_spec, filter_from_string, filter_to_spec,
                                              fourier_coeffs, wavelet_bank)
from tests.helpers import complete_graph, cycle_plus_matching


def test_filter_responses():
    lam = np.array([0.0, 0.5, 2.0])
    assert np.allclose(SpectralFilter.heat()(lam), np.exp(-lam))
    assert np.allclose(SpectralFilter.heat(2.0)(lam), np.exp(-2 * lam))
    assert np.allclose(SpectralFilter.wavelet(2)(lam), np.exp(-2 * lam) - np.exp(-4 * lam))
    assert np.allclose(SpectralFilter.constant(3.0)(lam), 3.0)
    assert np.allclose(SpectralFilter.poly_in_heat([0.0, 1.0, -1.0])(lam), np.exp(-lam) - np.exp(-2 * lam))


def test_filter_bounds_hold_on_a_grid():
    lam = np.linspace(0.0, 20.0, 20001)
    step = lam[1] - lam[0]
    for w in [SpectralFilter.heat(0.5), SpectralFilter.wavelet(1), SpectralFilter.wavelet(3),
              SpectralFilter.poly_in_heat([0.5, -1.0, 2.0])]:
        values = w(lam)
        assert np.abs(values).max() <= w.sup_bound + 1e-12
        assert np.abs(np.diff(values)).max() / step <= w.lip_bound + 1e-6


def test_wavelet_bank_telescopes():
    lam = np.linspace(0.0, 10.0, 101)
    total = sum(w(lam) for w in wavelet_bank(4))
    assert np.allclose(total, np.exp(-lam) - np.exp(-16 * lam), atol=1e-10)


def test_filter_parsing():
    assert filter_from_string('heat') == SpectralFilter.heat()
    assert filter_from_string('heat:0.5') == SpectralFilter.heat(0.5)
    assert filter_from_string('wavelet:3') == SpectralFilter.wavelet(3)
    assert filter_from_string('poly_in_heat:1,0,2') == SpectralFilter.poly_in_heat([1, 0, 2])
    assert filter_from_spec({'kind': 'heat', 'params': {'t': 2.0}}) == SpectralFilter.heat(2.0)
    w = SpectralFilter.wavelet(2)
    assert filter_from_spec(filter_to_spec(w)) == w
    with pytest.raises(ParseError):
        filter_from_string('gauss:1')
    with pytest.raises(ParseError):
        filter_from_string('wavelet:x')
    with pytest.raises(ArgumentError):
        filter_to_spec(SpectralFilter.custom(np.cos, 1.0, 1.0))


def test_eigensolve_complete_graph():
    basis = eigensolve(laplacian_from_graph(complete_graph(3), 1.0), 3)
    assert np.allclose(basis.eigenvalues, [0.0, 3.0, 3.0])
    assert np.allclose(basis.eigenvectors.T.dot(basis.eigenvectors), np.eye(3), atol=1e-12)


def test_eigensolve_two_vertex_path():
    basis = eigensolve(laplacian_from_graph(SparseGraph.from_edges(2, [0], [1]), 1.0), 2)
    assert np.allclose(basis.eigenvalues, [0.0, 2.0])
    s = 1.0 / np.sqrt(2.0)
    assert np.allclose(basis.eigenvectors[:, 0], [s, s])
    assert np.allclose(basis.eigenvectors[:, 1], [s, -s])


def test_eigensolve_rejects_bad_kappa():
    laplacian = laplacian_from_graph(complete_graph(3), 1.0)
    with pytest.raises(ArgumentError):
        eigensolve(laplacian, 4)
    with pytest.raises(ArgumentError):
        eigensolve(laplacian, 0)


def test_eigensolve_sign_convention(sphere_laplacian):
    basis = eigensolve(sphere_laplacian, 16)
    for c in range(basis.kappa):
        column = basis.eigenvectors[:, c]
        first = column[np.flatnonzero(np.abs(column) > 1e-12 * np.abs(column).max())[0]]
        assert first > 0


def test_sparse_solver_agrees_with_dense(sphere_laplacian):
    dense = eigensolve(sphere_laplacian, 10)
    lanczos = eigensolve(sphere_laplacian, 10, dense_max_n=10)
    assert np.allclose(dense.eigenvalues, lanczos.eigenvalues, atol=1e-7 * dense.eigenvalues[-1])
    assert dense.eigenvalues[0] == pytest.approx(0.0, abs=1e-8 * dense.eigenvalues[-1])
    assert np.all(np.diff(lanczos.eigenvalues) >= 0)


def test_eigensolve_is_deterministic(sphere_laplacian):
    a = eigensolve(sphere_laplacian, 8, dense_max_n=10)
    b = eigensolve(sphere_laplacian, 8, dense_max_n=10)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_eigensolve_reports_non_convergence(sphere_laplacian, monkeypatch):
    def stalled(matrix, k, **kwargs):
        raise ArpackNoConvergence("stalled", np.array([0.0]), np.ones((matrix.shape[0], 1)))

    monkeypatch.setattr('manifold_filter_combine.spectral.basis.eigsh', stalled)
    with pytest.raises(SolverError) as e:
        eigensolve(sphere_laplacian, 20, dense_max_n=10, max_iter=5)
    assert 'did not converge' in str(e.value)
    assert e.value.residuals is not None and len(e.value.residuals) == 1


def test_fourier_coefficients(sphere_basis):
    coeffs = fourier_coeffs(sphere_basis.eigenvectors[:, 0], sphere_basis)
    expected = np.zeros(sphere_basis.kappa)
    expected[0] = 1.0
    assert np.allclose(coeffs, expected, atol=1e-10)
    assert np.all(fourier_coeffs(np.zeros(sphere_basis.n), sphere_basis) == 0.0)


def test_exact_filter_on_eigenvectors(sphere_basis):
    w = SpectralFilter.heat()
    i = 5
    phi = sphere_basis.eigenvectors[:, i]
    assert np.allclose(apply_filter_exact(w, sphere_basis, phi), np.exp(-sphere_basis.eigenvalues[i]) * phi,
                       atol=1e-12)


def test_all_pass_reproduces_signal(sphere_basis):
    x = np.random.default_rng(0).standard_normal((sphere_basis.n, 2))
    assert np.allclose(sphere_basis.apply(SpectralFilter.constant(1.0), x), x, atol=1e-8)


def test_heat_keeps_constants(sphere_basis):
    x = np.ones(sphere_basis.n)
    assert np.allclose(sphere_basis.apply(SpectralFilter.heat(), x), x, atol=1e-8)


def test_truncation_annihilates_high_frequencies(sphere_laplacian):
    basis = eigensolve(sphere_laplacian, 10)
    full = eigensolve(sphere_laplacian, sphere_laplacian.n)
    x = full.eigenvectors[:, 20]
    assert np.allclose(basis.apply(SpectralFilter.constant(1.0), x), 0.0, atol=1e-10)


def test_exact_filter_dimension_error(sphere_basis):
    with pytest.raises(DimensionError):
        apply_filter_exact(SpectralFilter.heat(), sphere_basis, np.ones(sphere_basis.n + 1))


def test_filter_bank_on_eigenvector(sphere_basis):
    bank = wavelet_bank(3)
    i = 4
    phi = sphere_basis.eigenvectors[:, i]
    out = filter_bank_apply(bank, sphere_basis, phi)
    assert out.shape == (3, sphere_basis.n, 1)
    lam = sphere_basis.eigenvalues[i]
    for j, w in enumerate(bank):
        assert np.allclose(out[j, :, 0], w(lam) * phi, atol=1e-12)


def test_filter_bank_all_pass(sphere_basis):
    X = np.random.default_rng(1).standard_normal((sphere_basis.n, 3))
    out = filter_bank_apply([SpectralFilter.constant(1.0)], sphere_basis, X)
    assert np.allclose(out[0], X, atol=1e-8)


def test_filters_are_nonexpansive(sphere_basis):
    rng = np.random.default_rng(3)
    bank = [SpectralFilter.heat(), SpectralFilter.heat(0.2), SpectralFilter.poly_in_heat([0.5, 0.5])] + wavelet_bank(4)
    for _ in range(20):
        x = rng.standard_normal(sphere_basis.n)
        for w in bank:
            assert np.linalg.norm(sphere_basis.apply(w, x)) <= w.sup_bound * np.linalg.norm(x) + 1e-12


def test_chebyshev_heat_coefficients():
    approx = chebyshev_approx(SpectralFilter.heat(), degree=1, domain_max=12.0)
    # e^{-6(t+1)} on [-1, 1] has Chebyshev coefficients 2 (-1)^k I_k(6) e^{-6}, halved for k = 0
    assert approx.coefficients[0] == pytest.approx(i0e(6.0), rel=1e-12)
    assert approx.coefficients[1] == pytest.approx(-2.0 * i1e(6.0), rel=1e-12)
    assert approx.error_bound > 0


def test_chebyshev_approximation_tolerance():
    approx = chebyshev_approx(SpectralFilter.heat(), degree=30, domain_max=12.0, tol=1e-8)
    lam = np.linspace(0.0, 12.0, 501)
    assert np.abs(approx(lam) - np.exp(-lam)).max() <= approx.error_bound + 1e-15
    with pytest.raises(ApproximationError):
        chebyshev_approx(SpectralFilter.heat(), degree=2, domain_max=12.0, tol=1e-8)


def test_chebyshev_constant_filter_is_exact(sphere_laplacian):
    x = np.random.default_rng(5).standard_normal(sphere_laplacian.n)
    approx = chebyshev_approx(SpectralFilter.constant(2.5), degree=10, domain_max=estimate_lambda_max(
        sphere_laplacian) * 1.05)
    assert np.allclose(apply_filter_chebyshev(approx, sphere_laplacian, x), 2.5 * x, atol=1e-12)


def test_chebyshev_matches_exact_on_random_graphs():
    rng = np.random.default_rng(2024)
    w = SpectralFilter.heat()
    for _ in range(50):
        n = int(rng.integers(10, 201))
        laplacian = laplacian_from_graph(cycle_plus_matching(n, rng), 1.0)
        basis = eigensolve(laplacian, n)
        operator = ChebyshevOperator(laplacian, degree=40)
        x = rng.standard_normal(n)
        assert np.linalg.norm(operator.apply(w, x) - basis.apply(w, x)) <= 1e-6 * np.linalg.norm(x)


def test_chebyshev_domain_error(sphere_laplacian):
    approx = chebyshev_approx(SpectralFilter.heat(), degree=10, domain_max=1e-6)
    with pytest.raises(DomainError):
        apply_filter_chebyshev(approx, sphere_laplacian, np.ones(sphere_laplacian.n))


def test_power_iteration_is_close_to_lambda_max(sphere_laplacian, sphere_basis):
    estimate = estimate_lambda_max(sphere_laplacian)
    assert estimate <= sphere_basis.eigenvalues[-1] * (1 + 1e-10)
    assert estimate >= 0.9 * sphere_basis.eigenvalues[-1]


def test_filters_are_nonexpansive_on_random_graphs():
    rng = np.random.default_rng(99)
    filters = [SpectralFilter.heat(), SpectralFilter.heat(3.0), SpectralFilter.poly_in_heat([0.25, 0.75])]
    filters += wavelet_bank(3)
    for trial in range(1000):
        n = int(rng.integers(3, 31))
        basis = eigensolve(laplacian_from_graph(cycle_plus_matching(n, rng), rng.uniform(0.1, 10.0)), n)
        x, y = rng.standard_normal((2, n))
        w = filters[trial % len(filters)]
        assert np.linalg.norm(basis.apply(w, x) - basis.apply(w, y)) <= np.linalg.norm(x - y) + 1e-10


def test_filter_output_does_not_depend_on_start_vector():
    rng = np.random.default_rng(17)
    laplacian = laplacian_from_graph(cycle_plus_matching(400, rng), 1.0)
    x = rng.standard_normal((400, 2))
    w = SpectralFilter.heat()
    first = eigensolve(laplacian, 20, dense_max_n=10, start_seed=1)
    second = eigensolve(laplacian, 20, dense_max_n=10, start_seed=2)
    dense = eigensolve(laplacian, 20)
    assert np.allclose(first.eigenvalues, second.eigenvalues, atol=1e-8)
    scale = np.linalg.norm(x)
    assert np.abs(first.apply(w, x) - second.apply(w, x)).max() <= 1e-6 * scale
    assert np.abs(first.apply(w, x) - dense.apply(w, x)).max() <= 1e-6 * scale


def test_filters_are_linear(sphere_basis):
    rng = np.random.default_rng(11)
    X, Y = rng.standard_normal((2, sphere_basis.n, 3))
    a, b = 2.5, -0.75
    for w in [SpectralFilter.heat(), SpectralFilter.wavelet(2), SpectralFilter.poly_in_heat([1.0, -0.5, 2.0])]:
        combined = sphere_basis.apply(w, a * X + b * Y)
        assert np.allclose(combined, a * sphere_basis.apply(w, X) + b * sphere_basis.apply(w, Y), atol=1e-10)


def test_fourier_coefficients_preserve_norm_on_span(sphere_laplacian):
    basis = eigensolve(sphere_laplacian, 16)
    rng = np.random.default_rng(12)
    for _ in range(10):
        x = rng.standard_normal(basis.n)
        coeffs = fourier_coeffs(x, basis)
        projected = basis.eigenvectors.dot(coeffs)
        assert np.linalg.norm(coeffs) == pytest.approx(np.linalg.norm(projected), rel=1e-10)
        assert np.linalg.norm(coeffs) <= np.linalg.norm(x)


def test_chebyshev_error_stays_within_certified_bound():
    rng = np.random.default_rng(31)
    filters = [SpectralFilter.heat(), SpectralFilter.heat(0.5), SpectralFilter.wavelet(1), SpectralFilter.wavelet(2)]
    for trial in range(40):
        n = int(rng.integers(10, 121))
        laplacian = laplacian_from_graph(cycle_plus_matching(n, rng), rng.uniform(0.2, 3.0))
        basis = eigensolve(laplacian, n)
        lambda_max = estimate_lambda_max(laplacian)
        w = filters[trial % len(filters)]
        approx = chebyshev_approx(w, int(rng.integers(3, 13)), domain_max=1.05 * basis.eigenvalues[-1])
        X = rng.standard_normal((n, 2))
        error = apply_filter_chebyshev(approx, laplacian, X, lambda_max) - basis.apply(w, X)
        assert np.abs(error).max() <= approx.error_bound * np.linalg.norm(X, axis=0).max() + 1e-12
