# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from manifold_filter_combine.errors import ArgumentError, DimensionError, ParseError, UnsupportedOracleError
from manifold_filter_combine.mfcn import linear_heat_network, preset_mcn, preset_scattering
from manifold_filter_combine.pointcloud import sample_sphere
from manifold_filter_combine.spectral import SpectralFilter
from manifold_filter_combine.sphere_oracle import (ContinuumOracle, HarmonicBasis, HarmonicExpansion,
                                                   continuum_eigenvalue, continuum_filter,
                                                   continuum_network_forward, default_signal, eval_harmonic,
                                                   harmonic_values, l4_norm, lp_norm, project_expansion,
                                                   real_harmonics, sphere_quadrature)

SQ3, SQ5, SQ15 = math.sqrt(3), math.sqrt(5), math.sqrt(15)

# closed forms of the probability-normalized real harmonics up to degree two
CLOSED_FORMS = {
    (0, 0): lambda x, y, z: np.ones_like(x),
    (1, -1): lambda x, y, z: SQ3 * y,
    (1, 0): lambda x, y, z: SQ3 * z,
    (1, 1): lambda x, y, z: SQ3 * x,
    (2, -2): lambda x, y, z: SQ15 * x * y,
    (2, -1): lambda x, y, z: SQ15 * y * z,
    (2, 0): lambda x, y, z: SQ5 / 2 * (3 * z * z - 1),
    (2, 1): lambda x, y, z: SQ15 * x * z,
    (2, 2): lambda x, y, z: SQ15 / 2 * (x * x - y * y),
}


def _series_harmonic(l, m, points):
    """Y_l^m from the explicit Legendre sum, independent of the recurrence."""
    x, y, z = points.T
    am = abs(m)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    derivative = np.zeros_like(z)
    # d^{l+m}/dz^{l+m} (z^2 - 1)^l, expanded term by term
    for k in range(l + 1):
        power = 2 * k
        order = l + am
        if power < order:
            continue
        binomial = math.factorial(l) // (math.factorial(k) * math.factorial(l - k))
        coeff = binomial * (-1) ** (l - k) * math.factorial(power) / math.factorial(power - order)
        derivative += coeff * z ** (power - order)
    legendre = s ** am * derivative / (2 ** l * math.factorial(l))
    norm = math.sqrt((2 * l + 1) * math.factorial(l - am) / math.factorial(l + am))
    phi = np.arctan2(y, x)
    if m > 0:
        return norm * legendre * math.sqrt(2) * np.cos(am * phi)
    if m < 0:
        return norm * legendre * math.sqrt(2) * np.sin(am * phi)
    return norm * legendre


def test_named_values():
    assert eval_harmonic(0, 0, [0.6, 0.0, 0.8]) == 1.0
    assert eval_harmonic(1, 0, [0.0, 0.0, 1.0]) == pytest.approx(SQ3, abs=1e-14)
    assert eval_harmonic(2, 0, [1.0, 0.0, 0.0]) == pytest.approx(-SQ5 / 2, abs=1e-14)


def test_closed_forms_up_to_degree_two():
    points = sample_sphere(200, 4).points
    for (l, m), form in CLOSED_FORMS.items():
        assert np.allclose(harmonic_values(l, m, points), form(*points.T), atol=1e-12), (l, m)


def test_recurrence_matches_series_formula():
    points = sample_sphere(100, 6).points
    for l, m in real_harmonics(5):
        assert np.allclose(harmonic_values(l, m, points), _series_harmonic(l, m, points), atol=1e-12), (l, m)


def test_quadrature_orthonormality():
    points, weights = sphere_quadrature(8)
    assert weights.sum() == pytest.approx(1.0)
    values = HarmonicBasis(4).evaluate(points)
    gram = values.T.dot(weights[:, None] * values)
    assert np.allclose(gram, np.eye(values.shape[1]), atol=1e-12)


def test_monte_carlo_gram_is_close_to_identity():
    basis = HarmonicBasis(3)
    assert len(basis) == 16
    gram = basis.gram(sample_sphere(100000, 12).points)
    assert np.abs(gram - np.eye(16)).max() < 0.02


def test_invalid_degree_and_points():
    with pytest.raises(ArgumentError):
        eval_harmonic(1, 2, [0.0, 0.0, 1.0])
    with pytest.raises(ArgumentError):
        eval_harmonic(-1, 0, [0.0, 0.0, 1.0])
    with pytest.raises(ArgumentError):
        eval_harmonic(1, 0, [0.0, 0.0, 1.1])
    with pytest.raises(DimensionError):
        harmonic_values(1, 0, np.ones((3, 2)) / math.sqrt(2))


def test_continuum_eigenvalues():
    assert continuum_eigenvalue(1, 'eps_limit') == pytest.approx(1 / (4 * math.pi))
    assert continuum_eigenvalue(0, 'eps_limit') == 0.0
    assert continuum_eigenvalue(0, 'knn_limit') == 0.0
    assert continuum_eigenvalue(1, 'knn_limit') == pytest.approx(4 * math.pi)
    with pytest.raises(ArgumentError):
        continuum_eigenvalue(1, 'graph_limit')


def test_oracle_multiplicities():
    oracle = ContinuumOracle.for_graph_mode('epsilon')
    values = oracle.eigenvalues(8)
    assert values[:3] == [oracle.eigenvalue(1)] * 3
    assert values[3:] == [oracle.eigenvalue(2)] * 5
    assert ContinuumOracle('knn_limit').eigenvalues(2, skip_zero=False) == [0.0, 4 * math.pi]


def test_continuum_filter_all_pass_and_heat():
    f = default_signal()
    assert continuum_filter(SpectralFilter.constant(1.0), f).coeffs == f.coeffs
    heat = continuum_filter(SpectralFilter.heat(), f)
    assert heat.coefficient(1, 0) == pytest.approx(math.exp(-1 / (4 * math.pi)), rel=1e-14)
    assert heat.coefficient(2, 0) == pytest.approx(math.exp(-6 / (8 * math.pi)), rel=1e-14)
    assert heat.coefficient(1, 0) == pytest.approx(0.9235, abs=1e-4)
    assert heat.coefficient(2, 0) == pytest.approx(0.7876, abs=1e-4)


def test_continuum_filter_is_linear():
    f = HarmonicExpansion([(1, 1, 2.0), (3, -2, -1.0)])
    g = HarmonicExpansion([(1, 1, 0.5), (2, 0, 4.0)])
    w = SpectralFilter.wavelet(2)
    left = continuum_filter(w, 3.0 * f + g)
    right = 3.0 * continuum_filter(w, f) + continuum_filter(w, g)
    for l, m in real_harmonics(3):
        assert left.coefficient(l, m) == pytest.approx(right.coefficient(l, m), abs=1e-14)


def test_expansion_algebra():
    f = HarmonicExpansion({(1, 0): 1.0, (2, 0): 1.0})
    assert f.norm() == pytest.approx(math.sqrt(2))
    assert f.inner(HarmonicExpansion.harmonic(2, 0, 3.0)) == 3.0
    assert (f - f).is_zero()
    assert HarmonicExpansion().evaluate(sample_sphere(5, 0).points).tolist() == [0.0] * 5
    assert f.max_degree == 2
    assert HarmonicExpansion.from_list(f.to_list()).coeffs == f.coeffs
    with pytest.raises(ParseError):
        HarmonicExpansion.from_list([{'l': 1, 'm': 0}])


def test_projected_default_signal_norm():
    cloud = sample_sphere(4096, 2)
    assert np.linalg.norm(project_expansion(default_signal(), cloud).values) == pytest.approx(math.sqrt(2),
                                                                                              abs=0.05)


def test_l4_norms():
    assert l4_norm(HarmonicExpansion.harmonic(0, 0)) == pytest.approx(1.0, abs=1e-14)
    # E[z^4] = 1/5 for uniform z in [-1, 1]
    assert l4_norm(HarmonicExpansion.harmonic(1, 0)) == pytest.approx((9.0 / 5) ** 0.25, rel=1e-12)
    f = HarmonicExpansion([(1, 0, 1.0), (2, 1, 0.5)])
    points = sample_sphere(200000, 3).points
    assert lp_norm(f, 2) == pytest.approx(f.norm(), rel=1e-12)
    assert l4_norm(f) == pytest.approx(np.mean(f.evaluate(points) ** 4) ** 0.25, rel=0.02)


def test_two_linear_heat_layers():
    out = continuum_network_forward(linear_heat_network(2), [default_signal()])
    assert len(out) == 1
    for l in (1, 2):
        assert out[0].coefficient(l, 0) == pytest.approx(math.exp(-2 * continuum_eigenvalue(l)), rel=1e-14)


def test_knn_limit_network():
    net = preset_mcn(1, [1, 2], [[[1.0, -0.5]]], activation='identity')
    out = continuum_network_forward(net, default_signal(), 'knn_limit')
    decay = math.exp(-4 * math.pi)
    assert out[0].coefficient(1, 0) == pytest.approx(decay, rel=1e-14)
    assert out[1].coefficient(1, 0) == pytest.approx(-0.5 * decay, rel=1e-14)


def test_nonlinear_network_has_no_oracle():
    with pytest.raises(UnsupportedOracleError):
        continuum_network_forward(preset_scattering(2, 1), [default_signal()])
    with pytest.raises(DimensionError):
        continuum_network_forward(linear_heat_network(1, channels=2), [default_signal()])


@pytest.mark.slow
def test_projected_norm_concentrates_at_8192_points():
    n = 8192
    f = default_signal()
    squared = [np.sum(project_expansion(f, sample_sphere(n, seed)).values ** 2) for seed in range(10)]
    exact = f.inner(f)
    assert abs(np.median(squared) - exact) <= 6 * math.sqrt(math.log(n) / n) * l4_norm(f) ** 2


@pytest.mark.slow
def test_harmonic_gram_off_diagonal_bound_at_8192_points():
    n = 8192
    basis = HarmonicBasis(2)
    l4 = np.array([l4_norm(HarmonicExpansion.harmonic(l, m)) for l, m in basis.indices])
    bound = 6 * math.sqrt(math.log(n) / n) * np.outer(l4, l4)
    off_diagonal = ~np.eye(len(basis), dtype=bool)
    within = []
    for seed in range(50):
        gram = basis.gram(sample_sphere(n, 1000 + seed).points)
        within.extend((np.abs(gram) <= bound)[off_diagonal].tolist())
    assert np.mean(within) >= 0.95
