# -*- coding: utf-8 -*-
"""Named network families expressed in the five-step layer algebra."""
import itertools

import numpy as np

from manifold_filter_combine.errors import ArgumentError, DimensionError
from manifold_filter_combine.mfcn.layers import LayerSpec, NetworkSpec
from manifold_filter_combine.spectral.filters import SpectralFilter, wavelet_bank


def _identity_alpha(C, J=1):
    return np.tile(np.eye(J)[None, :, :], (C, 1, 1))


def _identity_theta(J, C):
    return np.tile(np.eye(C)[None, :, :], (J, 1, 1))


def preset_mcn(n_layers, channel_widths, theta_list, activation='relu', low_pass=None):
    """GCN-like network: F' = sigma(A F Theta) with A = w(L), w(lambda) = e^{-lambda}.

    One shared low-pass filter, no cross-filter mixing.
    """
    if len(channel_widths) != n_layers + 1 or len(theta_list) != n_layers:
        raise DimensionError("%d layers need %d widths and %d theta matrices, got %d and %d"
                             % (n_layers, n_layers + 1, n_layers, len(channel_widths), len(theta_list)),
                             step="combine")
    w = low_pass or SpectralFilter.heat()
    layers = []
    for index, theta in enumerate(theta_list):
        theta = np.asarray(theta, dtype=np.float64)
        expected = (channel_widths[index], channel_widths[index + 1])
        if theta.shape != expected:
            raise DimensionError("theta %d has shape %s, expected %s" % (index, theta.shape, expected),
                                 step="combine")
        layers.append(LayerSpec([[w] * expected[0]], theta[None, :, :], _identity_alpha(expected[1]), activation))
    return NetworkSpec(layers, 'mcn')


def linear_heat_network(depth, channels=1):
    """``depth`` stacked heat layers with identity weights and activation."""
    eye = np.eye(channels)
    return preset_mcn(depth, [channels] * (depth + 1), [eye] * depth, activation='identity')


def preset_cheb(poly_coeffs_grid, theta=None, alpha=None, activation='relu'):
    """ChebNet-like layer: filters p_{j,k}(e^{-lambda}) for a J x C grid of polynomials."""
    grid = [list(row) for row in poly_coeffs_grid]
    if not grid or not grid[0]:
        raise ArgumentError("polynomial grid must be non-empty")
    filters = []
    for row in grid:
        filters.append([SpectralFilter.poly_in_heat(coeffs) for coeffs in row])
    J, C = len(filters), len(filters[0])
    theta = _identity_theta(J, C) if theta is None else theta
    alpha = _identity_alpha(np.shape(theta)[2], J) if alpha is None else alpha
    return NetworkSpec([LayerSpec(filters, theta, alpha, activation)], 'cheb')


def scattering_paths(J, order):
    """Scattering paths (j1, ..., j_order) in lexicographic order, 1-based."""
    return list(itertools.product(range(1, J + 1), repeat=order))


def preset_scattering(J, order, channels=1):
    """Wavelet scattering of depth ``order`` with modulus activation.

    Combine and cross-filter steps are identities. Layer l filters every incoming
    channel by every wavelet; the final permutation lists coefficients by path
    (j1, ..., j_order) in lexicographic order, then by input channel.
    """
    if int(J) != J or J < 1 or int(order) != order or order < 1:
        raise ArgumentError("scattering needs J >= 1 and order >= 1, got J=%r order=%r" % (J, order))
    bank = wavelet_bank(J)
    layers = []
    width = channels
    for _ in range(order):
        filters = [[w] * width for w in bank]
        layers.append(LayerSpec(filters, _identity_theta(J, width), _identity_alpha(width, J), 'abs'))
        width *= J
    # the engine places the newest scale outermost: column ((j_l J + j_{l-1}) J + ... + j_1) C + k
    permutation, names = [], []
    for path in scattering_paths(J, order):
        for k in range(channels):
            column = 0
            for j in reversed(path):
                column = column * J + (j - 1)
            permutation.append(column * channels + k)
            label = "U[%s]" % ",".join(str(j) for j in path)
            names.append(label if channels == 1 else "%s x%d" % (label, k + 1))
    return NetworkSpec(layers, 'scattering', permutation, names)


def scattering_transform(J, order, operator, X):
    """Direct recursion U[j1..jl] x = |w_jl(L) U[j1..j(l-1)] x|, paths in lexicographic order.

    Returns an n x (J^order * C) matrix laid out like :func:`preset_scattering`.
    """
    X = np.asarray(getattr(X, 'values', X), dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    bank = wavelet_bank(J)
    current = [X]
    for _ in range(order):
        current = [np.abs(operator.apply(w, u)) for u in current for w in bank]
    return np.column_stack(current)


PRESETS = {
    'mcn': lambda p: preset_mcn(p['n_layers'], p['channel_widths'], p['theta_list'], p.get('activation', 'relu')),
    'cheb': lambda p: preset_cheb(p['poly_coeffs_grid'], p.get('theta'), p.get('alpha'),
                                  p.get('activation', 'relu')),
    'scattering': lambda p: preset_scattering(p['J'], p['order'], p.get('channels', 1)),
    'linear_heat': lambda p: linear_heat_network(p['depth'], p.get('channels', 1)),
}


def network_from_preset(name, params):
    if name not in PRESETS:
        raise ArgumentError("unknown preset %r, expected one of %s" % (name, ", ".join(sorted(PRESETS))))
    try:
        return PRESETS[name](params or {})
    except KeyError as e:
        raise ArgumentError("preset %s is missing parameter %s" % (name, e))
