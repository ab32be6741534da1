# -*- coding: utf-8 -*-
"""Five-step filter-combine layers and networks built from them.

Each layer maps n x C_in to n x C_out with C_out = J_out * C_mid:

1. filtering      x~_{j,k} = w_{j,k}(L) x_k
2. combine        y_{j,k}  = sum_i x~_{j,i} theta^{(j)}_{i,k}
3. cross-filter   y~_{j,k} = sum_i alpha^{(k)}_{j,i} y_{i,k}
4. activation     z_{j,k}  = sigma(y~_{j,k})
5. reshape        output column j * C_mid + k (0-based) holds z_{j,k}
"""
import logging

import numpy as np

from manifold_filter_combine.errors import ArgumentError, DimensionError
from manifold_filter_combine.pointcloud import SignalMatrix

logger = logging.getLogger("mfcn.layers")


def _relu(x):
    return np.maximum(x, 0.0)


def _identity(x):
    return x


ACTIVATIONS = {
    'identity': _identity,
    'relu': _relu,
    'abs': np.abs,
    'tanh': np.tanh,
}

PRESET_TAGS = ('mcn', 'cheb', 'scattering', 'custom')


class LayerSpec(object):

    def __init__(self, filters, theta, alpha, activation='relu'):
        filters = tuple(tuple(row) for row in filters)
        if not filters or not filters[0]:
            raise DimensionError("filter grid must be non-empty", step="filtering")
        J, C_in = len(filters), len(filters[0])
        if any(len(row) != C_in for row in filters):
            raise DimensionError("filter grid rows differ in length", step="filtering")
        theta = np.array(theta, dtype=np.float64)
        if theta.ndim != 3 or theta.shape[:2] != (J, C_in):
            raise DimensionError("theta must have shape (J=%d, C_in=%d, C_mid), got %s" % (J, C_in, theta.shape),
                                 step="combine")
        C_mid = theta.shape[2]
        alpha = np.array(alpha, dtype=np.float64)
        if alpha.ndim != 3 or alpha.shape[0] != C_mid or alpha.shape[2] != J:
            raise DimensionError("alpha must have shape (C_mid=%d, J_out, J=%d), got %s" % (C_mid, J, alpha.shape),
                                 step="cross-filter")
        if activation not in ACTIVATIONS:
            raise ArgumentError("unknown activation %r, expected one of %s"
                                % (activation, ", ".join(sorted(ACTIVATIONS))))
        theta.setflags(write=False)
        alpha.setflags(write=False)
        self.filters = filters
        self.theta = theta
        self.alpha = alpha
        self.activation = activation

    @property
    def J(self):
        return len(self.filters)

    @property
    def C_in(self):
        return len(self.filters[0])

    @property
    def C_mid(self):
        return self.theta.shape[2]

    @property
    def J_out(self):
        return self.alpha.shape[1]

    @property
    def C_out(self):
        return self.J_out * self.C_mid

    def distinct_filters(self):
        seen = []
        for row in self.filters:
            for w in row:
                if w not in seen:
                    seen.append(w)
        return seen

    def with_weights(self, theta, alpha):
        return LayerSpec(self.filters, theta, alpha, self.activation)

    def __repr__(self):
        return "LayerSpec(J=%d, C_in=%d, C_mid=%d, J_out=%d, activation=%s)" % (
            self.J, self.C_in, self.C_mid, self.J_out, self.activation)


def output_column(j, k, C_mid):
    """Reshape index of z_{j,k} (0-based)."""
    return j * C_mid + k


def output_index(column, C_mid):
    return divmod(column, C_mid)


class NetworkSpec(object):

    def __init__(self, layers, preset_tag='custom', output_permutation=None, channel_names=None):
        layers = tuple(layers)
        for i in range(1, len(layers)):
            if layers[i - 1].C_out != layers[i].C_in:
                raise DimensionError("layer %d outputs %d channels but layer %d expects %d"
                                     % (i - 1, layers[i - 1].C_out, i, layers[i].C_in), step="chain")
        if preset_tag not in PRESET_TAGS:
            raise ArgumentError("unknown preset tag %r" % (preset_tag,))
        C_out = layers[-1].C_out if layers else None
        if output_permutation is not None:
            output_permutation = tuple(int(p) for p in output_permutation)
            if C_out is None or sorted(output_permutation) != list(range(C_out)):
                raise DimensionError("output permutation is not a permutation of %s channels" % C_out,
                                     step="reshape")
        if channel_names is not None:
            channel_names = tuple(channel_names)
            if C_out is None or len(channel_names) != C_out:
                raise DimensionError("%d channel names for %s output channels" % (len(channel_names), C_out),
                                     step="reshape")
        self.layers = layers
        self.preset_tag = preset_tag
        self.output_permutation = output_permutation
        self.channel_names = channel_names

    @property
    def C_in(self):
        return self.layers[0].C_in if self.layers else None

    @property
    def C_out(self):
        return self.layers[-1].C_out if self.layers else None

    @property
    def is_linear(self):
        return all(layer.activation == 'identity' for layer in self.layers)

    def truncated(self, depth):
        """The first ``depth`` layers as a network of their own."""
        return NetworkSpec(self.layers[:depth], self.preset_tag)

    def __len__(self):
        return len(self.layers)


def _values(X):
    if isinstance(X, SignalMatrix):
        return X.values
    X = np.asarray(X, dtype=np.float64)
    return X[:, None] if X.ndim == 1 else X


def _filter_step(layer, operator, X):
    n = X.shape[0]
    out = np.empty((layer.J, n, layer.C_in))
    for j, row in enumerate(layer.filters):
        # channels sharing a filter are filtered together
        groups = {}
        for k, w in enumerate(row):
            groups.setdefault(w, []).append(k)
        for w, ks in groups.items():
            out[j][:, ks] = operator.apply(w, X[:, ks])
    return out


def layer_forward(layer, operator, X):
    """One layer on an n x C_in signal.

    ``operator`` filters signals: a SpectralBasis (exact, truncated at kappa) or a
    ChebyshevOperator.
    """
    values = _values(X)
    if values.shape[1] != layer.C_in:
        raise DimensionError("input has %d channels, layer expects %d" % (values.shape[1], layer.C_in),
                             step="filtering")
    if values.shape[0] != operator.n:
        raise DimensionError("input has %d rows, operator has %d vertices" % (values.shape[0], operator.n),
                             step="filtering")
    filtered = _filter_step(layer, operator, values)
    combined = np.einsum('jni,jik->jnk', filtered, layer.theta)
    crossed = np.einsum('kji,ink->jnk', layer.alpha, combined)
    activated = ACTIVATIONS[layer.activation](crossed)
    n = values.shape[0]
    out = activated.transpose(1, 0, 2).reshape(n, layer.C_out)
    if isinstance(X, SignalMatrix):
        names = ["%d:%s" % (j + 1, X.channel_names[k] if layer.C_mid == layer.C_in else "c%d" % (k + 1))
                 for j in range(layer.J_out) for k in range(layer.C_mid)]
        return SignalMatrix(out, names, X.normalized)
    return out


def network_forward(net, operator, X):
    """Sequential composition of the layers of ``net``."""
    current = X
    for index, layer in enumerate(net.layers):
        try:
            current = layer_forward(layer, operator, current)
        except DimensionError as e:
            error = DimensionError("layer %d: %s" % (index, e))
            error.step = e.step
            raise error
    if not net.layers:
        return current
    if net.output_permutation is not None:
        values = _values(current)[:, list(net.output_permutation)]
        if isinstance(current, SignalMatrix):
            names = net.channel_names or [current.channel_names[p] for p in net.output_permutation]
            return SignalMatrix(values, names, current.normalized)
        return values
    if net.channel_names is not None and isinstance(current, SignalMatrix):
        return SignalMatrix(current.values, net.channel_names, current.normalized)
    return current
