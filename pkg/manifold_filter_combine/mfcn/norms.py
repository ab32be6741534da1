# -*- coding: utf-8 -*-
from collections import namedtuple

import numpy as np

from manifold_filter_combine.errors import NormalizationError
from manifold_filter_combine.mfcn.layers import NetworkSpec


class WeightNorms(namedtuple("WeightNorms", ["A1", "A2"])):
    """Per-layer weight sums.

    A1 = max_{j,k} sum_i |theta^{(j)}_{i,k}|, A2 = max_{j,k} sum_i |alpha^{(k)}_{j,i}|.
    """

    __slots__ = ()

    @property
    def products(self):
        return tuple(a1 * a2 for a1, a2 in zip(self.A1, self.A2))

    def to_dict(self):
        return {'A1': list(self.A1), 'A2': list(self.A2), 'A1A2': list(self.products)}


def layer_norms(layer):
    a1 = float(np.abs(layer.theta).sum(axis=1).max())
    a2 = float(np.abs(layer.alpha).sum(axis=2).max())
    return a1, a2


def weight_norms(net):
    pairs = [layer_norms(layer) for layer in net.layers]
    return WeightNorms(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


def normalize_to_A1(net):
    """Rescale theta and alpha of every layer so that A1 * A2 = 1."""
    layers = []
    for index, layer in enumerate(net.layers):
        a1, a2 = layer_norms(layer)
        if a1 == 0.0 or a2 == 0.0:
            raise NormalizationError("layer %d has all-zero %s weights" % (index, "combine" if a1 == 0.0 else
                                                                          "cross-filter"), layer=index)
        layers.append(layer.with_weights(layer.theta / a1, layer.alpha / a2))
    return NetworkSpec(layers, net.preset_tag, net.output_permutation, net.channel_names)
