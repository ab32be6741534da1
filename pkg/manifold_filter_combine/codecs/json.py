# -*- coding: utf-8 -*-
import json

import numpy as np

from manifold_filter_combine.errors import DimensionError, MFCNError, ParseError
from manifold_filter_combine.mfcn.layers import LayerSpec, NetworkSpec
from manifold_filter_combine.mfcn.presets import network_from_preset
from manifold_filter_combine.spectral.filters import filter_from_spec, filter_to_spec
from manifold_filter_combine.sphere_oracle import HarmonicExpansion

SCHEMA_VERSION = 1


def _prepare_layer_message(layer):
    return {'J': layer.J,
            'C_in': layer.C_in,
            'C_mid': layer.C_mid,
            'J_out': layer.J_out,
            'filters': [filter_to_spec(w) for row in layer.filters for w in row],
            'theta': layer.theta.tolist(),
            'alpha': layer.alpha.tolist(),
            'activation': layer.activation}


def network_to_dict(net):
    data = {'layers': [_prepare_layer_message(layer) for layer in net.layers],
            'preset': net.preset_tag}
    if net.output_permutation is not None:
        data['output_permutation'] = list(net.output_permutation)
    if net.channel_names is not None:
        data['channel_names'] = list(net.channel_names)
    return data


def _layer_from_object(obj, index):
    try:
        J, C_in = int(obj['J']), int(obj['C_in'])
        specs = obj['filters']
        theta, alpha = obj['theta'], obj['alpha']
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("layer %d: missing or malformed field %s" % (index, e))
    if len(specs) != J * C_in:
        raise DimensionError("layer %d: %d filters for J * C_in = %d" % (index, len(specs), J * C_in),
                             step="filtering")
    filters = [[filter_from_spec(specs[j * C_in + k]) for k in range(C_in)] for j in range(J)]
    layer = LayerSpec(filters, theta, alpha, obj.get('activation', 'relu'))
    for key in ('C_mid', 'J_out'):
        if key in obj and int(obj[key]) != getattr(layer, key):
            raise DimensionError("layer %d declares %s=%s but its weights give %d"
                                 % (index, key, obj[key], getattr(layer, key)), step="combine")
    return layer


def network_from_dict(data):
    if not isinstance(data, dict) or not isinstance(data.get('layers'), list):
        raise ParseError("network must be an object with a 'layers' list")
    layers = [_layer_from_object(obj, index) for index, obj in enumerate(data['layers'])]
    return NetworkSpec(layers, data.get('preset', 'custom'), data.get('output_permutation'),
                       data.get('channel_names'))


def network_from_config(data):
    """Explicit layers, or the ``{"preset": name, "params": {...}}`` shorthand."""
    if isinstance(data, dict) and 'layers' not in data and 'preset' in data:
        return network_from_preset(data['preset'], data.get('params'))
    return network_from_dict(data)


class MFCNJSONEncoder(json.JSONEncoder):

    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, HarmonicExpansion):
            return o.to_list()
        if isinstance(o, NetworkSpec):
            return network_to_dict(o)
        return super(MFCNJSONEncoder, self).default(o)


class Encoder(MFCNJSONEncoder):
    def __init__(self, *a, **kw):
        self.timings = bool(kw.pop('timings', False))
        kw.setdefault('indent', 2)
        kw.setdefault('sort_keys', True)
        super(Encoder, self).__init__(*a, **kw)

    def encode_report(self, reports, version=None):
        """
        Encodes convergence or Bernstein reports as one document

        :param list reports report objects exposing to_dict(timings)
        :return str encoded document
        """
        return self.encode({'schema_version': SCHEMA_VERSION,
                            'version': version,
                            'reports': [r.to_dict(self.timings) for r in reports]})

    def encode_basis(self, basis):
        return self.encode({'eigenvalues': basis.eigenvalues,
                            'kappa': basis.kappa,
                            'residual_max': basis.residual_max,
                            'source': basis.source})

    def encode_graph_meta(self, laplacian, connectivity=None, graph=None):
        meta = laplacian.metadata()
        if connectivity is not None:
            meta['connected'] = connectivity.connected
            meta['component_count'] = connectivity.component_count
        if graph is not None:
            meta['edges'] = graph.edge_count
        return self.encode(meta)

    def encode_network(self, net):
        return self.encode(network_to_dict(net))

    def encode_expansion(self, expansion):
        return self.encode(expansion.to_list())

    def encode_forward_meta(self, laplacian, connectivity, norms, config):
        """
        Encodes the sidecar written next to a forward pass output

        :param object laplacian the GraphLaplacian the network ran on
        :param object connectivity Connectivity of its graph
        :param object norms WeightNorms of the network
        :param dict config the fully resolved run configuration
        :return str encoded sidecar
        """
        graph = laplacian.metadata()
        graph['connected'] = connectivity.connected
        graph['component_count'] = connectivity.component_count
        return self.encode({'schema_version': SCHEMA_VERSION,
                            'graph': graph,
                            'weight_norms': norms.to_dict(),
                            'config': config})


class Decoder(json.JSONDecoder):

    def decode(self, message, _w=None):
        """
        Decodes a JSON document

        :param str message encoded document
        :return the decoded object; syntax errors raise ParseError with the line
        """
        try:
            return super(Decoder, self).decode(message)
        except ValueError as e:
            raise ParseError("malformed JSON: %s" % getattr(e, 'msg', e), line=getattr(e, 'lineno', None))

    def decode_network(self, message):
        return network_from_config(self.decode(message))

    def decode_expansion(self, message):
        obj = self.decode(message)
        if not isinstance(obj, list):
            raise ParseError("expansion must be a list of {l, m, coeff} objects")
        try:
            return HarmonicExpansion.from_list(obj)
        except MFCNError as e:
            raise ParseError(str(e))

    def decode_filter(self, message):
        return filter_from_spec(self.decode(message))
