# -*- coding: utf-8 -*-
from manifold_filter_combine.mfcn.layers import (ACTIVATIONS, LayerSpec, NetworkSpec, layer_forward,
                                                 network_forward, output_column, output_index)
from manifold_filter_combine.mfcn.norms import WeightNorms, weight_norms, normalize_to_A1
from manifold_filter_combine.mfcn.presets import (preset_mcn, preset_cheb, preset_scattering, linear_heat_network,
                                                  scattering_paths, scattering_transform, network_from_preset)

__all__ = ['ACTIVATIONS', 'LayerSpec', 'NetworkSpec', 'layer_forward', 'network_forward', 'output_column',
           'output_index', 'WeightNorms', 'weight_norms', 'normalize_to_A1', 'preset_mcn', 'preset_cheb',
           'preset_scattering', 'linear_heat_network', 'scattering_paths', 'scattering_transform',
           'network_from_preset']
