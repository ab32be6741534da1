# -*- coding: utf-8 -*-
from manifold_filter_combine.spectral.filters import (SpectralFilter, wavelet_bank, filter_from_spec,
                                                      filter_from_string, filter_to_spec)
from manifold_filter_combine.spectral.basis import (SpectralBasis, eigensolve, fourier_coeffs,
                                                    apply_filter_exact, filter_bank_apply)
from manifold_filter_combine.spectral.chebyshev import (ChebyshevApprox, ChebyshevOperator, chebyshev_approx,
                                                        apply_filter_chebyshev, estimate_lambda_max)

__all__ = ['SpectralFilter', 'wavelet_bank', 'filter_from_spec', 'filter_from_string', 'filter_to_spec',
           'SpectralBasis', 'eigensolve', 'fourier_coeffs', 'apply_filter_exact', 'filter_bank_apply',
           'ChebyshevApprox', 'ChebyshevOperator', 'chebyshev_approx', 'apply_filter_chebyshev',
           'estimate_lambda_max']
