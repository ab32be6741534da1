# -*- coding: utf-8 -*-
from msgpack import packb, unpackb
from msgpack.exceptions import UnpackException

import numpy as np

from manifold_filter_combine.errors import ParseError
from manifold_filter_combine.spectral.basis import SpectralBasis

BASIS_TAG = 'sb1'


def _prepare_basis_message(basis):
    values = np.ascontiguousarray(basis.eigenvalues, dtype='<f8')
    vectors = np.ascontiguousarray(basis.eigenvectors, dtype='<f8')
    return [BASIS_TAG, basis.kappa, basis.n, basis.source, basis.residual_max, values.tobytes(), vectors.tobytes()]


class Encoder(object):

    def encode_basis(self, basis):
        """Eigenpairs as raw little-endian float64 buffers."""
        return packb(_prepare_basis_message(basis), use_bin_type=True)


class Decoder(object):

    def _basis_from_object(self, obj):
        tag, kappa, n, source, residual_max, values, vectors = obj
        if tag != BASIS_TAG:
            raise ParseError("not a spectral basis cache (tag %r)" % (tag,))
        values = np.frombuffer(values, dtype='<f8').astype(np.float64)
        vectors = np.frombuffer(vectors, dtype='<f8').astype(np.float64)
        if values.size != kappa or vectors.size != n * kappa:
            raise ParseError("basis cache holds %d eigenvalues and %d vector entries, expected %d and %d"
                             % (values.size, vectors.size, kappa, n * kappa))
        vectors = vectors.reshape(n, kappa)
        values.setflags(write=False)
        vectors.setflags(write=False)
        return SpectralBasis(values, vectors, int(kappa), source, float(residual_max))

    def decode_basis(self, buffer):
        try:
            obj = unpackb(buffer, raw=False)
            return self._basis_from_object(obj)
        except (UnpackException, ValueError, TypeError) as e:
            raise ParseError("corrupt basis cache: %s" % e)
