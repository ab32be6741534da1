# -*- coding: utf-8 -*-
import numpy as np

from manifold_filter_combine.errors import ArgumentError, ParseError

KINDS = ('heat', 'wavelet', 'constant', 'poly_in_heat', 'custom')


class SpectralFilter(object):
    """Response w: [0, inf) -> R acting diagonally on Laplacian eigenpairs.

    ``sup_bound`` and ``lip_bound`` are certified bounds on ||w||_inf and on the
    Lipschitz constant of w over [0, inf).
    """

    def __init__(self, kind, params=None, sup_bound=None, lip_bound=None, function=None):
        if kind not in KINDS:
            raise ArgumentError("unknown filter kind %r" % (kind,))
        self.kind = kind
        self.params = dict(params or {})
        self._function = function
        if kind == 'custom':
            if function is None or sup_bound is None or lip_bound is None:
                raise ArgumentError("custom filters need a function and both bounds")
            self.sup_bound, self.lip_bound = float(sup_bound), float(lip_bound)
        else:
            self.sup_bound, self.lip_bound = self._bounds()

    @classmethod
    def heat(cls, t=1.0):
        if not t > 0:
            raise ArgumentError("heat time must be positive, got %r" % (t,))
        return cls('heat', {'t': float(t)})

    @classmethod
    def wavelet(cls, j):
        if int(j) != j or j < 1:
            raise ArgumentError("wavelet scale must be a positive integer, got %r" % (j,))
        return cls('wavelet', {'j': int(j)})

    @classmethod
    def constant(cls, c=1.0):
        return cls('constant', {'c': float(c)})

    @classmethod
    def poly_in_heat(cls, coeffs):
        """p(e^{-lambda}) with p(w) = sum_i coeffs[i] w^i."""
        coeffs = [float(c) for c in coeffs]
        if not coeffs:
            raise ArgumentError("polynomial filter needs at least one coefficient")
        return cls('poly_in_heat', {'coeffs': coeffs})

    @classmethod
    def custom(cls, function, sup_bound, lip_bound, name='custom'):
        return cls('custom', {'name': name}, sup_bound, lip_bound, function)

    def _bounds(self):
        p = self.params
        if self.kind == 'heat':
            return 1.0, p['t']
        if self.kind == 'wavelet':
            # u - u^2 with u = e^{-a lambda} peaks at 1/4; slope a*u*|1 - 2u| peaks at lambda = 0
            return 0.25, float(2 ** (p['j'] - 1))
        if self.kind == 'constant':
            return abs(p['c']), 0.0
        coeffs = np.asarray(p['coeffs'])
        powers = np.arange(coeffs.size)
        return float(np.abs(coeffs).sum()), float((np.abs(coeffs) * powers).sum())

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=np.float64)
        p = self.params
        if self.kind == 'heat':
            return np.exp(-p['t'] * lam)
        if self.kind == 'wavelet':
            a = 2.0 ** (p['j'] - 1)
            return np.exp(-a * lam) - np.exp(-2.0 * a * lam)
        if self.kind == 'constant':
            return np.full(lam.shape, p['c'])
        if self.kind == 'poly_in_heat':
            # Horner in omega = e^{-lambda}
            omega = np.exp(-lam)
            out = np.zeros(lam.shape)
            for c in reversed(p['coeffs']):
                out = out * omega + c
            return out
        return np.asarray(self._function(lam), dtype=np.float64)

    @property
    def name(self):
        p = self.params
        if self.kind == 'heat':
            return 'heat' if p['t'] == 1.0 else 'heat:%r' % p['t']
        if self.kind == 'wavelet':
            return 'wavelet:%d' % p['j']
        if self.kind == 'constant':
            return 'constant:%r' % p['c']
        if self.kind == 'poly_in_heat':
            return 'poly_in_heat:' + ','.join(repr(c) for c in p['coeffs'])
        return p.get('name', 'custom')

    def __eq__(self, other):
        if not isinstance(other, SpectralFilter) or self.kind == 'custom' or other.kind == 'custom':
            return self is other
        return self.kind == other.kind and self.params == other.params

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self.kind == 'custom':
            return id(self)
        return hash(self.name)

    def __repr__(self):
        return "SpectralFilter(%s)" % self.name


def wavelet_bank(J):
    """Band-pass responses e^{-2^{j-1} lambda} - e^{-2^j lambda}, j = 1..J."""
    if int(J) != J or J < 1:
        raise ArgumentError("wavelet bank needs J >= 1, got %r" % (J,))
    return [SpectralFilter.wavelet(j) for j in range(1, int(J) + 1)]


def filter_from_string(text):
    """Parse ``heat``, ``heat:t``, ``wavelet:j``, ``poly_in_heat:c0,c1,...`` or ``constant:c``."""
    kind, _, arg = text.strip().partition(':')
    try:
        if kind == 'heat':
            return SpectralFilter.heat(float(arg)) if arg else SpectralFilter.heat()
        if kind == 'wavelet':
            return SpectralFilter.wavelet(int(arg))
        if kind == 'constant':
            return SpectralFilter.constant(float(arg) if arg else 1.0)
        if kind == 'poly_in_heat':
            return SpectralFilter.poly_in_heat([float(c) for c in arg.split(',') if c.strip()])
    except ValueError as e:
        raise ParseError("bad filter %r: %s" % (text, e))
    raise ParseError("unknown filter %r" % (text,))


def filter_from_spec(spec):
    """Build a filter from ``{"kind": ..., "params": {...}}`` or from a string."""
    if isinstance(spec, str):
        return filter_from_string(spec)
    if not isinstance(spec, dict) or 'kind' not in spec:
        raise ParseError("filter spec must be a string or an object with a 'kind', got %r" % (spec,))
    kind, params = spec['kind'], spec.get('params') or {}
    if ':' in kind:
        return filter_from_string(kind)
    try:
        if kind == 'heat':
            return SpectralFilter.heat(params.get('t', 1.0))
        if kind == 'wavelet':
            return SpectralFilter.wavelet(params['j'])
        if kind == 'constant':
            return SpectralFilter.constant(params.get('c', 1.0))
        if kind == 'poly_in_heat':
            return SpectralFilter.poly_in_heat(params['coeffs'])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("bad %s filter parameters %r: %s" % (kind, params, e))
    raise ParseError("unsupported filter kind %r" % (kind,))


def filter_to_spec(w):
    if w.kind == 'custom':
        raise ArgumentError("custom filters cannot be serialized")
    return {'kind': w.kind, 'params': dict(w.params)}
