"""Scalar generating functions of rank-one processes.

A symbol is a function analytic in the unit disk given by its power series
``sum_l c_l z^l``. ``z`` is the delay operator, so coefficient ``l`` is the
weight of the noise sample ``l`` steps in the past.
"""
import logging
import math

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import signal

from .errors import EmptyNumerator, InvalidRecord, PoleInDisk
from .utils.records import decode_sequence, encode_array

RATIONAL = 'Rational'
HARMONIC = 'BuiltinHarmonic'
EXPLICIT = 'ExplicitCoefficients'
KINDS = (RATIONAL, HARMONIC, EXPLICIT)

# roots of the denominator with modulus below this are rejected
POLE_TOLERANCE = 1e-9
HARMONIC_TRUNCATION = 4096
# coefficients of a rational expansion below this relative size are dropped
RATIONAL_DECAY = 1e-17
MAX_RATIONAL_TRUNCATION = 2**20
LOGGER = logging.getLogger('timearrow.symbols')


def _frozen(values):
    array = np.array(values)
    array.setflags(write=False)
    return array


def _trim(values):
    values = np.atleast_1d(np.asarray(values))
    nonzero = np.flatnonzero(values)
    if not len(nonzero):
        return values[:0]
    return values[:nonzero[-1] + 1]


def _as_coefficients(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return values.astype(complex)
    return values.astype(float)


def _flush(values):
    '''Zero the coefficients below machine precision of the largest one'''
    values = np.array(np.atleast_1d(values))
    if len(values):
        scale = np.abs(values).max()
        values[np.abs(values) < np.finfo(float).eps * scale] = 0
    return values


def _roots(coeffs):
    '''Roots of the polynomial with ascending coefficients ``coeffs``'''
    coeffs = _trim(_flush(coeffs))
    if len(coeffs) < 2:
        return np.zeros(0, dtype=complex)
    return np.roots(coeffs[::-1] / np.abs(coeffs).max())


class Symbol:
    '''An immutable scalar generating function.

    Build instances with :func:`make_rational`, :func:`harmonic` or
    :func:`explicit`.
    '''
    def __init__(self, kind, num=(), den=(), coeffs=(),
                 truncation_default=None, pole_radius=0.0):
        self.kind = kind
        self.num_coeffs = _frozen(num)
        self.den_coeffs = _frozen(den)
        self.coeffs = _frozen(coeffs)
        self.pole_radius = pole_radius
        self.truncation_default = truncation_default

    def __repr__(self):
        if self.kind == RATIONAL:
            return 'Symbol(%s, num=%s, den=%s)' % (
                self.kind, list(self.num_coeffs), list(self.den_coeffs))
        if self.kind == EXPLICIT:
            return 'Symbol(%s, coeffs=%s)' % (self.kind, list(self.coeffs))
        return 'Symbol(%s)' % self.kind
    __str__ = __repr__

    def __eq__(self, other):
        return (isinstance(other, Symbol) and
                self.kind == other.kind and
                np.array_equal(self.num_coeffs, other.num_coeffs) and
                np.array_equal(self.den_coeffs, other.den_coeffs) and
                np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.kind, self.num_coeffs.tobytes(),
                     self.den_coeffs.tobytes(), self.coeffs.tobytes()))

    @property
    def is_real(self):
        '''True when every power-series coefficient is real'''
        return not any(np.iscomplexobj(a) for a in
                       (self.num_coeffs, self.den_coeffs, self.coeffs))

    @property
    def is_polynomial(self):
        return self.kind == EXPLICIT or (
            self.kind == RATIONAL and self.pole_radius == 0)

    def zeros(self):
        '''Zeros of a rational or explicit symbol in the complex plane'''
        if self.kind == HARMONIC:
            raise TypeError('the harmonic symbol has no finite zero set')
        coeffs = self.num_coeffs if self.kind == RATIONAL else self.coeffs
        return _roots(coeffs)

    def poles(self):
        if self.kind != RATIONAL:
            return np.zeros(0)
        return _roots(self.den_coeffs)

    def to_record(self):
        return {'kind': self.kind,
                'num': encode_array(self.num_coeffs),
                'den': encode_array(self.den_coeffs),
                'coeffs': encode_array(self.coeffs)}


class CoefficientWindow:
    '''The first coefficients of a symbol.

    ``tail_bound`` bounds the squared norm of the coefficients left out.
    '''
    def __init__(self, values, tail_bound=0.0):
        self.values = _frozen(values)
        self.tail_bound = float(tail_bound)

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return 'CoefficientWindow(%d, tail_bound=%g)' % (len(self),
                                                         self.tail_bound)


def make_rational(num, den=(1,)):
    '''Rational symbol ``num(z) / den(z)``, coefficients in ascending powers.

    :raise EmptyNumerator: when ``num`` has no nonzero coefficient
    :raise PoleInDisk: when ``den`` vanishes somewhere in the closed disk
    '''
    num = _trim(_flush(_as_coefficients(num)))
    den = _trim(_flush(_as_coefficients(den)))
    if not len(num):
        raise EmptyNumerator('numerator of a rational symbol is zero')
    if not len(den):
        raise PoleInDisk('denominator of a rational symbol is zero')
    roots = _roots(den)
    moduli = np.abs(roots)
    if len(roots) and moduli.min() <= 1 + POLE_TOLERANCE:
        raise PoleInDisk(
            'denominator has a root of modulus %.12g inside the closed '
            'unit disk' % moduli.min())
    rho = float(1 / moduli.min()) if len(roots) else 0.0
    if rho:
        length = math.ceil(math.log(RATIONAL_DECAY) / math.log(rho))
        length += len(num) + len(den)
        if length > MAX_RATIONAL_TRUNCATION:
            LOGGER.warning('pole at modulus %.12g, truncating the expansion '
                           'at %d terms', 1 / rho, MAX_RATIONAL_TRUNCATION)
            length = MAX_RATIONAL_TRUNCATION
    else:
        length = len(num)
    return Symbol(RATIONAL, num=num, den=den, truncation_default=length,
                  pole_radius=rho)


def constant(c=1):
    return make_rational([c], [1])


def polynomial(coeffs):
    return make_rational(coeffs, [1])


def harmonic():
    '''The symbol ``sum_l z^l / (1 + l)`` of harmonic coefficients'''
    return Symbol(HARMONIC, truncation_default=HARMONIC_TRUNCATION)


def explicit(coeffs):
    '''Symbol with a finite list of power-series coefficients'''
    values = _as_coefficients(coeffs)
    if values.ndim != 1 or not len(_trim(values)):
        raise EmptyNumerator('explicit coefficients need a nonzero entry')
    return Symbol(EXPLICIT, coeffs=values, truncation_default=len(values))


def symbol_from_record(record):
    '''Build a :class:`Symbol` from its JSON record'''
    if not isinstance(record, dict):
        raise InvalidRecord('symbol record must be an object, got %r'
                            % (record,))
    kind = record.get('kind')
    try:
        if kind == RATIONAL:
            return make_rational(decode_sequence(record.get('num', ())),
                                 decode_sequence(record.get('den', (1,))))
        if kind == HARMONIC:
            return harmonic()
        if kind == EXPLICIT:
            return explicit(decode_sequence(record.get('coeffs', ())))
    except TypeError as exc:
        raise InvalidRecord('bad coefficients in symbol record: %s' % exc)
    raise InvalidRecord('unknown symbol kind %r, expected one of %s'
                        % (kind, ', '.join(KINDS)))


def taylor_coefficients(s, L=None):
    '''First ``L`` power-series coefficients of ``s`` with a tail bound'''
    L = s.truncation_default if L is None else int(L)
    if L < 1:
        raise ValueError('window length must be positive, got %d' % L)
    if s.kind == HARMONIC:
        return CoefficientWindow(1 / np.arange(1, L + 1), 1 / L)
    if s.kind == EXPLICIT:
        values = np.zeros(L, dtype=s.coeffs.dtype)
        kept = min(L, len(s.coeffs))
        values[:kept] = s.coeffs[:kept]
        tail = np.sum(np.abs(s.coeffs[kept:])**2)
        return CoefficientWindow(values, tail)
    if s.pole_radius == 0:
        values = np.zeros(L, dtype=s.num_coeffs.dtype)
        kept = min(L, len(s.num_coeffs))
        values[:kept] = s.num_coeffs[:kept] / s.den_coeffs[0]
        tail = np.sum(np.abs(s.num_coeffs[kept:] / s.den_coeffs[0])**2)
        return CoefficientWindow(values, tail)
    rho = s.pole_radius
    ahead = max(64, math.ceil(math.log(1e-20) / math.log(rho)))
    series = _impulse_response(s, L + ahead)
    tail = np.sum(np.abs(series[L:])**2) + _envelope(series, L, rho)
    return CoefficientWindow(series[:L], tail)


def _impulse_response(s, length):
    impulse = np.zeros(length)
    impulse[0] = 1
    return signal.lfilter(s.num_coeffs, s.den_coeffs, impulse)


def _envelope(series, start, rho):
    '''Squared-norm bound of the coefficients past ``series``.

    Coefficients of a rational symbol decay like ``C sigma^l`` for any
    ``sigma`` above the inverse pole modulus; ``C`` is fitted on the
    look-ahead block.
    '''
    sigma = (1 + rho) / 2
    block = np.abs(series[start:])
    nonzero = block > 0
    if not nonzero.any():
        return 0.0
    ells = np.arange(start, len(series))[nonzero]
    log_c = np.max(np.log(block[nonzero]) - ells * math.log(sigma))
    end = len(series)
    return float(np.exp(2 * (log_c + end * math.log(sigma))) /
                 (1 - sigma**2))


def backward_shift(w, k):
    '''Drop the first ``k`` coefficients of a window'''
    if k < 0:
        raise ValueError('backward shift needs k >= 0, got %d' % k)
    if not k:
        return w
    return CoefficientWindow(w.values[k:], w.tail_bound)


def boundary_values(s, thetas):
    '''Values of ``s`` at the boundary points ``exp(i theta)``'''
    thetas = np.asarray(thetas, dtype=float)
    z = np.exp(1j * thetas)
    if s.kind == RATIONAL:
        return P.polyval(z, s.num_coeffs) / P.polyval(z, s.den_coeffs)
    if s.kind == EXPLICIT:
        return P.polyval(z, s.coeffs)
    # -log(1 - z) / z away from the singular point z = 1
    gap = 1 - z
    singular = np.abs(gap) < 1e-12
    values = np.empty(z.shape, dtype=complex)
    regular = ~singular
    values[regular] = -np.log(gap[regular]) / z[regular]
    if singular.any():
        window = taylor_coefficients(s)
        values[singular] = P.polyval(z[singular], window.values)
    return values


def evaluate_on_circle(s, theta):
    return complex(boundary_values(s, np.array([theta]))[0])
