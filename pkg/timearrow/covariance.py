"""Autocovariances of rank-one models and block-Toeplitz window matrices.

Lags follow ``Gamma_k = E[xi(t) xi(t-k)^*]``; only ``k >= 0`` is stored and
``Gamma_{-k} = Gamma_k^*`` is formed on access.
"""
import logging

import numpy as np
from scipy import linalg

from .errors import (ConfigError, LagUnavailable, TruncationTooShort,
                     WindowExceedsLags)
from .spectral import hermitian_part
from .symbols import HARMONIC, taylor_coefficients

FORWARD = 'forward'
BACKWARD = 'backward'
DIRECTIONS = {
    'forward': FORWARD, 'fwd': FORWARD, 'f': FORWARD,
    'backward': BACKWARD, 'bwd': BACKWARD, 'b': BACKWARD
}
HARMONIC_AUTOCOV_TRUNCATION = 10**5
# noise values per row block of a model factor
FACTOR_BLOCK = 4096
LOGGER = logging.getLogger('timearrow.covariance')


def parse_direction(direction):
    try:
        return DIRECTIONS[str(direction).lower()]
    except KeyError:
        raise ConfigError('direction must be forward (fwd) or backward '
                          '(bwd), got %r' % (direction,),
                          invariant='direction')


class AutocovarianceSequence:
    '''Lags ``Gamma_0 .. Gamma_K`` of an n-variate stationary process.

    Sequences computed from a model keep its :class:`NoiseFactor`.
    '''
    def __init__(self, gammas, truncation_error=0.0, factor=None):
        gammas = np.array(gammas)
        if gammas.ndim != 3 or gammas.shape[1] != gammas.shape[2]:
            raise ValueError('autocovariance lags must have shape (K+1, n, n)')
        gammas[0] = hermitian_part(gammas[0])
        gammas.setflags(write=False)
        self.gammas = gammas
        self.truncation_error = float(truncation_error)
        self.factor = factor

    def __repr__(self):
        return 'AutocovarianceSequence(n=%d, K=%d, truncation_error=%g)' % (
            self.n, self.K, self.truncation_error)

    @property
    def n(self):
        return self.gammas.shape[1]

    @property
    def K(self):
        return self.gammas.shape[0] - 1

    def lag(self, k):
        '''``Gamma_k`` for any ``|k| <= K``'''
        if abs(k) > self.K:
            raise LagUnavailable('lag %d requested, autocovariance only has '
                                 'lags up to %d' % (k, self.K))
        if k >= 0:
            return self.gammas[k]
        return self.gammas[-k].conj().T

    def reversed(self):
        '''Autocovariance of the time-reversed process'''
        factor = self.factor.reversed() if self.factor else None
        return AutocovarianceSequence(
            np.conj(np.swapaxes(self.gammas, 1, 2)), self.truncation_error,
            factor)

    def rows(self):
        '''``(lag, row, col, value)`` tuples for CSV export'''
        for k, gamma in enumerate(self.gammas):
            for (i, j), value in np.ndenumerate(gamma):
                yield k, i, j, value


class NoiseFactor:
    '''Square root of the joint covariance of the samples of a model.

    Sample ``xi_i(t)`` is the column ``conj(G_i[t - j])`` over the noise
    values ``w_j``, so inner products of columns are autocovariances.
    '''
    def __init__(self, coefficients, noise_variance=1.0, sign=1):
        self.coefficients = np.asarray(coefficients)
        self.noise_variance = noise_variance
        self.sign = sign

    def __repr__(self):
        return 'NoiseFactor(n=%d, L=%d)' % (self.n, self.L)

    @property
    def L(self):
        return self.coefficients.shape[0]

    @property
    def n(self):
        return self.coefficients.shape[1]

    def reversed(self):
        '''Factor of the time-reversed process'''
        return NoiseFactor(self.coefficients, self.noise_variance,
                           -self.sign)

    def span(self, times):
        '''Noise indices ``(first, last)`` reaching the samples at ``times``'''
        t = self.sign * np.asarray(times)
        return int(t.min()) - self.L + 1, int(t.max())

    def block_count(self, times, size=FACTOR_BLOCK):
        first, last = self.span(times)
        return -(-(last - first + 1) // size)

    def blocks(self, times, size=FACTOR_BLOCK):
        '''Row blocks of the factor restricted to the samples at ``times``.

        Columns run over times, then channels.
        '''
        t = self.sign * np.asarray(times)
        first, last = self.span(times)
        G = np.conj(self.coefficients) * np.sqrt(self.noise_variance)
        for start in range(first, last + 1, size):
            j = np.arange(start, min(start + size, last + 1))
            lag = t[None, :] - j[:, None]
            valid = (lag >= 0) & (lag < self.L)
            block = G[np.where(valid, lag, 0)]
            block[~valid] = 0
            yield block.reshape(len(j), -1)

    def triangle(self, times):
        '''Upper triangle ``R`` with ``R^* R`` the covariance of the samples
        at ``times``'''
        parts = [triangular_factor(block) for block in self.blocks(times)]
        return triangular_factor(np.vstack(parts))


def triangular_factor(block):
    '''``R`` factor of a QR decomposition, no more rows than columns'''
    R = linalg.qr(block, mode='r', check_finite=False)[0]
    return R[:block.shape[1]]


def sample_times(p, direction=FORWARD):
    '''Times of a ``p``-sample window, nearest first, followed by the
    present'''
    steps = np.arange(1, int(p) + 1)
    if parse_direction(direction) == FORWARD:
        steps = -steps
    return np.append(steps, 0)


class WindowMatrix:
    '''Covariance of a stacked window of ``p`` past or future samples'''
    def __init__(self, body, p, n, direction):
        body.setflags(write=False)
        self.body = body
        self.p = p
        self.n = n
        self.direction = direction

    def block(self, i, j):
        n = self.n
        return self.body[i*n:(i+1)*n, j*n:(j+1)*n]


def default_truncation(m, K=0):
    lengths = [HARMONIC_AUTOCOV_TRUNCATION if s.kind == HARMONIC
               else s.truncation_default for s in m.channels]
    return max(K + 1, max(lengths))


def autocov(m, K, L=None):
    '''Lags ``0..K`` of ``sum_l G_{l+k} G_l^*`` over ``L`` coefficients.

    ``truncation_error`` bounds every entry of the dropped remainder by
    Cauchy-Schwarz on the symbol tail bounds.
    '''
    K = int(K)
    if K < 0:
        raise ValueError('max lag must be nonnegative, got %d' % K)
    L = default_truncation(m, K) if L is None else int(L)
    if L <= K:
        raise TruncationTooShort('truncation %d must exceed the max lag %d'
                                 % (L, K))
    windows = [taylor_coefficients(s, L) for s in m.channels]
    C = np.stack([w.values for w in windows], axis=1)
    Cc = C.conj()
    gammas = np.empty((K + 1, m.n, m.n), dtype=C.dtype)
    for k in range(K + 1):
        gammas[k] = C[k:].T @ Cc[:L - k]
    gammas *= m.noise_variance
    tails = np.array([w.tail_bound for w in windows])
    edge = np.array([np.sum(np.abs(w.values[L - K:])**2) for w in windows])
    bound = np.sqrt(np.outer(tails, tails + edge)).max()
    LOGGER.debug('autocov of %s: K=%d, L=%d, truncation_error=%g',
                 m.name, K, L, bound)
    return AutocovarianceSequence(gammas, m.noise_variance * bound,
                                  NoiseFactor(C, m.noise_variance))


def window_matrix(gamma, p, direction=FORWARD):
    '''Block-Toeplitz covariance of ``p`` stacked samples.

    forward: samples ``xi(-1) .. xi(-p)``, block ``(i, j) = Gamma_{j-i}``;
    backward: samples ``xi(1) .. xi(p)``, block ``(i, j) = Gamma_{i-j}``.
    '''
    direction = parse_direction(direction)
    p = int(p)
    if p < 1:
        raise ValueError('window must be positive, got %d' % p)
    if p > gamma.K:
        raise LagUnavailable('window %d needs lags up to %d, autocovariance '
                             'has %d' % (p, p, gamma.K))
    if direction == BACKWARD:
        gamma = gamma.reversed()
    n = gamma.n
    lags = np.arange(1 - p, p)
    ladder = np.stack([gamma.lag(k) for k in lags])
    index = np.subtract.outer(np.arange(p), np.arange(p))
    blocks = ladder[p - 1 - index]
    body = blocks.transpose(0, 2, 1, 3).reshape(p * n, p * n)
    return WindowMatrix(np.ascontiguousarray(body), p, n, direction)


def cross_blocks(gamma, p, direction=FORWARD):
    '''Covariances ``E[xi(0) xi(-j)^*]`` (forward) or ``E[xi(0) xi(j)^*]``
    (backward) for ``j = 1..p``, shape ``(p, n, n)``
    '''
    direction = parse_direction(direction)
    if p > gamma.K:
        raise WindowExceedsLags('window %d exceeds the max lag %d'
                                % (p, gamma.K))
    blocks = gamma.gammas[1:p + 1]
    if direction == BACKWARD:
        blocks = np.conj(np.swapaxes(blocks, 1, 2))
    return blocks
