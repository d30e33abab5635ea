"""Gaussian sample paths of rank-one models and empirical checks of the
analytic covariances and prediction errors
"""
import logging

import numpy as np
from scipy import signal

from .covariance import BACKWARD, FORWARD, AutocovarianceSequence, autocov
from .errors import ConfigError, LagTooLarge, WindowExceedsPath
from .estimation import RANK_TOL, predict
from .spectral import hermitian_part
from .symbols import HARMONIC, taylor_coefficients

HARMONIC_SIMULATION_TRUNCATION = 10**4
BIT_GENERATOR = 'PCG64'
NORMAL_METHOD = 'ziggurat'
VALIDATION_TOL = 0.05
LOGGER = logging.getLogger('timearrow.simulate')


class SamplePath:
    '''``T`` samples of an n-channel process, one row per time step'''
    def __init__(self, values, seed, burn_in, truncation, model_name=None):
        values.setflags(write=False)
        self.values = values
        self.seed = seed
        self.burn_in = burn_in
        self.truncation = truncation
        self.model_name = model_name

    def __repr__(self):
        return 'SamplePath(%s, T=%d, n=%d, seed=%d)' % (
            self.model_name, self.T, self.n, self.seed)

    @property
    def T(self):
        return self.values.shape[0]

    @property
    def n(self):
        return self.values.shape[1]

    @property
    def metadata(self):
        return {'seed': self.seed,
                'burn_in': self.burn_in,
                'truncation': self.truncation,
                'bit_generator': BIT_GENERATOR,
                'normal_method': NORMAL_METHOD,
                'model': self.model_name}


def generator(seed):
    return np.random.Generator(np.random.PCG64(seed))


def simulation_truncation(m):
    return max(HARMONIC_SIMULATION_TRUNCATION if s.kind == HARMONIC
               else s.truncation_default for s in m.channels)


def sample_path(m, T, seed=0, L=None):
    '''Filter ``T + L + burn_in`` seeded standard normals through the
    first ``L`` coefficients of every channel and drop ``burn_in = L``
    leading samples'''
    T = int(T)
    if T < 1:
        raise ConfigError('path length must be positive, got %d' % T,
                          invariant='path-length')
    if not m.is_real:
        raise ConfigError('sample paths need real coefficients, model "%s" '
                          'is complex' % m.name, invariant='real-model')
    L = simulation_truncation(m) if L is None else int(L)
    if L < 1:
        raise ConfigError('filter truncation must be positive, got %d' % L,
                          invariant='truncation-length')
    burn_in = L
    noise = generator(seed).standard_normal(T + L + burn_in)
    noise *= np.sqrt(m.noise_variance)
    columns = []
    for s in m.channels:
        coeffs = taylor_coefficients(s, L).values
        filtered = signal.convolve(noise, coeffs, mode='valid')
        columns.append(filtered[burn_in:burn_in + T])
    LOGGER.info('simulated %d samples of %s (seed %d, truncation %d)',
                T, m.name, seed, L)
    return SamplePath(np.stack(columns, axis=1), seed, burn_in, L, m.name)


def empirical_autocov(path, K):
    '''Biased (``1/T``) lag estimates ``0..K`` of a zero-mean path'''
    K = int(K)
    if K < 0 or K >= path.T / 10:
        raise LagTooLarge('max lag %d must be below a tenth of the path '
                          'length %d' % (K, path.T))
    X = path.values
    gammas = np.empty((K + 1, path.n, path.n))
    for k in range(K + 1):
        gammas[k] = X[k:].T @ X[:path.T - k] / path.T
    gammas[0] = hermitian_part(gammas[0])
    return AutocovarianceSequence(gammas)


def prediction_residuals(path, sol):
    '''Residuals of the predictor ``sol`` applied along the path'''
    p = sol.window
    if path.T <= 10 * p:
        raise WindowExceedsPath('path of %d samples too short for window %d'
                                % (path.T, p))
    X = path.values
    T = path.T
    A = sol.coefficients
    if not np.iscomplexobj(X):
        A = A.real
    if sol.direction == FORWARD:
        estimate = sum(X[p - j:T - j] @ A[j - 1].T for j in range(1, p + 1))
        return X[p:] - estimate
    estimate = sum(X[j:T - p + j] @ A[j - 1].T for j in range(1, p + 1))
    return X[:T - p] - estimate


def empirical_prediction_error(path, sol):
    '''Average outer product of the prediction residuals'''
    residuals = prediction_residuals(path, sol)
    return residuals.T @ residuals.conj() / len(residuals)


def relative_error(estimate, target):
    scale = np.linalg.norm(target)
    gap = np.linalg.norm(np.asarray(estimate) - target)
    return float(gap / scale) if scale else float(gap)


def validate(m, T, seed=0, window=1, rank_tol=RANK_TOL, L=None,
             tolerance=VALIDATION_TOL):
    '''Compare a simulated path with the analytic lag-0 and lag-1
    covariances and with the forward and backward prediction errors'''
    path = sample_path(m, T, seed, L)
    K = max(1, window)
    gamma = autocov(m, K)
    empirical = empirical_autocov(path, 1)
    checks = {}
    for k in (0, 1):
        checks['gamma_%d' % k] = _check(empirical.lag(k), gamma.lag(k),
                                        tolerance)
    for direction in (FORWARD, BACKWARD):
        sol = predict(gamma, window, direction, rank_tol)
        checks['omega_%s' % direction] = _check(
            empirical_prediction_error(path, sol), sol.error_covariance,
            tolerance)
    passed = all(check['passed'] for check in checks.values())
    LOGGER.info('validation of %s: %s', m.name,
                'passed' if passed else 'FAILED')
    return {'model': m.name,
            'path': path.metadata,
            'T': path.T,
            'window': window,
            'tolerance': tolerance,
            'checks': checks,
            'passed': passed}


def _check(empirical, analytic, tolerance):
    error = relative_error(empirical, analytic)
    return {'empirical': empirical,
            'analytic': analytic,
            'relative_error': error,
            'passed': error <= tolerance}
