"""Finite-window linear prediction (from the past) and postdiction (from
the future) of a stationary process, and numerical detection of backward
determinism.

Autocovariances computed from a model are solved in square-root form: the
model's noise factor is reduced to a triangle, window columns that add no
direction are dropped, and the error covariance is the sum of the squared
rows left after the window. Bare lag sequences go through the normal
equations with a truncated eigendecomposition.
"""
import asyncio
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import linalg

from .covariance import (BACKWARD, FORWARD, autocov, cross_blocks,
                         parse_direction, sample_times, triangular_factor,
                         window_matrix)
from .errors import (ConfigError, DegenerateGamma0, InvalidWindows,
                     WindowExceedsLags)
from .spectral import hermitian_part

RANK_TOL = 1e-10
PSD_TOL = 1e-8
MONOTONE_TOL = 1e-8
DETERMINISM_THRESHOLD = 1e-3
STABILITY_TOL = 1e-3

DETERMINISTIC = 'Deterministic'
NOT_DETERMINISTIC = 'NotDeterministic'
INCONCLUSIVE = 'Inconclusive'

LOGGER = logging.getLogger('timearrow.estimation')


class PredictionSolution:
    '''Optimal linear estimate of ``xi(0)`` from a window of ``p`` samples.

    ``coefficients[j-1]`` multiplies ``xi(-j)`` (forward) or ``xi(j)``
    (backward). ``error_covariance`` is the covariance of the estimation
    error.
    '''
    def __init__(self, direction, window, coefficients, error_covariance,
                 rank_used, rank_tolerance, psd_tolerance, min_eigenvalue):
        self.direction = direction
        self.window = window
        self.coefficients = coefficients
        self.error_covariance = error_covariance
        self.rank_used = rank_used
        self.rank_tolerance = rank_tolerance
        self.psd_tolerance = psd_tolerance
        self.min_eigenvalue = min_eigenvalue
        coefficients.setflags(write=False)
        error_covariance.setflags(write=False)

    def __repr__(self):
        return 'PredictionSolution(%s, p=%d, trace=%g)' % (
            self.direction, self.window, self.trace)

    @property
    def trace(self):
        return float(np.trace(self.error_covariance).real)

    @property
    def det(self):
        return float(np.linalg.det(self.error_covariance).real)

    @property
    def is_psd(self):
        return self.min_eigenvalue >= -self.psd_tolerance

    def to_record(self):
        return {'direction': self.direction,
                'window': self.window,
                'error_covariance': self.error_covariance,
                'trace': self.trace,
                'det': self.det,
                'rank_used': self.rank_used,
                'rank_tolerance': self.rank_tolerance,
                'psd_tolerance': self.psd_tolerance}


class DeterminismReport:
    '''Backward error traces of a sweep and the verdict drawn from them.

    ``solutions`` keeps the :class:`PredictionSolution` of every window.
    '''
    def __init__(self, windows, traces, verdict, threshold,
                 relative_change, solutions=None):
        self.windows = list(windows)
        self.traces = list(traces)
        self.verdict = verdict
        self.threshold = threshold
        self.relative_change = relative_change
        self.solutions = solutions or []

    def __repr__(self):
        return 'DeterminismReport(%s, final trace %g)' % (self.verdict,
                                                          self.traces[-1])

    def to_record(self):
        return {'windows': self.windows,
                'traces': self.traces,
                'verdict': self.verdict,
                'threshold': self.threshold,
                'relative_change': self.relative_change}


def check_problem(gamma, p, rank_tol):
    if not 0 < rank_tol < 1:
        raise ConfigError('rank tolerance must be in (0, 1), got %g'
                          % rank_tol, invariant='rank-tolerance-range')
    if p < 1 or p > gamma.K:
        raise WindowExceedsLags('window %d outside 1..%d, the available lags'
                                % (p, gamma.K))
    if not np.any(gamma.lag(0)):
        raise DegenerateGamma0('lag-zero covariance is identically zero')


def predict(gamma, p, direction=FORWARD, rank_tol=RANK_TOL):
    '''Error covariance ``Gamma_0 - C R^+ C^*`` of the best estimate of
    ``xi(0)`` from a ``p``-sample window.

    With a noise factor the Schur complement is read off a triangular
    factor and window samples whose orthogonal part is below ``rank_tol``
    times their norm are dropped. Without one, ``R^+`` keeps the
    eigenvalues of the window covariance above ``rank_tol * lambda_max``.
    '''
    direction = parse_direction(direction)
    p = int(p)
    check_problem(gamma, p, rank_tol)
    if gamma.factor is not None:
        R = gamma.factor.triangle(sample_times(p, direction))
        return square_root_solutions(gamma, R, [p], direction, rank_tol)[0]
    return normal_equations_solution(gamma, p, direction, rank_tol)


def independent_columns(W, rank_tol=RANK_TOL):
    '''Indices of the columns of ``W`` that add a direction to the span of
    the earlier ones'''
    basis = np.zeros(W.shape, dtype=W.dtype)
    kept = []
    for c in range(W.shape[1]):
        a = W[:, c]
        Q = basis[:, :len(kept)]
        v = a
        for _ in range(2):
            v = v - Q @ (Q.conj().T @ v)
        residual = linalg.norm(v)
        if residual > rank_tol * linalg.norm(a):
            basis[:, len(kept)] = v / residual
            kept.append(c)
    return np.array(kept, dtype=int)


def square_root_solutions(gamma, R, windows, direction, rank_tol=RANK_TOL):
    '''Solutions for nested windows from the triangle ``R`` of the samples
    ``sample_times(windows[-1], direction)``.

    The error covariance of window ``p`` sums the rows of the reduced
    triangle below the kept columns of that window, so it is positive
    semidefinite and non-increasing in ``p``.
    '''
    n = gamma.n
    k = windows[-1] * n
    kept = independent_columns(R[:, :k], rank_tol)
    m = len(kept)
    T = triangular_factor(R[:, np.append(kept, np.arange(k, k + n))])
    E = T[:, m:]
    terms = np.conj(E)[:, :, None] * E[:, None, :]
    tails = np.cumsum(terms[::-1], axis=0)[::-1]
    tails = np.concatenate([tails, np.zeros((1, n, n), dtype=tails.dtype)])
    psd_tol = PSD_TOL * np.trace(gamma.lag(0)).real
    solutions = []
    for p in windows:
        c = int(np.searchsorted(kept, p * n))
        omega = hermitian_part(tails[c])
        full = np.zeros((p * n, n), dtype=T.dtype)
        if c:
            full[kept[:c]] = linalg.solve_triangular(T[:c, :c], T[:c, m:],
                                                     check_finite=False)
        coefficients = np.conj(full).T.reshape(n, p, n).transpose(1, 0, 2)
        solutions.append(_solution(direction, p, coefficients, omega, c,
                                   rank_tol, psd_tol))
    return solutions


def normal_equations_solution(gamma, p, direction, rank_tol=RANK_TOL):
    '''Schur complement through an eigendecomposition pseudo-inverse of the
    block-Toeplitz window matrix'''
    n = gamma.n
    gamma0 = gamma.lag(0)
    R = window_matrix(gamma, p, direction).body
    C = np.concatenate(list(cross_blocks(gamma, p, direction)), axis=1)
    eigvals, eigvecs = linalg.eigh(R)
    lmax = eigvals[-1]
    keep = eigvals > rank_tol * lmax
    V = eigvecs[:, keep]
    lam = eigvals[keep]
    CV = C @ V
    W = CV / np.sqrt(lam)
    omega = hermitian_part(gamma0 - W @ W.conj().T)
    A = (CV / lam) @ V.conj().T
    coefficients = A.reshape(n, p, n).transpose(1, 0, 2)
    psd_tol = (PSD_TOL * np.trace(gamma0).real +
               64 * np.finfo(float).eps * np.sum(np.abs(A)**2) * lmax)
    return _solution(direction, p, coefficients, omega, int(keep.sum()),
                     rank_tol, psd_tol)


def _solution(direction, p, coefficients, omega, rank, rank_tol, psd_tol):
    min_eig = float(linalg.eigvalsh(omega)[0])
    if min_eig < -psd_tol:
        LOGGER.warning('%s error covariance at window %d has eigenvalue %g '
                       'below -%g', direction, p, min_eig, psd_tol)
    LOGGER.debug('%s window %d: rank %d, trace %g', direction, p, rank,
                 np.trace(omega).real)
    return PredictionSolution(direction, p, np.ascontiguousarray(coefficients),
                              omega, rank, rank_tol, float(psd_tol), min_eig)


def check_windows(windows, minimum=1):
    windows = [int(p) for p in windows]
    if len(windows) < minimum:
        raise InvalidWindows('at least %d windows needed, got %d'
                             % (minimum, len(windows)))
    if windows[0] < 1 or any(b <= a for a, b in zip(windows, windows[1:])):
        raise InvalidWindows('windows must be positive and strictly '
                             'increasing, got %s' % windows)
    return windows


class SweepRunner:
    '''Solve a list of nested windows.

    With a noise factor the row blocks of the factor are reduced
    concurrently when ``workers > 1`` and every window is read off one
    triangle; otherwise windows are solved one by one.
    '''
    def __init__(self, gamma, windows, direction=FORWARD,
                 rank_tol=RANK_TOL, workers=1):
        self.gamma = gamma
        self.windows = check_windows(windows)
        self.direction = parse_direction(direction)
        self.rank_tol = rank_tol
        self.workers = max(1, int(workers))

    def run(self):
        check_problem(self.gamma, self.windows[-1], self.rank_tol)
        factor = self.gamma.factor
        if factor is None:
            return self._map(self._solve, self.windows, len(self.windows),
                             'window')
        times = sample_times(self.windows[-1], self.direction)
        parts = self._map(triangular_factor, factor.blocks(times),
                          factor.block_count(times), 'block')
        R = triangular_factor(np.vstack(parts))
        return square_root_solutions(self.gamma, R, self.windows,
                                     self.direction, self.rank_tol)

    def _map(self, func, items, total, what):
        '''``func`` over ``items`` in order, ``workers`` items at a time'''
        items = iter(items)
        results = []
        if self.workers == 1:
            for item in items:
                results.append(func(item))
                self._done(len(results), total, what)
            return results
        loop = asyncio.new_event_loop()
        try:
            with ThreadPoolExecutor(self.workers) as executor:
                while True:
                    batch = list(itertools.islice(items, self.workers))
                    if not batch:
                        break
                    results.extend(loop.run_until_complete(
                        self._gather(loop, executor, func, batch)))
                    self._done(len(results), total, what)
        finally:
            loop.close()
        return results

    async def _gather(self, loop, executor, func, batch):
        return await asyncio.gather(*[loop.run_in_executor(executor, func,
                                                           item)
                                      for item in batch])

    def _solve(self, p):
        return normal_equations_solution(self.gamma, p, self.direction,
                                         self.rank_tol)

    def _done(self, done, total, what):
        LOGGER.info('%.0f%% completed - %s %s %d of %d',
                    100 * done / total, self.direction, what, done, total)


def error_sweep(m, windows, direction=FORWARD, rank_tol=RANK_TOL, L=None,
                workers=1):
    '''One :class:`PredictionSolution` per window, autocovariance computed
    once up to the largest window'''
    windows = check_windows(windows)
    direction = parse_direction(direction)
    gamma = autocov(m, windows[-1], L)
    solutions = SweepRunner(gamma, windows, direction, rank_tol,
                            workers).run()
    slack = MONOTONE_TOL * max(1.0, np.trace(gamma.lag(0)).real)
    for a, b in zip(solutions, solutions[1:]):
        if b.trace > a.trace + slack:
            LOGGER.warning('%s error trace increases from %.12g (window %d) '
                           'to %.12g (window %d)', direction, a.trace,
                           a.window, b.trace, b.window)
    return solutions


def determinism_verdict(traces, threshold=DETERMINISM_THRESHOLD,
                        stability_tol=STABILITY_TOL):
    '''``(verdict, relative_change)`` of a backward error trace curve'''
    final = traces[-1]
    start = traces[len(traces) // 2]
    relative_change = abs(start - final) / final if final > 0 else 0.0
    if final < threshold:
        return DETERMINISTIC, relative_change
    if relative_change < stability_tol:
        return NOT_DETERMINISTIC, relative_change
    return INCONCLUSIVE, relative_change


def is_backward_deterministic_numeric(m, windows,
                                      threshold=DETERMINISM_THRESHOLD,
                                      rank_tol=RANK_TOL, L=None, workers=1):
    '''Numerical surrogate of backward determinism.

    Deterministic when the last backward error trace is below
    ``threshold``; NotDeterministic when the traces have stabilized above
    it over the last half of the sweep; Inconclusive otherwise.
    '''
    windows = check_windows(windows, minimum=3)
    solutions = error_sweep(m, windows, BACKWARD, rank_tol, L, workers)
    traces = [s.trace for s in solutions]
    verdict, change = determinism_verdict(traces, threshold)
    LOGGER.info('%s: backward determinism %s, final trace %.6g', m.name,
                verdict, traces[-1])
    return DeterminismReport(windows, traces, verdict, threshold, change,
                             solutions)
