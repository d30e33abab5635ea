"""Boundary spectral densities and log-integral identities
"""
import logging

import numpy as np

from .catalog import ma_example
from .errors import InvalidGrid, NegativeDensity
from .symbols import boundary_values

DEFAULT_GRID = 4096
MIN_GRID = 8
# densities below this are zeros of the spectrum
EPS_LOG = 1e-13
LOGGER = logging.getLogger('timearrow.spectral')


def check_grid_size(M):
    M = int(M)
    if M < MIN_GRID or M & (M - 1):
        raise InvalidGrid('grid size must be a power of two >= %d, got %d'
                          % (MIN_GRID, M))
    return M


def grid_angles(M):
    '''``M`` uniform angles on ``[-pi, pi)``'''
    return -np.pi + 2 * np.pi * np.arange(M) / M


def hermitian_part(a):
    return (a + np.conj(np.swapaxes(a, -1, -2))) / 2


class SpectralGrid:
    '''Spectral density matrices ``Phi(theta_j)`` on a uniform grid'''
    def __init__(self, thetas, values):
        values = hermitian_part(np.asarray(values, dtype=complex))
        if values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise ValueError('spectral values must have shape (M, n, n)')
        self.thetas = np.asarray(thetas, dtype=float)
        self.values = values
        self.thetas.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_values(cls, values):
        '''Grid from density matrices sampled at :func:`grid_angles`'''
        values = np.asarray(values)
        if values.ndim == 1:
            values = values[:, None, None]
        M = check_grid_size(len(values))
        return cls(grid_angles(M), values)

    @property
    def M(self):
        return len(self.thetas)

    @property
    def n(self):
        return self.values.shape[1]

    def determinants(self):
        return np.linalg.det(self.values).real

    def channel(self, i):
        '''Scalar density of channel ``i``'''
        return self.values[:, i, i].real


class GeometricMean:
    '''Result of a log-quadrature: value, grid size and floor hits'''
    def __init__(self, value, grid_size, floor_hits):
        self.value = float(value)
        self.grid_size = int(grid_size)
        self.floor_hits = int(floor_hits)

    def __repr__(self):
        return 'GeometricMean(%g, grid_size=%d, floor_hits=%d)' % (
            self.value, self.grid_size, self.floor_hits)

    def to_record(self):
        return {'value': self.value,
                'grid_size': self.grid_size,
                'floor_hits': self.floor_hits}


def spectrum_grid(m, M=DEFAULT_GRID):
    '''Spectral density ``G G^*`` of a rank-one model on ``M`` points'''
    M = check_grid_size(M)
    thetas = grid_angles(M)
    G = np.stack([boundary_values(s, thetas) for s in m.channels], axis=1)
    values = m.noise_variance * G[:, :, None] * np.conj(G)[:, None, :]
    return SpectralGrid(thetas, values)


def geometric_mean(density, eps_log=EPS_LOG, negative_tol=EPS_LOG):
    '''exp of the trapezoid mean of ``log density`` on a periodic grid.

    Values below ``eps_log`` short-circuit the result to zero.

    :raise NegativeDensity: for values below ``-negative_tol``
    '''
    density = np.asarray(density, dtype=float)
    if not density.size:
        raise ValueError('empty density')
    if density.min() < -negative_tol:
        raise NegativeDensity('spectral density takes the negative value %g'
                              % density.min())
    floor_hits = int(np.count_nonzero(density < eps_log))
    if floor_hits:
        LOGGER.debug('%d of %d density values below %g', floor_hits,
                     density.size, eps_log)
        return GeometricMean(0.0, density.size, floor_hits)
    return GeometricMean(np.exp(np.mean(np.log(density))), density.size, 0)


def szego_mean(scalar_density, eps_log=EPS_LOG):
    '''Szego geometric mean, the one-step prediction error variance'''
    return geometric_mean(scalar_density, eps_log).value


def wiener_masani(grid, eps_log=EPS_LOG):
    dets = grid.determinants()
    # roundoff of a singular n x n determinant scales like |Phi|^n
    scale = max(1.0, np.abs(grid.values).max() ** grid.n)
    return geometric_mean(dets, eps_log, negative_tol=EPS_LOG * scale)


def wiener_masani_det(grid, eps_log=EPS_LOG):
    '''Determinant of the one-step prediction error covariance'''
    return wiener_masani(grid, eps_log).value


def inverse_transform(grid, k):
    '''Lag ``k`` autocovariance recovered from the density grid'''
    phase = np.exp(-1j * k * grid.thetas)
    return np.tensordot(phase, grid.values, axes=(0, 0)) / grid.M


def ma_factorization_check(alpha, M=DEFAULT_GRID):
    '''Largest Frobenius gap between the two analytic factorizations of
    the moving-average spectrum and the spectrum itself.

    Left factor ``(1 + alpha z, 1)^T``, right factor
    ``(z^-1 + alpha, z^-1)^T``.
    '''
    grid = spectrum_grid(ma_example(alpha), M)
    z = np.exp(1j * grid.thetas)
    one = np.ones_like(z)
    left_col = np.stack([1 + alpha * z, one], axis=1)
    left_row = np.stack([1 + alpha / z, one], axis=1)
    right_col = np.stack([1 / z + alpha, 1 / z], axis=1)
    right_row = np.stack([z + alpha, z], axis=1)
    gap = 0.0
    for col, row in ((left_col, left_row), (right_col, right_row)):
        product = col[:, :, None] * row[:, None, :]
        diff = np.linalg.norm(product - grid.values, axis=(1, 2))
        gap = max(gap, float(diff.max()))
    return gap
