import unittest

import numpy as np

from timearrow import catalog, symbols
from timearrow.covariance import BACKWARD, FORWARD, autocov
from timearrow.errors import ConfigError, LagTooLarge, WindowExceedsPath
from timearrow.estimation import predict
from timearrow.simulate import (empirical_autocov, empirical_prediction_error,
                                generator, prediction_residuals,
                                relative_error, sample_path,
                                simulation_truncation, validate)

from tests import ArrayMixin


class TestSamplePath(ArrayMixin, unittest.TestCase):

    def test_reproducible(self):
        m = catalog.ma_example(0.5)
        a = sample_path(m, 1000, seed=7)
        b = sample_path(m, 1000, seed=7)
        c = sample_path(m, 1000, seed=8)
        self.assertEqual(a.values.shape, (1000, 2))
        self.assertTrue(np.array_equal(a.values, b.values))
        self.assertFalse(np.array_equal(a.values, c.values))

    def test_white_noise(self):
        m = catalog.custom('white', [symbols.constant()])
        path = sample_path(m, 50, seed=3)
        noise = generator(3).standard_normal(52)
        self.assertEqual(path.burn_in, 1)
        self.assertClose(path.values[:, 0], noise[1:51], atol=1e-12)

    def test_filter(self):
        alpha = 0.5
        m = catalog.ma_example(alpha)
        path = sample_path(m, 200, seed=1)
        x, y = path.values.T
        # x(t) = y(t) + alpha y(t-1)
        self.assertClose(x[1:], y[1:] + alpha * y[:-1], atol=1e-12)

    def test_metadata(self):
        path = sample_path(catalog.ma_example(2), 10, seed=5)
        meta = path.metadata
        self.assertEqual(meta['seed'], 5)
        self.assertEqual(meta['bit_generator'], 'PCG64')
        self.assertEqual(meta['truncation'], 2)
        self.assertEqual(meta['model'], 'ma')
        self.assertEqual(path.T, 10)
        self.assertEqual(path.n, 2)

    def test_harmonic_truncation(self):
        m = catalog.harmonic_example()
        self.assertEqual(simulation_truncation(m), 10**4)
        path = sample_path(m, 100, seed=0, L=50)
        self.assertEqual(path.truncation, 50)

    def test_bad_arguments(self):
        m = catalog.ma_example(2)
        self.assertRaises(ConfigError, sample_path, m, 0)
        self.assertRaises(ConfigError, sample_path, m, 10, 0, 0)
        complex_model = catalog.custom('c', [symbols.make_rational([1, 1j])])
        self.assertRaises(ConfigError, sample_path, complex_model, 10)


class TestEmpirical(ArrayMixin, unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.model = catalog.ma_example(0.5)
        cls.path = sample_path(cls.model, 10**5, seed=11)
        cls.gamma = autocov(cls.model, 2)

    def test_autocov(self):
        empirical = empirical_autocov(self.path, 2)
        for k in (0, 1):
            self.assertFrobenius(empirical.lag(k), self.gamma.lag(k), 0.05)
        self.assertLess(np.abs(empirical.lag(2)).max(), 0.02)

    def test_lag_too_large(self):
        self.assertRaises(LagTooLarge, empirical_autocov, self.path, 10**4)
        short = sample_path(self.model, 20)
        self.assertRaises(LagTooLarge, empirical_autocov, short, 2)

    def test_prediction_errors(self):
        for direction in (FORWARD, BACKWARD):
            sol = predict(self.gamma, 2, direction)
            omega = empirical_prediction_error(self.path, sol)
            self.assertFrobenius(omega, sol.error_covariance, 0.05)

    def test_exact_backward_channel(self):
        sol = predict(self.gamma, 1, BACKWARD)
        residuals = prediction_residuals(self.path, sol)
        self.assertEqual(len(residuals), self.path.T - 1)
        # y(0) is recovered exactly from x(1) - y(1)
        self.assertLess(np.abs(residuals[:, 1]).max(), 1e-8)

    def test_window_exceeds_path(self):
        short = sample_path(self.model, 20)
        sol = predict(self.gamma, 2)
        self.assertRaises(WindowExceedsPath, prediction_residuals, short, sol)

    def test_relative_error(self):
        self.assertEqual(relative_error([[1, 0], [0, 1]], np.eye(2)), 0)
        self.assertAlmostEqual(relative_error([3], np.array([4.0])), 0.25)
        self.assertEqual(relative_error([0.5], np.zeros(1)), 0.5)


class TestValidate(unittest.TestCase):

    def test_ma(self):
        report = validate(catalog.ma_example(0.5), 10**5, seed=2, window=2)
        self.assertTrue(report['passed'], report['checks'])
        self.assertEqual(sorted(report['checks']),
                         ['gamma_0', 'gamma_1', 'omega_backward',
                          'omega_forward'])
        self.assertEqual(report['path']['seed'], 2)
        for check in report['checks'].values():
            self.assertLessEqual(check['relative_error'], 0.05)

    def test_tight_tolerance_fails(self):
        report = validate(catalog.ma_example(0.5), 2000, seed=2,
                          tolerance=1e-9)
        self.assertFalse(report['passed'])
