import os
import shutil
import tempfile

import numpy as np

BENCH = bool(os.environ.get('TIMEARROW_BENCH'))


class TempDir:
    path = None

    def __enter__(self):
        self.path = tempfile.mkdtemp(prefix='timearrow-')
        return self

    def __exit__(self, *args):
        if self.path:
            shutil.rmtree(self.path, ignore_errors=True)
            self.path = None

    def join(self, name):
        return os.path.join(self.path, name)


class ArrayMixin:
    '''Assertions on numpy arrays for TestCase classes'''

    def assertClose(self, actual, expected, atol=1e-12, rtol=0):
        np.testing.assert_allclose(np.asarray(actual), np.asarray(expected),
                                   atol=atol, rtol=rtol)

    def assertFrobenius(self, actual, expected, tol):
        expected = np.asarray(expected)
        gap = np.linalg.norm(np.asarray(actual) - expected)
        scale = np.linalg.norm(expected)
        self.assertLessEqual(gap, tol * scale,
                             'relative Frobenius gap %g > %g'
                             % (gap / scale, tol))

    def assertPSD(self, matrix, tol):
        matrix = np.asarray(matrix)
        self.assertClose(matrix, matrix.conj().T, atol=tol)
        self.assertGreaterEqual(np.linalg.eigvalsh(matrix).min(), -tol)

    def assertNonIncreasing(self, values, slack=0):
        values = np.asarray(values)
        self.assertTrue(np.all(np.diff(values) <= slack),
                        'sequence increases by %g'
                        % np.diff(values).max())
