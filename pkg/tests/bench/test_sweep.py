import unittest

from timearrow import catalog
from timearrow.covariance import BACKWARD, FORWARD, autocov
from timearrow.estimation import SweepRunner

from tests import BENCH


@unittest.skipUnless(BENCH, 'set TIMEARROW_BENCH to run benchmarks')
class BenchmarkSweep(unittest.TestCase):
    __benchmark__ = True
    __number__ = 1

    @classmethod
    def setUpClass(cls):
        cls.gamma = autocov(catalog.harmonic_example(), 512)

    def test_backward_sequential(self):
        SweepRunner(self.gamma, range(1, 513, 8), BACKWARD).run()

    def test_backward_threads(self):
        SweepRunner(self.gamma, range(1, 513, 8), BACKWARD, workers=4).run()

    def test_forward_threads(self):
        SweepRunner(self.gamma, range(1, 513, 8), FORWARD, workers=4).run()
