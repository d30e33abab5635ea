import itertools
import math
import unittest

import numpy as np

from timearrow import catalog, symbols
from timearrow.cyclicity import (BUILTIN_KNOWN_CYCLIC, CYCLIC, NO_EVIDENCE,
                                 NON_CYCLIC, RATIONAL_PSEUDOCONTINUATION,
                                 RESIDUAL_PROBE, UNKNOWN, CyclicityLabel,
                                 classify, hilbert_matrix,
                                 hilbert_singular_values, inner_zeros,
                                 model_rule, multi_rule, pair_rule,
                                 residual_probe, unimodular_representative)
from timearrow.errors import EmptyLabels, TruncationTooShort
from timearrow.estimation import (DETERMINISTIC, INCONCLUSIVE,
                                  NOT_DETERMINISTIC,
                                  is_backward_deterministic_numeric)

from tests import ArrayMixin

cyclic = CyclicityLabel(CYCLIC, BUILTIN_KNOWN_CYCLIC)
non_cyclic = CyclicityLabel(NON_CYCLIC, RATIONAL_PSEUDOCONTINUATION)
unknown = CyclicityLabel(UNKNOWN)


class TestClassify(ArrayMixin, unittest.TestCase):

    def test_rational(self):
        for num, degree in (([1, 0.5], 0), ([1, 2], 1), ([1], 0),
                            ([0.1, -0.7, 1], 2)):
            label = classify(symbols.make_rational(num, [1, -0.3]))
            self.assertEqual(label.label, NON_CYCLIC)
            self.assertEqual(label.evidence, RATIONAL_PSEUDOCONTINUATION)
            self.assertEqual(label.inner_degree, degree)

    def test_explicit(self):
        label = classify(symbols.explicit([1, -0.25, 0.5]))
        self.assertEqual(label.label, NON_CYCLIC)

    def test_harmonic(self):
        label = classify(symbols.harmonic())
        self.assertEqual(label, cyclic)
        self.assertEqual(label.to_record(),
                         {'label': CYCLIC, 'evidence': BUILTIN_KNOWN_CYCLIC})

    def test_unknown_evidence(self):
        self.assertRaises(ValueError, CyclicityLabel, UNKNOWN,
                          RATIONAL_PSEUDOCONTINUATION)
        self.assertEqual(CyclicityLabel(UNKNOWN, RESIDUAL_PROBE).label,
                         UNKNOWN)
        self.assertEqual(unknown.evidence, NO_EVIDENCE)

    def test_unimodular(self):
        thetas = np.linspace(-np.pi, np.pi, 200, endpoint=False) + 0.01
        for s in (symbols.make_rational([1, 2]),
                  symbols.make_rational([1, 0.5]),
                  symbols.make_rational([1, -0.4, 2], [1, 0.5]),
                  symbols.make_rational([1, 0.5j])):
            q = unimodular_representative(s, thetas)
            self.assertClose(np.abs(q), np.ones(len(thetas)), atol=1e-10)
        self.assertRaises(ValueError, unimodular_representative,
                          symbols.harmonic(), thetas)

    def test_inner_zeros(self):
        zeros = inner_zeros(symbols.make_rational([1, 2]))
        self.assertClose(zeros, [-0.5])
        self.assertEqual(len(inner_zeros(symbols.make_rational([1, 0.5]))),
                         0)


class TestRules(unittest.TestCase):

    def test_pair_rule(self):
        cases = [
            (cyclic, non_cyclic, DETERMINISTIC, 'cyclic-noncyclic'),
            (non_cyclic, non_cyclic, NOT_DETERMINISTIC, 'both-noncyclic'),
            (cyclic, cyclic, UNKNOWN, 'both-cyclic'),
            (unknown, non_cyclic, UNKNOWN, 'unknown-label'),
            (unknown, cyclic, UNKNOWN, 'unknown-label'),
        ]
        for a, b, verdict, rule in cases:
            self.assertEqual(pair_rule(a, b).verdict, verdict)
            self.assertEqual(pair_rule(a, b).rule_fired, rule)

    def test_pair_rule_symmetric(self):
        labels = (cyclic, non_cyclic, unknown)
        for a, b in itertools.product(labels, repeat=2):
            self.assertEqual(pair_rule(a, b).to_record(),
                             pair_rule(b, a).to_record())

    def test_multi_rule(self):
        verdict = multi_rule([non_cyclic, non_cyclic, cyclic])
        self.assertEqual(verdict.verdict, DETERMINISTIC)
        self.assertEqual(verdict.rule_fired, 'pair(1,3)')
        verdict = multi_rule([non_cyclic, non_cyclic, non_cyclic])
        self.assertEqual(verdict.verdict, NOT_DETERMINISTIC)
        self.assertEqual(verdict.rule_fired, 'all-noncyclic')
        verdict = multi_rule([cyclic, cyclic, unknown])
        self.assertEqual(verdict.verdict, UNKNOWN)
        self.assertEqual(verdict.rule_fired, 'undecided-see-numeric-sweep')

    def test_multi_rule_matches_pair_rule(self):
        labels = (cyclic, non_cyclic)
        for a, b in itertools.product(labels, repeat=2):
            self.assertEqual(multi_rule([a, b]).verdict,
                             pair_rule(a, b).verdict)

    def test_scalar(self):
        for label in (cyclic, non_cyclic, unknown):
            verdict = multi_rule([label])
            self.assertEqual(verdict.verdict, NOT_DETERMINISTIC)
            self.assertEqual(verdict.rule_fired, 'scalar')

    def test_empty(self):
        self.assertRaises(EmptyLabels, multi_rule, [])

    def test_models(self):
        self.assertEqual(model_rule(catalog.ma_example(2)).verdict,
                         NOT_DETERMINISTIC)
        self.assertEqual(model_rule(catalog.ma_example(0.5)).verdict,
                         NOT_DETERMINISTIC)
        self.assertEqual(model_rule(catalog.harmonic_example()).verdict,
                         DETERMINISTIC)
        self.assertEqual(model_rule(catalog.scalar_ma_example()).verdict,
                         NOT_DETERMINISTIC)


class TestConsistency(unittest.TestCase):
    '''Structural rules agree with the numerical determinism sweep'''

    def test_not_deterministic(self):
        for m in (catalog.ma_example(2), catalog.twin_ma_example()):
            self.assertEqual(model_rule(m).verdict, NOT_DETERMINISTIC)
            report = is_backward_deterministic_numeric(m, range(1, 17))
            self.assertEqual(report.verdict, NOT_DETERMINISTIC)

    def test_deterministic(self):
        m = catalog.harmonic_example()
        self.assertEqual(model_rule(m).verdict, DETERMINISTIC)
        report = is_backward_deterministic_numeric(m, [1, 4, 16, 64])
        self.assertIn(report.verdict, (DETERMINISTIC, INCONCLUSIVE))
        self.assertTrue(np.all(np.diff(report.traces) < 0), report.traces)


class TestHilbert(ArrayMixin, unittest.TestCase):

    def test_matrix(self):
        self.assertClose(hilbert_matrix(3), [[1, 1 / 2, 1 / 3],
                                             [1 / 2, 1 / 3, 1 / 4],
                                             [1 / 3, 1 / 4, 1 / 5]])
        self.assertRaises(ValueError, hilbert_matrix, 0)

    def test_two(self):
        values = hilbert_singular_values(2)
        self.assertAlmostEqual(values[0], (4 + np.sqrt(13)) / 6, places=12)

    def test_norm_below_pi(self):
        norms = [hilbert_singular_values(N)[0] for N in (2, 10, 100, 500)]
        self.assertTrue(np.all(np.diff(norms) > 0), norms)
        self.assertLess(norms[-1], np.pi)

    def test_sorted(self):
        values = hilbert_singular_values(20)
        self.assertTrue(np.all(np.diff(values) <= 0))
        self.assertGreaterEqual(values[-1], 0)


class TestResidualProbe(ArrayMixin, unittest.TestCase):

    def test_polynomial_misses_far_target(self):
        g = symbols.make_rational([1, 0.5])
        target = symbols.CoefficientWindow([0, 0, 1])
        curve = residual_probe(g, target, 5)
        self.assertEqual(len(curve), 6)
        self.assertClose(curve, np.ones(6), atol=1e-12)

    def test_symbol_in_its_own_span(self):
        g = symbols.make_rational([1, 0.5])
        target = symbols.taylor_coefficients(g, 2)
        curve = residual_probe(g, target, 3)
        self.assertLess(curve[0], 1e-12)

    def test_harmonic_decreases(self):
        target = symbols.CoefficientWindow([1])
        curve = residual_probe(symbols.harmonic(), target, 200)
        self.assertEqual(len(curve), 201)
        self.assertNonIncreasing(curve)
        self.assertTrue(np.all(np.diff(curve) < 0), curve)
        self.assertLess(curve[200], curve[10])
        self.assertLess(curve[0], 1)

    def test_exact_distances(self):
        g = symbols.make_rational([1, 0.5])
        target = symbols.CoefficientWindow([0, 1, 1])
        curve = residual_probe(g, target, 4)
        # v0 = (1, 0.5), v1 = (0.5), later shifts vanish
        self.assertAlmostEqual(curve[0], math.sqrt(1.8), places=12)
        self.assertAlmostEqual(curve[1], 1, places=12)
        self.assertClose(curve[2:], np.ones(3), atol=1e-12)

    def test_truncation_too_short(self):
        target = symbols.CoefficientWindow([1, 0, 0])
        self.assertRaises(TruncationTooShort, residual_probe,
                          symbols.harmonic(), target, 10, 12)
