"""Backward-shift cyclicity of symbols and backward determinism rules.

A symbol is cyclic when the shifted coefficient windows
``(g_k, g_{k+1}, ...)`` span a dense subspace. Pairing a cyclic channel with
a non-cyclic one makes a rank-one process deterministic in reverse time.
"""
import logging

import numpy as np
from scipy import linalg

from .errors import EmptyLabels, TruncationTooShort
from .estimation import DETERMINISTIC, NOT_DETERMINISTIC
from .symbols import (EXPLICIT, HARMONIC, RATIONAL, backward_shift,
                      boundary_values, taylor_coefficients)

CYCLIC = 'Cyclic'
NON_CYCLIC = 'NonCyclic'
UNKNOWN = 'Unknown'

RATIONAL_PSEUDOCONTINUATION = 'RationalPseudocontinuation'
BUILTIN_KNOWN_CYCLIC = 'BuiltinKnownCyclic'
RESIDUAL_PROBE = 'ResidualProbe'
NO_EVIDENCE = 'None'

PROBE_RANK_TOL = 1e-12
EVIDENCE_GRID = 64
LOGGER = logging.getLogger('timearrow.cyclicity')


class CyclicityLabel:

    def __init__(self, label, evidence=NO_EVIDENCE, probe_data=None,
                 inner_degree=None):
        if label == UNKNOWN and evidence not in (RESIDUAL_PROBE, NO_EVIDENCE):
            raise ValueError('an Unknown label cannot carry %s evidence'
                             % evidence)
        self.label = label
        self.evidence = evidence
        self.probe_data = probe_data
        self.inner_degree = inner_degree

    def __repr__(self):
        return 'CyclicityLabel(%s, %s)' % (self.label, self.evidence)

    def __eq__(self, other):
        return (isinstance(other, CyclicityLabel) and
                self.label == other.label and
                self.evidence == other.evidence)

    def __hash__(self):
        return hash((self.label, self.evidence))

    def to_record(self):
        record = {'label': self.label, 'evidence': self.evidence}
        if self.inner_degree is not None:
            record['inner_degree'] = self.inner_degree
        if self.probe_data is not None:
            record['probe_data'] = self.probe_data
        return record


class DeterminismRuleVerdict:

    def __init__(self, verdict, rule_fired):
        self.verdict = verdict
        self.rule_fired = rule_fired

    def __repr__(self):
        return 'DeterminismRuleVerdict(%s, %s)' % (self.verdict,
                                                   self.rule_fired)

    def to_record(self):
        return {'verdict': self.verdict, 'rule_fired': self.rule_fired}


def _numerator(s):
    return s.num_coeffs if s.kind == RATIONAL else s.coeffs


def unimodular_representative(s, thetas):
    '''Boundary values of ``q = g / conj(g_outer)`` for a rational symbol.

    ``q H2^-`` is the closed span of ``z^-k g``. The inner factor of ``g`` is
    the Blaschke product of its zeros inside the disk.
    '''
    if s.kind not in (RATIONAL, EXPLICIT):
        raise ValueError('unimodular representative needs a rational '
                         'symbol, got %s' % s.kind)
    thetas = np.asarray(thetas, dtype=float)
    z = np.exp(1j * thetas)
    g = boundary_values(s, thetas)
    inner = np.ones_like(z)
    for a in inner_zeros(s):
        inner *= (z - a) / (1 - np.conj(a) * z)
    with np.errstate(divide='ignore', invalid='ignore'):
        outer = g / inner
        return g / np.conj(outer)


def inner_zeros(s):
    '''Zeros of a rational symbol strictly inside the unit disk'''
    zeros = s.zeros()
    return zeros[np.abs(zeros) < 1]


def classify(s):
    '''Cyclicity label of a symbol.

    Rational symbols (polynomials included) have a pseudocontinuation and
    are never cyclic; the harmonic symbol is cyclic.
    '''
    if s.kind in (RATIONAL, EXPLICIT):
        degree = len(inner_zeros(s))
        q = unimodular_representative(s, np.linspace(-np.pi, np.pi,
                                                     EVIDENCE_GRID,
                                                     endpoint=False))
        finite = np.isfinite(q)
        if finite.any():
            LOGGER.debug('%r: inner degree %d, max ||q| - 1| = %.3g', s,
                         degree, np.abs(np.abs(q[finite]) - 1).max())
        return CyclicityLabel(NON_CYCLIC, RATIONAL_PSEUDOCONTINUATION,
                              inner_degree=degree)
    if s.kind == HARMONIC:
        return CyclicityLabel(CYCLIC, BUILTIN_KNOWN_CYCLIC)
    return CyclicityLabel(UNKNOWN, NO_EVIDENCE)


def pair_rule(lg, lh):
    '''Backward determinism of a two-channel rank-one process from the
    cyclicity labels of its channels'''
    labels = {lg.label, lh.label}
    if UNKNOWN in labels:
        return DeterminismRuleVerdict(UNKNOWN, 'unknown-label')
    if labels == {CYCLIC, NON_CYCLIC}:
        return DeterminismRuleVerdict(DETERMINISTIC, 'cyclic-noncyclic')
    if labels == {NON_CYCLIC}:
        return DeterminismRuleVerdict(NOT_DETERMINISTIC, 'both-noncyclic')
    return DeterminismRuleVerdict(UNKNOWN, 'both-cyclic')


def multi_rule(labels):
    '''Backward determinism of an n-channel rank-one process.

    Deterministic as soon as channel 1 pairs deterministically with some
    channel j. A single channel is never backward deterministic: its
    forward and backward errors coincide and are positive.
    '''
    labels = list(labels)
    if not labels:
        raise EmptyLabels('multi_rule needs at least one label')
    if len(labels) == 1:
        return DeterminismRuleVerdict(NOT_DETERMINISTIC, 'scalar')
    first = labels[0]
    for j, label in enumerate(labels[1:], 2):
        if pair_rule(first, label).verdict == DETERMINISTIC:
            return DeterminismRuleVerdict(DETERMINISTIC, 'pair(1,%d)' % j)
    if all(label.label == NON_CYCLIC for label in labels):
        return DeterminismRuleVerdict(NOT_DETERMINISTIC, 'all-noncyclic')
    return DeterminismRuleVerdict(UNKNOWN, 'undecided-see-numeric-sweep')


def model_rule(m):
    return multi_rule([classify(s) for s in m.channels])


def hilbert_matrix(N):
    '''``N x N`` matrix with entries ``1 / (j + k + 1)``'''
    if N < 1:
        raise ValueError('Hilbert matrix size must be positive, got %d' % N)
    return linalg.hilbert(N)


def hilbert_singular_values(N):
    '''Singular values of :func:`hilbert_matrix`, in decreasing order'''
    return linalg.svdvals(hilbert_matrix(N))


def residual_probe(g, target, m, N=None, rank_tol=PROBE_RANK_TOL):
    '''Distance from ``target`` to the span of the first ``j + 1`` backward
    shifts of ``g``, for ``j = 0..m``. ``g`` is truncated to its first ``N``
    coefficients before shifting, so every shift ends at its own index.

    Shifted windows are orthogonalized by Gram-Schmidt with one
    re-orthogonalization pass; a shift adds a direction when its
    orthogonal part exceeds ``rank_tol * |g|``. A projection is kept only
    when it lowers the residual norm, so the curve never grows; it stays
    flat once the shifts stop adding directions.
    '''
    m = int(m)
    size = len(target)
    N = 4 * (m + size) if N is None else int(N)
    if N < m + size:
        raise TruncationTooShort('probe truncation %d shorter than %d '
                                 'shifts plus target length %d'
                                 % (N, m, size))
    window = taylor_coefficients(g, N)
    residual = np.zeros(N, dtype=complex)
    residual[:size] = target.values
    distance = np.linalg.norm(residual)
    basis = np.zeros((N, m + 1), dtype=complex)
    rank = 0
    curve = np.empty(m + 1)
    scale = None
    for j in range(m + 1):
        shifted = backward_shift(window, j).values
        v = np.zeros(N, dtype=complex)
        v[:len(shifted)] = shifted
        if scale is None:
            scale = np.linalg.norm(v)
        Q = basis[:, :rank]
        for _ in range(2):
            v = v - Q @ (Q.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm > rank_tol * scale:
            q = v / norm
            basis[:, rank] = q
            rank += 1
            projected = residual - q * np.vdot(q, residual)
            # components at roundoff level stay in the residual
            if np.linalg.norm(projected) < distance:
                residual = projected
                distance = np.linalg.norm(projected)
        curve[j] = distance
    LOGGER.info('residual probe: %d of %d shifts independent, final '
                'residual %.6g', rank, m + 1, curve[-1])
    return curve
