"""Ready-made rank-one process models
"""
import json
import os

from .errors import EmptyChannels, InvalidRecord, UnknownModel, ZeroAlpha
from .symbols import constant, harmonic, make_rational, symbol_from_record
from .utils.records import dumps

DEFAULT_ALPHA = 2.0


class ProcessModel:
    '''An n-channel process driven by one unit-variance white noise.

    Channel ``i`` is ``x_i(t) = sum_l g_i[l] w(t - l)`` with ``g_i`` the
    coefficients of ``channels[i]``.
    '''
    noise_variance = 1.0

    def __init__(self, name, channels):
        channels = tuple(channels)
        if not channels:
            raise EmptyChannels('model "%s" has no channels' % name)
        self.name = str(name)
        self.channels = channels

    def __repr__(self):
        return 'ProcessModel(%s, n=%d)' % (self.name, self.n)

    def __eq__(self, other):
        return (isinstance(other, ProcessModel) and
                self.name == other.name and
                self.channels == other.channels)

    def __hash__(self):
        return hash((self.name, self.channels))

    @property
    def n(self):
        return len(self.channels)

    @property
    def is_real(self):
        return all(s.is_real for s in self.channels)

    def to_record(self):
        return {'name': self.name,
                'channels': [s.to_record() for s in self.channels]}


def custom(name, channels):
    return ProcessModel(name, channels)


def ma_example(alpha=DEFAULT_ALPHA):
    '''Bivariate moving average ``x = w(t) + alpha w(t-1)``, ``y = w(t)``.

    Forward error covariance is ``[[1, 1], [1, 1]]`` and backward error
    covariance ``[[alpha^2, 0], [0, 0]]``, both singular.
    '''
    if not alpha:
        raise ZeroAlpha('moving-average example needs alpha != 0')
    return ProcessModel('ma', (make_rational([1, alpha]), constant(1)))


def ma_reversed_example(alpha=DEFAULT_ALPHA):
    '''Backward realization of :func:`ma_example` run forward.

    ``x = alpha v(t) + v(t-1)``, ``y = v(t-1)``: the time reversal of the
    moving-average example, driven by its backward innovations ``v``.
    '''
    if not alpha:
        raise ZeroAlpha('moving-average example needs alpha != 0')
    return ProcessModel('ma-reversed',
                        (make_rational([alpha, 1]), make_rational([0, 1])))


def harmonic_example():
    '''``x = sum_l w(t-l) / (1+l)``, ``y = w(t)``.

    Regular in forward time yet determined by its infinite future.
    '''
    return ProcessModel('harmonic', (harmonic(), constant(1)))


def scalar_ma_example():
    return ProcessModel('scalar-ma', (make_rational([1, 0.5]),))


def twin_ma_example():
    g = make_rational([1, 0.5])
    return ProcessModel('twin-ma', (g, g))


CATALOG = {
    'ma': ma_example,
    'ma-reversed': ma_reversed_example,
    'harmonic': harmonic_example,
    'scalar-ma': scalar_ma_example,
    'twin-ma': twin_ma_example,
}
PARAMETRIC = frozenset(('ma', 'ma-reversed'))


def catalog_names():
    return sorted(CATALOG)


def get_model(name, alpha=None):
    '''Catalog model by name; ``alpha`` only applies to the MA entries'''
    try:
        factory = CATALOG[name]
    except KeyError:
        raise UnknownModel('no catalog model "%s", available: %s'
                           % (name, ', '.join(catalog_names())))
    if name in PARAMETRIC:
        return factory(DEFAULT_ALPHA if alpha is None else alpha)
    return factory()


def model_from_record(record):
    if not isinstance(record, dict) or 'channels' not in record:
        raise InvalidRecord('model record needs "name" and "channels"')
    channels = record['channels']
    if not isinstance(channels, list):
        raise InvalidRecord('"channels" must be a list of symbol records')
    return ProcessModel(record.get('name', 'custom'),
                        [symbol_from_record(r) for r in channels])


def load_model(path):
    '''Read a JSON model file'''
    try:
        with open(path) as fp:
            record = json.load(fp)
    except ValueError as exc:
        raise InvalidRecord('model file %s is not valid JSON: %s'
                            % (path, exc))
    return model_from_record(record)


def dump_model(model, path):
    with open(path, 'w') as fp:
        fp.write(dumps(model.to_record()))


def resolve_model(source, alpha=None):
    '''Catalog name or path of a JSON model file'''
    if source in CATALOG:
        return get_model(source, alpha)
    if os.path.isfile(source):
        return load_model(source)
    raise UnknownModel('"%s" is neither a catalog model (%s) nor a model '
                       'file' % (source, ', '.join(catalog_names())))
