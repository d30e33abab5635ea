"""Command line front end.

Every command writes JSON (or CSV where a flat table makes sense) with a
metadata block holding the version, the seed and the tolerances used, so
identical invocations produce byte-identical output.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .catalog import catalog_names, get_model, resolve_model
from .covariance import BACKWARD, FORWARD, autocov, parse_direction
from .cyclicity import (classify, hilbert_matrix, hilbert_singular_values,
                        multi_rule, residual_probe)
from .errors import (ConfigError, InvalidRecord, InvalidWindows,
                     NotPositiveSemidefinite, TimeArrowError)
from .estimation import (DETERMINISM_THRESHOLD, RANK_TOL, check_windows,
                         error_sweep, is_backward_deterministic_numeric,
                         predict)
from .simulate import sample_path, validate
from .spectral import (DEFAULT_GRID, EPS_LOG, check_grid_size, geometric_mean,
                       spectrum_grid, wiener_masani)
from .symbols import CoefficientWindow, symbol_from_record
from .utils.records import csv_text, dumps, read_csv

COMMANDS = ('catalog', 'autocov', 'predict', 'sweep', 'szego', 'wm-det',
            'cyclicity', 'probe', 'hilbert', 'simulate', 'validate',
            'dichotomy')
MODEL_COMMANDS = frozenset(('autocov', 'predict', 'sweep', 'wm-det',
                            'simulate', 'validate', 'dichotomy'))
FORMATS = ('json', 'csv')
DEFAULT_WINDOWS = '1:64'
DEFAULT_T = 10**5
MAX_WINDOW = 4096
LOGGER = logging.getLogger('timearrow.cli')


def parse_windows(text):
    '''``"1,2,4"``, ``"1:64"`` or ``"1:256:8"`` (inclusive ranges)'''
    windows = []
    try:
        for part in str(text).split(','):
            part = part.strip()
            if not part:
                continue
            if ':' in part:
                bits = [int(b) for b in part.split(':')]
                if len(bits) not in (2, 3):
                    raise ValueError(part)
                step = bits[2] if len(bits) == 3 else 1
                windows.extend(range(bits[0], bits[1] + 1, step))
            else:
                windows.append(int(part))
    except ValueError:
        raise InvalidWindows('cannot parse windows "%s"' % text)
    return check_windows(windows)


def read_density(text):
    '''A constant density, or a file with one value per line or the CSV
    written by ``szego`` (last column)'''
    try:
        return float(text)
    except ValueError:
        pass
    if not os.path.isfile(text):
        raise ConfigError('density "%s" is neither a number nor a file'
                          % text, invariant='density-source')
    with open(text) as fp:
        _, header, rows = read_csv(fp.read())
    try:
        float(header[-1])
        rows = [header] + rows
    except (IndexError, ValueError):
        pass
    try:
        values = np.array([float(row[-1]) for row in rows if row])
    except ValueError as exc:
        raise ConfigError('bad density file %s: %s' % (text, exc),
                          invariant='density-source')
    if not len(values):
        raise ConfigError('density file %s is empty' % text,
                          invariant='density-source')
    return values


def read_symbol(text):
    '''Symbol from an inline JSON record or a JSON file'''
    if os.path.isfile(text):
        with open(text) as fp:
            text = fp.read()
    try:
        record = json.loads(text)
    except ValueError:
        raise InvalidRecord('symbol must be a JSON record or file, got "%s"'
                            % text)
    return symbol_from_record(record)


class RunConfig:
    '''Validated options of one command line invocation'''
    def __init__(self, command, model=None, alpha=None, symbol=None,
                 action='list', name=None, window=1, windows=DEFAULT_WINDOWS,
                 direction=FORWARD, grid=DEFAULT_GRID, truncation=None,
                 rank_tol=RANK_TOL, seed=0, T=DEFAULT_T,
                 threshold=DETERMINISM_THRESHOLD, max_lag=None, shifts=200,
                 target=0, n=10, density=None, channel=0, out=None,
                 format='json', workers=1):
        self.command = command
        self.model = model
        self.alpha = alpha
        self.symbol = symbol
        self.action = action
        self.name = name
        self.window = window
        self.windows = windows
        self.direction = direction
        self.grid = grid
        self.truncation = truncation
        self.rank_tol = rank_tol
        self.seed = seed
        self.T = T
        self.threshold = threshold
        self.max_lag = max_lag
        self.shifts = shifts
        self.target = target
        self.n = n
        self.density = density
        self.channel = channel
        self.out = out
        self.format = format
        self.workers = workers
        self.validate()

    @classmethod
    def from_args(cls, args):
        options = dict(vars(args))
        for key in ('verbose', 'quiet'):
            options.pop(key, None)
        return cls(**options)

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError('unknown command "%s"' % self.command,
                              invariant='command')
        if self.format not in FORMATS:
            raise ConfigError('format must be json or csv',
                              invariant='format')
        self.direction = parse_direction(self.direction)
        self.grid = check_grid_size(self.grid)
        self.windows = parse_windows(self.windows)
        if self.windows[-1] > MAX_WINDOW or not 1 <= self.window <= MAX_WINDOW:
            raise InvalidWindows('windows must lie in 1..%d' % MAX_WINDOW)
        if not 0 < self.rank_tol < 1:
            raise ConfigError('--rank-tol must be in (0, 1)',
                              invariant='rank-tolerance-range')
        if not self.threshold > 0:
            raise ConfigError('--threshold must be positive',
                              invariant='threshold-range')
        if self.T < 1:
            raise ConfigError('--T must be positive', invariant='path-length')
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigError('--seed must be a 64-bit unsigned integer',
                              invariant='seed-range')
        if self.truncation is not None and self.truncation < 1:
            raise ConfigError('--truncation must be positive',
                              invariant='truncation-length')
        if self.shifts < 0 or self.target < 0 or self.n < 1:
            raise ConfigError('--shifts and --target must be nonnegative, '
                              '--n positive', invariant='probe-range')
        if self.workers < 1:
            raise ConfigError('--workers must be positive',
                              invariant='workers-range')
        sources = [s for s in (self.model, self.symbol) if s is not None]
        if self.command in MODEL_COMMANDS and self.model is None:
            raise ConfigError('%s needs --model' % self.command,
                              invariant='model-source')
        if self.command in ('cyclicity', 'probe') and len(sources) != 1:
            raise ConfigError('%s needs exactly one of --model and --symbol'
                              % self.command, invariant='model-source')
        if self.command == 'szego' and (self.density is None) == (
                self.model is None):
            raise ConfigError('szego needs exactly one of --density and '
                              '--model', invariant='model-source')

    def get_model(self):
        return resolve_model(self.model, self.alpha)

    def metadata(self, **extra):
        meta = {'version': __version__,
                'command': self.command,
                'seed': self.seed,
                'tolerances': {'rank_tol': self.rank_tol,
                               'threshold': self.threshold,
                               'eps_log': EPS_LOG}}
        if self.model is not None:
            meta['model'] = self.model
        if self.alpha is not None:
            meta['alpha'] = self.alpha
        meta.update(extra)
        return meta


class Output:
    '''A JSON record and, when the command has one, a flat CSV table'''
    def __init__(self, record, header=None, rows=None):
        self.record = record
        self.header = header
        self.rows = rows

    def render(self, config):
        meta = self.record.get('metadata', {})
        if config.format == 'json':
            return dumps(self.record)
        if self.header is None:
            raise ConfigError('%s has no csv output' % config.command,
                              invariant='format')
        flat = dict(meta)
        tolerances = flat.pop('tolerances', {})
        for key, value in tolerances.items():
            flat[key] = value
        return csv_text(self.header, self.rows, flat)


def _check_psd(solution):
    if not solution.is_psd:
        raise NotPositiveSemidefinite(
            '%s error covariance at window %d has eigenvalue %g'
            % (solution.direction, solution.window, solution.min_eigenvalue))
    return solution


def _omega_columns(n):
    return ['omega_%d_%d' % (i, j) for i in range(n) for j in range(n)]


def catalog_command(config):
    if config.action == 'list':
        names = catalog_names()
        return Output({'metadata': config.metadata(), 'models': names},
                      ['name'], [[name] for name in names])
    if config.action != 'show' or not config.name:
        raise ConfigError('usage: catalog list | catalog show <name>',
                          invariant='catalog-action')
    model = get_model(config.name, config.alpha)
    return Output({'metadata': config.metadata(),
                   'model': model.to_record()})


def autocov_command(config):
    model = config.get_model()
    K = config.windows[-1] if config.max_lag is None else config.max_lag
    gamma = autocov(model, K, config.truncation)
    record = {'metadata': config.metadata(max_lag=K,
                                          truncation=config.truncation),
              'gammas': gamma.gammas,
              'truncation_error': gamma.truncation_error}
    return Output(record, ['lag', 'row', 'col', 'value'], gamma.rows())


def predict_command(config):
    model = config.get_model()
    gamma = autocov(model, config.window, config.truncation)
    solution = _check_psd(predict(gamma, config.window, config.direction,
                                  config.rank_tol))
    record = {'metadata': config.metadata(truncation=config.truncation),
              'solution': solution.to_record(),
              'coefficients': solution.coefficients}
    n = gamma.n
    row = [solution.window, solution.direction, solution.trace,
           solution.det] + list(solution.error_covariance.ravel())
    return Output(record, ['window', 'direction', 'trace', 'det'] +
                  _omega_columns(n), [row])


def sweep_command(config):
    model = config.get_model()
    solutions = [_check_psd(s) for s in error_sweep(
        model, config.windows, config.direction, config.rank_tol,
        config.truncation, config.workers)]
    record = {'metadata': config.metadata(truncation=config.truncation),
              'solutions': [s.to_record() for s in solutions]}
    rows = [[s.window, s.direction, s.trace, s.det] +
            list(s.error_covariance.ravel()) for s in solutions]
    return Output(record, ['window', 'direction', 'trace', 'det'] +
                  _omega_columns(model.n), rows)


def szego_command(config):
    if config.density is not None:
        density = read_density(config.density)
        if np.ndim(density) == 0:
            density = np.full(config.grid, density)
        thetas = None
    else:
        grid = spectrum_grid(config.get_model(), config.grid)
        density = grid.channel(config.channel)
        thetas = grid.thetas
    result = geometric_mean(density)
    record = {'metadata': config.metadata(grid=len(density))}
    record.update(result.to_record())
    rows = None
    if thetas is not None:
        rows = zip(thetas, density)
    return Output(record, ['theta', 'density'] if rows else None, rows)


def wm_det_command(config):
    grid = spectrum_grid(config.get_model(), config.grid)
    result = wiener_masani(grid)
    record = {'metadata': config.metadata(grid=config.grid)}
    record.update(result.to_record())
    return Output(record, ['theta', 'det'],
                  zip(grid.thetas, grid.determinants()))


def cyclicity_command(config):
    if config.symbol is not None:
        label = classify(read_symbol(config.symbol))
        return Output({'metadata': config.metadata(),
                       'label': label.to_record()})
    labels = [classify(s) for s in config.get_model().channels]
    return Output({'metadata': config.metadata(),
                   'labels': [label.to_record() for label in labels],
                   'rule': multi_rule(labels).to_record()})


def probe_command(config):
    if config.symbol is not None:
        symbol = read_symbol(config.symbol)
    else:
        symbol = config.get_model().channels[config.channel]
    target = np.zeros(config.target + 1)
    target[config.target] = 1
    curve = residual_probe(symbol, CoefficientWindow(target), config.shifts,
                           config.truncation)
    record = {'metadata': config.metadata(shifts=config.shifts,
                                          target_index=config.target,
                                          truncation=config.truncation),
              'residuals': curve}
    return Output(record, ['shifts', 'residual'], enumerate(curve))


def hilbert_command(config):
    values = hilbert_singular_values(config.n)
    record = {'metadata': config.metadata(n=config.n),
              'singular_values': values,
              'norm': values[0]}
    if config.n <= 8:
        record['matrix'] = hilbert_matrix(config.n)
    return Output(record, ['index', 'singular_value'], enumerate(values))


def simulate_command(config):
    path = sample_path(config.get_model(), config.T, config.seed,
                       config.truncation)
    record = {'metadata': config.metadata(**path.metadata),
              'values': path.values}
    header = ['t'] + ['x_%d' % i for i in range(path.n)]
    rows = ([t] + list(row) for t, row in enumerate(path.values))
    return Output(record, header, rows)


def validate_command(config):
    report = validate(config.get_model(), config.T, config.seed,
                      config.window, config.rank_tol, config.truncation)
    return Output({'metadata': config.metadata(), 'report': report})


def dichotomy_command(config):
    '''Forward and backward errors side by side with the rule verdict and
    the numerical determinism verdict'''
    model = config.get_model()
    windows = config.windows
    forward = [_check_psd(s) for s in error_sweep(
        model, windows, FORWARD, config.rank_tol, config.truncation,
        config.workers)]
    labels = [classify(s) for s in model.channels]
    rule = multi_rule(labels)
    if len(windows) >= 3:
        numeric = is_backward_deterministic_numeric(
            model, windows, config.threshold, config.rank_tol,
            config.truncation, config.workers)
        report = numeric.to_record()
        backward_traces = numeric.traces
        backward = _check_psd(numeric.solutions[-1])
    else:
        report = None
        backward = _check_psd(predict(autocov(model, windows[-1],
                                              config.truncation),
                                      windows[-1], BACKWARD, config.rank_tol))
        backward_traces = [backward.trace]
    record = {'metadata': config.metadata(truncation=config.truncation),
              'model': model.name,
              'window': windows[-1],
              'omega_forward': forward[-1].error_covariance,
              'omega_backward': backward.error_covariance,
              'labels': [label.to_record() for label in labels],
              'rule': rule.to_record(),
              'numeric': report,
              'forward_traces': [s.trace for s in forward]}
    rows = [[p, f.trace, b] for p, f, b in zip(windows, forward,
                                                backward_traces)]
    return Output(record, ['window', 'forward_trace', 'backward_trace'],
                  rows)


HANDLERS = {
    'catalog': catalog_command,
    'autocov': autocov_command,
    'predict': predict_command,
    'sweep': sweep_command,
    'szego': szego_command,
    'wm-det': wm_det_command,
    'cyclicity': cyclicity_command,
    'probe': probe_command,
    'hilbert': hilbert_command,
    'simulate': simulate_command,
    'validate': validate_command,
    'dichotomy': dichotomy_command,
}


def report_error(exc):
    sys.stderr.write('error [%s]: %s\n' % (exc.invariant, exc))
    return exc.code


def run(config):
    '''Execute one command; return the process exit status'''
    try:
        text = HANDLERS[config.command](config).render(config)
    except TimeArrowError as exc:
        return report_error(exc)
    except Exception:
        LOGGER.exception('%s failed', config.command)
        return 2
    if config.out:
        with open(config.out, 'w') as fp:
            fp.write(text)
        LOGGER.info('%s output written to %s', config.command, config.out)
    else:
        sys.stdout.write(text)
    return 0


def _add_common(parser):
    parser.add_argument('--model', '-m',
                        help='catalog model name or JSON model file')
    parser.add_argument('--alpha', type=float,
                        help='parameter of the moving-average models')
    parser.add_argument('--window', '-p', type=int, default=1,
                        help='estimation window')
    parser.add_argument('--windows', '-w', default=DEFAULT_WINDOWS,
                        help='windows: "1,2,4", "1:64" or "1:256:8"')
    parser.add_argument('--direction', '-d', default=FORWARD,
                        help='fwd or bwd')
    parser.add_argument('--grid', type=int, default=DEFAULT_GRID,
                        help='spectral grid size (power of two)')
    parser.add_argument('--truncation', '-L', type=int,
                        help='coefficient truncation')
    parser.add_argument('--rank-tol', type=float, default=RANK_TOL,
                        help='relative rank cutoff of window samples')
    parser.add_argument('--seed', type=int, default=0,
                        help='random seed')
    parser.add_argument('--T', type=int, default=DEFAULT_T,
                        help='sample path length')
    parser.add_argument('--threshold', type=float,
                        default=DETERMINISM_THRESHOLD,
                        help='backward trace below which a process is '
                             'declared deterministic')
    parser.add_argument('--workers', type=int, default=1,
                        help='threads solving windows concurrently')
    parser.add_argument('--out', '-o', help='output file (default stdout)')
    parser.add_argument('--format', '-f', default='json', choices=FORMATS)
    parser.add_argument('--verbose', '-v', action='store_true')
    parser.add_argument('--quiet', '-q', action='store_true')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='timearrow',
        description='Forward and backward estimation errors of rank-one '
                    'stationary processes')
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command')
    commands.required = True
    for name in COMMANDS:
        command = commands.add_parser(name)
        _add_common(command)
        if name == 'catalog':
            command.add_argument('action', nargs='?', default='list',
                                 choices=('list', 'show'))
            command.add_argument('name', nargs='?')
        elif name == 'autocov':
            command.add_argument('--max-lag', '-K', type=int)
        elif name in ('cyclicity', 'probe'):
            command.add_argument('--symbol', '-s',
                                 help='JSON symbol record or file')
        elif name == 'szego':
            command.add_argument('--density',
                                 help='constant density or file of values')
        elif name == 'hilbert':
            command.add_argument('--n', type=int, default=10)
        if name in ('probe', 'szego'):
            command.add_argument('--channel', type=int, default=0)
        if name == 'probe':
            command.add_argument('--shifts', type=int, default=200)
            command.add_argument('--target', type=int, default=0,
                                 help='index k of the unit target e_k')
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger('timearrow').setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger('timearrow').setLevel(logging.WARNING)
    try:
        config = RunConfig.from_args(args)
    except ConfigError as exc:
        return report_error(exc)
    return run(config)
