'''Exceptions raised by timearrow.

Every exception carries the ``invariant`` it reports on and a process
exit ``code``: 1 for configuration errors, 2 for numerical failures.
'''


class TimeArrowError(Exception):
    invariant = 'timearrow'
    exit_code = 2

    def __init__(self, msg, code=None, invariant=None):
        super().__init__(msg)
        self.code = self.exit_code if code is None else code
        if invariant:
            self.invariant = invariant


class ConfigError(TimeArrowError):
    invariant = 'config'
    exit_code = 1


class NumericError(TimeArrowError):
    invariant = 'numeric'
    exit_code = 2


# configuration
class PoleInDisk(ConfigError):
    invariant = 'denominator-roots-outside-disk'


class EmptyNumerator(ConfigError):
    invariant = 'nonzero-numerator'


class ZeroAlpha(ConfigError):
    invariant = 'alpha-nonzero'


class EmptyChannels(ConfigError):
    invariant = 'channels-nonempty'


class EmptyLabels(ConfigError):
    invariant = 'labels-nonempty'


class InvalidGrid(ConfigError):
    invariant = 'grid-power-of-two'


class InvalidWindows(ConfigError):
    invariant = 'windows-increasing'


class UnknownModel(ConfigError):
    invariant = 'model-source'


class InvalidRecord(ConfigError):
    invariant = 'record-format'


# numerics
class TruncationTooShort(NumericError):
    invariant = 'truncation-length'


class LagUnavailable(NumericError):
    invariant = 'lag-available'


class WindowExceedsLags(NumericError):
    invariant = 'window-within-lags'


class DegenerateGamma0(NumericError):
    invariant = 'gamma0-nonzero'


class NotPositiveSemidefinite(NumericError):
    invariant = 'positive-semidefinite'


class NegativeDensity(NumericError):
    invariant = 'density-nonnegative'


class LagTooLarge(NumericError):
    invariant = 'lag-below-tenth-of-path'


class WindowExceedsPath(NumericError):
    invariant = 'path-longer-than-ten-windows'
