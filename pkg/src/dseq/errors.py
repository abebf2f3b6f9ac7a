"""Exception types shared across the package.

All domain errors derive from DseqError so callers (and the CLI) can map
them to a single exit path without enumerating subclasses.
"""


class DseqError(Exception):
    """Base class for domain errors raised by this package."""


class SieveCapacityError(DseqError):
    """Requested sieve bound exceeds the supported operational limit."""


class BaseDividesPrimeError(DseqError):
    """The prime divides the radix, so 1/p terminates and has no period."""


class UnsupportedCountsError(DseqError):
    """Operation applied to digit counts of the wrong base."""


class MissingRecordsError(DseqError):
    """Report was built without per-prime records but records are required."""


class NoPrimesError(DseqError):
    """Range contains no usable primes."""


class TargetUnreachableError(DseqError):
    """Plan construction hit the operation cap before reaching the target.

    Carries the closest plan found so callers can inspect or accept it.
    """

    def __init__(self, message, best_plan=None):
        super().__init__(message)
        self.best_plan = best_plan
