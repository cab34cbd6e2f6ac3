"""Exception hierarchy shared by the library and the command line front end."""


class HqsError(Exception):
    """Base class for all errors raised by :mod:`hqs`."""


class InvalidTruncationError(HqsError, ValueError):
    """A Fock truncation is too small or otherwise invalid."""


class DimensionMismatchError(HqsError, ValueError):
    pass


class StructureError(HqsError, ValueError):
    """A matrix does not have the structure a closed-form routine requires."""


class NumericalError(HqsError, ArithmeticError):
    """An eigensolver or integrator produced an unusable result."""


class ConfigError(HqsError, ValueError):
    pass
