"""Exception hierarchy."""


class SpinLangevinError(Exception):
    """Base class for all package errors."""


class DomainError(SpinLangevinError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateError(SpinLangevinError, ArithmeticError):
    """Parameters sit on a singular point (pole, zero rate, double root)."""


class NumericalError(SpinLangevinError, ArithmeticError):
    """A numerical consistency check failed (e.g. imaginary residue)."""


class StiffnessError(NumericalError):
    pass


class StepError(NumericalError):
    """Time step too coarse for the requested stepper."""


class NyquistError(NumericalError):
    pass


class WindowError(NumericalError):
    """Series has not decayed by the end of its window."""


class EdgeError(NumericalError):
    pass


class ConfigError(SpinLangevinError, ValueError):
    """Invalid scenario configuration."""
