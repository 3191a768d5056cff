"""Exceptions raised by the series evaluators and samplers."""


class SeriesError(ArithmeticError):
    """Base class for evaluation failures."""


class DenominatorPole(SeriesError, ValueError):
    """A denominator Pochhammer vanishes before the series terminates."""


class NoConvergence(SeriesError):
    """The series diverges, or did not settle within the term budget.

    ``partial`` holds the last SeriesValue reached, when there is one.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class GammaPole(SeriesError):
    """A Gamma ratio is infinite (unpaired numerator pole)."""


class SamplerExhausted(RuntimeError):
    """Rejection sampling failed too many times in a row."""
