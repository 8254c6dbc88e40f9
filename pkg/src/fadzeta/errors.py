"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`FadError`.
The command line maps these to exit status 1.
"""


class FadError(Exception):
    """Base class for domain errors."""


class ArgumentError(FadError, ValueError):
    """An argument is outside the domain of the operation."""


class InfiniteValuation(FadError):
    """The p-adic valuation of zero was requested."""


class NotConfined(FadError):
    """Some iterate has infinitely many fixed points."""


class PrecisionExhausted(FadError):
    """Certified refinement hit the precision cap without deciding."""


class BudgetExceeded(FadError):
    """A brute-force oracle would exceed its work budget."""


class StabilizationError(FadError):
    """A valuation profile did not settle within the step cap."""


class NotRealizable(FadError):
    """An orbit count came out negative or fractional."""


class Unsupported(FadError):
    """The input is outside what is implemented."""


class IrrationalValue(FadError):
    """Evaluation would leave the rationals."""


class TrivialDynamics(FadError):
    """Zero entropy: orbit asymptotics are meaningless."""


class InvariantViolation(FadError):
    """Two independent routes disagreed."""
