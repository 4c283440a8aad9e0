"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed system configuration (bad matrix, unknown generator, ...)."""


class PrecisionError(ArithmeticError):
    """An interval-arithmetic sign test could not be decided.

    Raised by the approximate word-problem backend when a descent test is
    inconclusive at the working precision.  Never silently wrong: callers
    either get a correct answer or this error.
    """


class ResourceLimitError(RuntimeError):
    """A ball/slice enumeration exceeded its configured element cap."""


class NotSphericalError(ValueError):
    """A subset of generators does not span a finite parabolic subgroup."""


class NerveError(ValueError):
    """The homology cellulation was requested for an ineligible system."""


class PoleError(ZeroDivisionError):
    """A rational function was evaluated at a pole."""


class SolverError(RuntimeError):
    """A sparse solve did not reach the requested residual."""
