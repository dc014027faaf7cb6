"""Exception hierarchy for the engine.

ConfigError maps to CLI exit code 1, NumericsError (and subclasses) to exit
code 2.
"""


class ConfigError(ValueError):
    """Invalid configuration: bad value, unknown key, or parse failure."""


class NumericsError(RuntimeError):
    """A numerical procedure failed or a numerical precondition is violated."""


class QuadratureError(NumericsError):
    """A quadrature did not converge to the requested tolerance."""
