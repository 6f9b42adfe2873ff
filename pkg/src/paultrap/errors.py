"""Exception hierarchy. Each class maps to one CLI exit code."""


class PaulTrapError(Exception):
    exit_code = 1


class ConfigError(PaulTrapError, ValueError):
    exit_code = 1


class NumericsError(PaulTrapError, RuntimeError):
    """Integration could not hold the Wronskian (or another invariant) in tolerance."""

    exit_code = 2


class SelectionRuleError(PaulTrapError, ValueError):
    exit_code = 3


class SpanError(PaulTrapError, ValueError):
    """Requested time lies outside a mode solution's span."""

    exit_code = 1


class CoverageError(PaulTrapError, ValueError):
    """Quadrature grid does not contain enough of the state."""

    exit_code = 4
