"""Exception types shared across the simulator."""


class ConfigError(Exception):
    """Invalid or unknown scenario configuration (exit code 2 in the CLI)."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalError(Exception):
    """Numerical failure during evaluation (exit code 3 in the CLI)."""


class ConvergenceError(NumericalError):
    """Iterative solver hit its iteration cap; carries the final residual."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class RankDeficientError(NumericalError):
    """Scheduled channel matrix is (numerically) rank deficient."""


class PatternError(Exception):
    """Beam-hopping pattern construction failed for the given layouts."""
