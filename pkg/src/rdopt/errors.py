"""Exception hierarchy shared across the package."""


class RdoptError(Exception):
    """Base class for all package-specific errors."""


class ContractError(RdoptError, ValueError):
    """An operation was called with arguments violating its preconditions."""


class ConfigError(RdoptError, ValueError):
    """Invalid run or algorithm configuration."""


class DomainError(RdoptError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class IntegrationError(RdoptError, ArithmeticError):
    """A quadrature or time integration produced non-finite values."""


class FitError(RdoptError, ArithmeticError):
    """Surrogate model fitting failed (factorization did not succeed)."""


class ReductionError(RdoptError, ArithmeticError):
    """Model order reduction failed (ill-conditioned projected matrices)."""


class IdentificationError(RdoptError, RuntimeError):
    """Parameter identification could not produce a feasible result."""


class EvaluationError(RdoptError, RuntimeError):
    """A cost-function evaluation channel failed during an optimization run."""


class SensitivityError(RdoptError, ArithmeticError):
    """A finite-difference stencil hit a non-evaluable point."""
