"""Exception types shared across the package."""


class CcaFusionError(Exception):
    """Base class for all package errors."""


class DimensionError(CcaFusionError, ValueError):
    """Shapes of the inputs do not match the operation's contract."""


class ParameterError(CcaFusionError, ValueError):
    """A hyperparameter or configuration value is out of range."""


class ContractError(CcaFusionError, ValueError):
    """An input violates a documented precondition (non-finite, out of range, stale state)."""


class TrainingError(CcaFusionError, RuntimeError):
    """Optimization diverged or produced non-finite parameters."""
