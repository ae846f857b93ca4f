"""Exception types raised across the package."""


class InvalidShiftError(ValueError):
    """Down-shift power outside ``0 <= k <= q``."""


class ShapeError(ValueError):
    """Incompatible matrix dimensions."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured outcome cap."""


class ModelError(ValueError):
    """A channel description violates the model assumptions."""


class UndefinedRateError(ValueError):
    """The requested rate expression is undefined at these parameters."""


class DegenerateMIError(ValueError):
    """Joint covariance is singular, so the Gaussian mutual information diverges."""


class ExistenceError(ValueError):
    """A closed-form quantity does not exist at these parameters."""
