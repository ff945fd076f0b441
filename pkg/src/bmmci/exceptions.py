"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class ContractViolationError(RuntimeError):
    """An operation was applied outside its stated contract."""


class ResourceLimitError(RuntimeError):
    """An enumeration or search would exceed the configured cap."""


class UnsupportedRegimeError(ValueError):
    """The requested parameter regime has no defined bound formulas."""


class EstimationError(RuntimeError):
    """A statistical estimate cannot be formed from the available data."""
