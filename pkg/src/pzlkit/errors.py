"""Exception hierarchy shared across the package."""


class PzlError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceededError(PzlError):
    """An enumeration or search ran past its explicit resource budget.

    ``count`` records how far the operation got before giving up, so callers
    can distinguish "nothing found" from "gave up".
    """

    def __init__(self, message: str, count: int = 0):
        super().__init__(message)
        self.count = count


class EvalError(PzlError):
    """Constraint evaluation failed."""


class EvalTypeError(EvalError):
    """A value of the wrong type reached an operator (e.g. null in a sum)."""


class AmbiguousRegionError(EvalError):
    """region() found several selected instances containing the element."""


class UnknownFamilyError(PzlError):
    """A family name is not declared by the rule."""


class MaskError(PzlError):
    """Problem presentation failed."""


class UnmaskableFamilyError(MaskError):
    """A family's hidden set can express neither its values nor undecided."""


class NotUniqueError(MaskError):
    """No unique problem exists for the requested masking."""
