"""Exception hierarchy shared by every layer of the lab."""


class LabError(Exception):
    """Base class for all errors raised by froblab."""


class IncompatibleFields(LabError, TypeError):
    pass


class DivisionByZero(LabError, ZeroDivisionError):
    pass


class PrecisionLoss(LabError, ArithmeticError):
    """The requested quantity cannot be certified at the available precision."""


class ResourceLimit(LabError):
    """A configured cap (field size, term count, branch count, ...) was exceeded."""


class NegativeValuation(LabError, ValueError):
    pass


class HenselPreconditionFailed(LabError, ArithmeticError):
    def __init__(self, val_f, val_df):
        self.val_f = val_f
        self.val_df = val_df
        super().__init__(
            f"Hensel precondition fails: val(f(x0)) = {val_f} is not > 2*val(f'(x0)) = {2 * val_df}"
            if val_df is not None and val_f is not None
            else f"Hensel precondition fails: val(f(x0)) = {val_f}, val(f'(x0)) = {val_df}"
        )


class RamifiedFieldUnsupported(LabError):
    pass


class ExtensionRequired(LabError):
    """No solution exists inside the declared field.

    ``level`` is the first digit position at which every branch was obstructed
    and ``depth`` (when set by an orbit builder) is how far the orbit got.
    """

    def __init__(self, message, level=None, depth=None):
        super().__init__(message)
        self.level = level
        self.depth = depth


class ZeroPolynomial(LabError, ValueError):
    pass


class NotDivisible(LabError, ArithmeticError):
    pass


class AllZero(LabError, ValueError):
    pass


class InvalidDegree(LabError, ValueError):
    pass


class NonIntegralCoefficient(LabError, ValueError):
    pass


class InvalidLift(LabError, ValueError):
    """Collects every violation found while validating lift data."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NonConvergence(LabError, RuntimeError):
    pass


class NotPeriodic(LabError, ValueError):
    pass


class DepthInsufficient(LabError, ValueError):
    pass


class ChartInstability(LabError, ValueError):
    pass


class SigmaInapplicable(LabError, ValueError):
    pass


class InvalidOrbit(LabError, ValueError):
    pass


class TheoremViolation(LabError):
    """An experiment observed behaviour the theorems forbid (indicates a bug)."""


class ConfigError(LabError, ValueError):
    pass
