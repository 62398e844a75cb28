"""Exception types shared across the package."""


class RuijsenaarsError(Exception):
    """Base class for all package-specific errors."""


class InvalidParams(RuijsenaarsError):
    """Parameter triple violates the standing assumptions."""


class StripViolation(RuijsenaarsError):
    """Argument left the analyticity strip required by the evaluation."""


class PoleProximity(RuijsenaarsError):
    """Argument too close to a pole for reliable double-precision evaluation."""


class PrecisionLoss(RuijsenaarsError):
    """Accumulated cancellation exceeds the precision budget."""


class ConeProximity(RuijsenaarsError):
    """Argument too close to the pole/zero cones for the asymptotic formula."""


class QuadratureFailure(RuijsenaarsError):
    """Error estimate above tolerance at the node budget."""


class NonPositiveDecay(RuijsenaarsError):
    """Truncation radius requested for a non-decaying envelope."""


class DimensionTooLarge(RuijsenaarsError):
    """Integration dimension beyond the supported range."""


class CoincidentPoints(RuijsenaarsError):
    """Coordinates closer than the guard distance."""


class ContourViolation(RuijsenaarsError):
    """A shifted argument would cross a kernel pole line."""


class ConditionViolation(RuijsenaarsError):
    """Spectral tuples violate the convergence conditions."""


class ScheduleTooShort(RuijsenaarsError):
    """Regularization schedule has too few entries for extrapolation."""


class ShapeMismatch(RuijsenaarsError):
    """Nested tuple arguments have inconsistent shapes."""


class UnknownSuite(RuijsenaarsError):
    """Verification suite name not in the registry."""


class ConfigError(RuijsenaarsError):
    """Malformed run configuration."""
