"""Exception hierarchy shared by all lpgeo modules."""


class LpGeoError(Exception):
    """Base class for all computational errors raised by lpgeo."""


class GridMismatch(LpGeoError):
    """Operands live on different grids."""


class DecayViolation(LpGeoError):
    """A line-grid function violates the boundary decay requirement."""


class NotMonotone(LpGeoError):
    """A sampled map is not strictly increasing."""


class NoBracket(LpGeoError):
    """A root-find target falls outside the range of the sampled map."""


class TooFewSlices(LpGeoError):
    """A time-indexed path has too few slices for central differencing."""


class AllMasked(LpGeoError):
    """Too many nodes fell below the singularity mask floor."""


class UnsupportedExponent(LpGeoError):
    """The exponent p is outside the admissible range of the operation."""


class NotInImage(LpGeoError):
    """Input is not in the image of the map being inverted."""


class MixedSign(LpGeoError):
    """A field required to be one-signed changes sign on its support."""


class ImageViolation(LpGeoError):
    """A Schwarz field violates the necessary image constraint."""


class Degenerate(LpGeoError):
    """A 2-form fails the nondegeneracy (Pfaffian) bound."""


class NotClosed(LpGeoError):
    """A differential form fails the closedness residual bound."""


class MissingInverse(LpGeoError):
    """The Young function does not supply an inverse on the positives."""


class NonFiniteIntegral(LpGeoError):
    """A modular integral produced a non-finite value."""


class ZeroDenominator(LpGeoError):
    """A variation formula denominator vanished (broken Young function)."""


class PositivityViolation(LpGeoError):
    """A quantity required to stay above a positive floor dipped below it."""


class StepTooSmall(LpGeoError):
    """Finite-difference noise dominates the requested derivative."""


class NonIntegrableScore(LpGeoError):
    """Score-function quadrature failed to converge under refinement."""


class ConfigError(LpGeoError):
    """Invalid run configuration (CLI exit code 2)."""
