"""Exception types shared across the package."""


class SpcorError(Exception):
    """Base class for all spcor-specific errors."""


class ZeroVarianceColumn(SpcorError):
    """A data column is constant and cannot be standardized."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"column {index} has zero sample variance")


class InvalidPair(SpcorError):
    """Variable pair (i, j) violates 0 <= i < j < p."""


class DegenerateResidual(SpcorError):
    """A regression residual collapsed to (near) zero, signalling exact collinearity."""


class DegenerateRSS(SpcorError):
    """A residual sum of squares is non-positive, so log(RSS) is undefined."""


class InvalidAlpha(SpcorError):
    """False-discovery level outside the open interval (0, 1)."""


class GenerationFailed(SpcorError):
    """Random network generation did not produce a valid draw within the retry budget."""


class SingularConcentration(SpcorError):
    """Concentration matrix could not be inverted."""


class CholeskyFailed(SpcorError):
    """Covariance matrix is not positive definite; Cholesky factorization failed."""


class DataFormatError(SpcorError):
    """An input file is unreadable or ill-formed."""
