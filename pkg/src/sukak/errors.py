"""Exception types raised across the package."""


class SukakError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(SukakError):
    """An iterative matrix factorization failed to converge."""


class NotSymmetric(SukakError):
    """Matrix is not (complex) symmetric within tolerance."""


class NotUnitary(SukakError):
    """Matrix is not unitary within tolerance."""

    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"unitarity residual {residual:.3e} above tolerance")


class DimensionOdd(SukakError):
    """Even matrix dimension required."""


class DimensionMismatch(SukakError):
    """Matrix dimension does not match the symmetric pair."""


class SumNotInteger(SukakError):
    """Coordinate sum of a type-A angle vector is not close to an integer."""


class SignsInTypeA(SukakError):
    """A signed permutation with negative entries was used where type A requires plain permutations."""


class NotInAlcove(SukakError):
    """Vector violates the closed-alcove inequalities of its pair type."""


class PairingFailure(SukakError):
    """Eigenvalues could not be grouped into multiplicity-two pairs."""


class SpectralMismatch(SukakError):
    """Spectral cross-check between two invariant computations failed."""


class SynthesisFailure(SukakError):
    """A synthesis solver exhausted its restart budget without a verified factorization."""


class SolverFailure(SukakError):
    """Numerical breakdown in a nonlinear solve."""


class BoundExceeded(SukakError):
    """Enumeration size limit exceeded."""


class ParseError(SukakError):
    """Malformed input file."""
