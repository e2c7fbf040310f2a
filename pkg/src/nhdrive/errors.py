"""Exception types shared across the package."""


class NhdriveError(Exception):
    """Base class for all package-specific failures."""


class ConsistencyViolation(NhdriveError, ValueError):
    """A design consistency condition is violated (alpha at a half-integer
    multiple of pi, vanishing eigenvalue gap, ...)."""


class SynthesisSingularity(NhdriveError, ArithmeticError):
    """The field synthesis hit a singular point (|Omega_1| below its floor)."""


class SingularFrame(NhdriveError, ValueError):
    """The eigenvector matrix is singular or too close to singular to invert."""


class DegenerateSpectrum(NhdriveError, ValueError):
    """Two eigenvalues coincide; biorthogonal assembly assumes nondegeneracy."""


class DimensionMismatch(NhdriveError, ValueError):
    """Operands have incompatible dimensions."""


class NonPositiveWidth(NhdriveError, ValueError):
    """A Gaussian dissipation profile needs a strictly positive width."""


class GridMismatch(NhdriveError, ValueError):
    """Two traces do not share the same time grid."""


class GridTooCoarse(NhdriveError, ValueError):
    """Quadrature on the stored grid failed its refinement convergence check."""


class OrderViolation(NhdriveError, ValueError):
    """Propagator arguments out of order (s > t)."""


class ZeroInitialState(NhdriveError, ValueError):
    """The integrator was handed a zero initial state."""


class ZeroInitialProjection(NhdriveError, ValueError):
    """The tracked mode has (numerically) zero weight in the initial state."""


class StepSizeUnderflow(NhdriveError, ArithmeticError):
    """Adaptive stepping collapsed below the resolvable step size."""
