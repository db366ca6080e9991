"""Exception types shared across the package."""


class PovmLabError(Exception):
    """Base class for all povmlab errors."""


class NotHermitian(PovmLabError):
    """Input matrix deviates from Hermiticity beyond tolerance."""


class SpectrumOutOfRange(PovmLabError):
    """An eigenvalue lies below -tol or above 1+tol."""


class DimensionMismatch(PovmLabError):
    """Operators of different dimensions were combined."""


class TrivialEffect(PovmLabError):
    """Operation requires an effect distinct from O and I."""


class NotInvertible(PovmLabError):
    """Effect has an eigenvalue at (or numerically at) zero."""


class TooManyOutcomes(PovmLabError):
    """Subset enumeration over the outcome algebra would exceed 2^20."""


class NotDecidable(PovmLabError):
    """No state reaches outcome probability 1-epsilon on this effect.

    Carries the operator norm that was actually attainable.
    """

    def __init__(self, norm: float, epsilon: float):
        self.norm = float(norm)
        self.epsilon = float(epsilon)
        super().__init__(
            f"norm {norm:.12g} < 1 - epsilon = {1 - epsilon:.12g}; no deciding state exists"
        )


class SequenceNotConcentrating(PovmLabError):
    """State sequence fails to concentrate on the selected partition cell."""


class GramNotPSD(PovmLabError):
    """Gram matrix of the generating sequence is not positive semidefinite."""


class QuadratureFailure(PovmLabError):
    """Adaptive quadrature did not reach the requested tolerance."""


class TruncationTooSmall(PovmLabError):
    """Fock truncation too small for the requested coherent amplitude."""


class DepthInsufficient(PovmLabError):
    """Fat-Cantor bracket straddles the decision boundary at this depth.

    Carries the bracket for the undecided measure.
    """

    def __init__(self, message: str, bracket):
        self.bracket = bracket
        super().__init__(f"{message} (bracket {bracket})")


class ZeroTotalMeasure(PovmLabError):
    """Averaging measure has zero total mass."""
