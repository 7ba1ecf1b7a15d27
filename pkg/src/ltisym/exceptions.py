"""Exception types shared across the package.

Decision procedures that merely answer "is there a witness?" return ``None``
on the negative branch instead of raising; the exceptions below are reserved
for requests that cannot be fulfilled (a certificate that does not exist, a
singular transform, malformed input, ...).
"""


class LtisymError(Exception):
    """Base class for all package-specific errors."""


class ParseError(LtisymError, ValueError):
    """Input document is not valid JSON or misses required fields."""


class DimensionError(LtisymError, ValueError):
    """Matrix shapes are inconsistent with the declared dimensions."""


class SingularityError(LtisymError, ArithmeticError):
    """A matrix that must be invertible is numerically singular."""


class SingularResolvent(SingularityError):
    """Transfer function evaluated at (or too close to) a pole."""


class SingularTransform(SingularityError):
    """Input/output or state transform matrix is singular."""


class SingularBlock(SingularityError):
    """A diagonal block of a certificate matrix is singular."""


class SingularA(SingularityError):
    """The state matrix is singular where its inverse is required."""


class MinimalityError(LtisymError):
    """State-space realization is not controllable and observable."""


class Defective(LtisymError):
    """System matrix is not diagonalizable; this structure is unsupported."""


class WrongStructure(LtisymError):
    """Operation requires distinct real eigenvalues of the system matrix."""


class NotSymmetrizable(LtisymError):
    """No nonsingular certificate exists (or none with the requested signature)."""


class Infeasible(LtisymError):
    """A feasibility problem has no solution.

    For sign-consistency problems the attribute ``cycle`` holds one witnessing
    odd cycle as a list of node indices.
    """

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class NotSymmetricMatrix(LtisymError, ValueError):
    """Matrix expected to be symmetric is not, beyond tolerance."""


class NotPositiveDefinite(LtisymError, ValueError):
    """Matrix expected to be positive definite is not."""


class PatternLimitExceeded(LtisymError):
    """Sign-pattern enumeration would exceed the configured size cap."""


class SolverFailure(LtisymError):
    """An LP/SDP backend failed for numerical reasons."""


class PreconditionFailed(LtisymError):
    """The system does not meet the preconditions of the requested synthesis."""


class ExhaustedRetries(LtisymError):
    """Random generation failed to produce a valid sample within the retry cap."""


class IllPosedLoop(LtisymError):
    """Static output feedback loop has no well-posed closed-loop map."""


class UnstableLoopWarning(UserWarning):
    """Closed-loop state matrix is not Hurwitz; simulation may diverge."""
