"""Exception types raised across the package."""


class RangeDimError(Exception):
    """Base class for all package errors."""


class SizingError(RangeDimError, ValueError):
    """A dimension is zero or exceeds the configured maximum."""


class ShapeError(RangeDimError, ValueError):
    """Operands have incompatible shapes."""


class SymmetryError(RangeDimError, ValueError):
    """A matrix that must be Hermitian is not, within tolerance."""


class NegativityError(RangeDimError, ValueError):
    """A matrix that must be positive semidefinite has a negative eigenvalue."""


class NormalizationError(RangeDimError, ValueError):
    """A state vector does not have unit norm."""


class ValidationError(RangeDimError, ValueError):
    """A density operator invariant is violated.

    ``invariant`` names the violated condition (``"hermitian"``, ``"trace"``,
    ``"psd"``, ``"finite"``, ``"shape"``).
    """

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant
        self.detail = detail


class DomainError(RangeDimError, ValueError):
    """An argument lies outside the operation's domain."""


class OrderingError(RangeDimError, ValueError):
    """A construction was called outside its dimension ordering."""


class AmplitudeError(RangeDimError, ValueError):
    """A construction amplitude came out zero."""


class InfeasibleError(RangeDimError):
    """No state with the requested rank triple and correlation status exists."""

    def __init__(self, triple, kind, reasons):
        self.triple = tuple(triple)
        self.kind = kind
        self.reasons = list(reasons)
        super().__init__(
            f"no {kind} state with ranks {self.triple}: {', '.join(self.reasons)}"
        )


class ConstructionError(RangeDimError, RuntimeError):
    """A witness construction failed to meet its postcondition."""
