"""Exception types shared across the package."""


class GFusionError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(GFusionError):
    """Operands have incompatible or invalid shapes."""


class NotPositiveError(GFusionError):
    """An operator expected to be positive semidefinite is not."""


class SingularOperatorError(GFusionError):
    """An operator expected to be invertible is numerically singular."""


class ValidationError(GFusionError):
    """A family violates its structural invariants."""

    def __init__(self, failures):
        self.failures = tuple(failures)
        super().__init__("; ".join(self.failures))


class ControlledStructureError(GFusionError):
    """A per-atom controlled product is not positive, so its root is undefined."""


class HypothesisError(GFusionError):
    """A checked hypothesis does not hold for the given input."""


class NotAFrameError(HypothesisError):
    """The operation requires a family whose lower optimal bound is positive."""


class PairingError(GFusionError):
    """Two families cannot be paired: atoms or controls are misaligned."""


class FamilyDocumentError(GFusionError):
    """A family document is malformed."""
