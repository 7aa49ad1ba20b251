"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(ValueError):
    """Inputs are structurally incompatible (misaligned grids, size mismatch)."""


class NoSolutionError(RuntimeError):
    """A threshold solver found no admissible value in its search range."""


class BudgetError(RuntimeError):
    """A brute-force enumeration would exceed its combinatorial budget."""


class ProfileFailureError(RuntimeError):
    """No valid characteristic-function decay profile exists for this noise."""


class AccuracyError(RuntimeError):
    """A quadrature routine cannot meet its accuracy target."""


class TruncationWarning(UserWarning):
    """Probability mass was lost to grid truncation; carries the lost amount."""

    def __init__(self, lost_mass: float, message: str | None = None):
        self.lost_mass = lost_mass
        super().__init__(message or f"grid truncation lost mass {lost_mass:.3e}")
