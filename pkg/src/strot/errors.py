"""Exception types raised by the solvers and field containers."""


class FieldShapeError(ValueError):
    """Array shape does not match the grid or the expected component count."""


class ModeOverflow(ValueError):
    """A temporal index shift pushes nonzero content outside the mode range."""


class ResonantForcing(RuntimeError):
    """Nonzero solenoidal forcing sits on a mode where the symbol vanishes.

    Attributes:
        modes: temporal indices ``k`` (in the caller's frame) of the offending
            ``xi = 0`` modes.
    """

    def __init__(self, message, modes=()):
        super().__init__(message)
        self.modes = list(modes)


class SupportViolation(ValueError):
    """Field mass outside the inscribed ball exceeds the rotation budget."""

    def __init__(self, message, outside_fraction=None):
        super().__init__(message)
        self.outside_fraction = outside_fraction
