"""Exception hierarchy shared by all ciq modules."""


class CIQError(Exception):
    """Base class for every error raised by ciq."""


class SymmetryViolation(CIQError, ValueError):
    """A spectrum does not satisfy f(-n) = conj(f(n))."""


class GridMismatch(CIQError, ValueError):
    pass


class DimensionMismatch(CIQError, ValueError):
    pass


class DegenerateHamiltonian(CIQError, ArithmeticError):
    """The quadratic form cannot be inverted on the constraint surface."""


class InconsistentSystem(CIQError, ArithmeticError):
    """The dynamics is not a Hamiltonian flow of the given quadratic form."""


class ConstraintDrift(CIQError, ValueError):
    """The dynamics does not map the constraint surface into itself."""


class ConstraintViolation(CIQError, ValueError):
    pass


class NotTransverse(CIQError, ValueError):
    pass


class FormatError(CIQError, ValueError):
    """Malformed CIQF file; ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset
