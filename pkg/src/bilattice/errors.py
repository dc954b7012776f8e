"""Exception hierarchy shared by every module."""

from __future__ import annotations


class BilatticeError(Exception):
    """Base class for all library errors."""


class ContextError(BilatticeError):
    """Values from incompatible arithmetic or lattice contexts were mixed."""


class ParseError(BilatticeError, ValueError):
    """Malformed scalar or polynomial text."""

    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


class TruncationError(BilatticeError):
    """A moment beyond the stored truncation order was requested."""


class MathematicalError(BilatticeError):
    """A mathematical precondition failed; ``index`` is the offending n when known."""

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message)


class AdmissibilityError(MathematicalError):
    """d_n = a*n + d vanished."""


class RegularityError(MathematicalError):
    """A regularity condition failed."""


class SigmaResidueError(MathematicalError):
    """A quantity expected to be free of (-1)^s carries a nonzero sigma part."""


class DenominatorError(MathematicalError):
    """A parameter choice makes a closed-form denominator vanish."""


class NeedsTwoExtensions(MathematicalError):
    """A computation needs two independent square roots."""

    def __init__(self, discriminants, message: str | None = None):
        self.discriminants = tuple(discriminants)
        super().__init__(
            message
            or "square roots of "
            + ", ".join(str(d) for d in self.discriminants)
            + " need two independent quadratic extensions"
        )
