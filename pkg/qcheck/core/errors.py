"""Exception hierarchy shared by the algebra kernel, the engines and the CLI."""


class QCheckError(Exception):
    """Base class for every error raised by qcheck."""


class UsageError(QCheckError, ValueError):
    """A precondition, parity or range violation in the caller's input."""


class AlgebraError(QCheckError, ArithmeticError):
    """Misuse of the exact-arithmetic kernel."""


class PolyZeroDivisionError(AlgebraError, ZeroDivisionError):
    """Division by the zero polynomial or the zero rational function."""


class PoleError(AlgebraError):
    """A rational function was evaluated at one of its poles."""


class IntegralityError(AlgebraError):
    """An exact value expected to be p-integral (or integral) is not."""


class TranscriptionError(AlgebraError):
    """A transcribed formula produced an impossible intermediate value."""
