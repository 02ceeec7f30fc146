class QECError(Exception):
    """Base class for errors raised by qechannels."""


class InvalidStateError(QECError, ValueError):
    """A state or tone table violates its construction invariants."""


class SynthesisError(QECError, RuntimeError):
    """No collision-free frequency assignment could be produced."""


class BudgetError(QECError, RuntimeError):
    """An enumeration would exceed its term or tuple budget."""


class AliasingWarning(UserWarning):
    """Quadrature grid is too coarse for the frequencies present."""
