"""Exception hierarchy for qnet.

Every error raised on bad input derives from :class:`RejectedInputError`,
which is also a :class:`ValueError` so callers using plain ``except
ValueError`` keep working.
"""


class QNetError(Exception):
    """Base class for all qnet errors."""


class RejectedInputError(QNetError, ValueError):
    """Input failed validation (shape, range, finiteness)."""


class CapacityError(QNetError, ValueError):
    """A dimension or count exceeds the configured cap."""


class DegenerateBranchError(QNetError, ValueError):
    """Renormalization requested on a branch with zero norm."""


class DegenerateStateError(QNetError, ValueError):
    """Measurement requested on a state with zero norm."""


class ImpossibleOutcomeError(QNetError, ValueError):
    """A fixed measurement outcome has zero probability."""


class NonInvertibleError(QNetError, ValueError):
    """Network contains connectors, projectors or other non-invertible stages."""


class CompositionError(QNetError, ValueError):
    """Networks cannot be combined with the requested composition law."""
