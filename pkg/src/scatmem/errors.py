"""Exception hierarchy for scatmem."""


class ScatMemError(Exception):
    """Base class for all errors raised by this package."""


class NormalizationError(ScatMemError, ValueError):
    """A state vector cannot be normalized (zero or non-finite)."""


class NotUnitaryError(ScatMemError, ValueError):
    """A matrix that must be unitary is not."""


class SchedulingError(ScatMemError):
    """A rotation cannot be realized with the configured wavenumber bounds.

    ``interval`` holds the feasible single-event phase interval ``(lo, hi)``
    when known.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class ReadoutError(ScatMemError):
    """Base class for failures while extracting interference observables."""


class IllConditionedReadout(ReadoutError):
    """The interference term is too weak to invert (|sin(phase)| too small)."""


class InsufficientData(ReadoutError):
    """Too few intensity samples for a least-squares fit."""


class InconsistentObservables(ReadoutError):
    """Observables do not describe any pure state."""


class ProtocolError(ScatMemError):
    """A memory operation was requested in a state that forbids it."""


class SolverError(ScatMemError):
    """The matching-condition linear system is singular."""
