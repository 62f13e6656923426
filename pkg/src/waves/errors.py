"""This module holds the exceptions raised by the wave library."""


class WaveError(Exception):
    """Base class of every failure raised by the wave library."""


class InvalidParameter(WaveError, ValueError):
    """A physical or numerical parameter violates a precondition."""


class NoConvergence(WaveError):
    """An iterative solver did not reach its tolerance."""


class NoRoot(WaveError):
    """A bracketing search found no sign change."""


class PeakonProximity(WaveError):
    """The profile density came too close to the peakon bound."""


class NonPeriodic(WaveError):
    """The integrated profile failed to close up after one period."""


class InsufficientFourier(WaveError):
    """The profile does not carry enough Fourier coefficients."""


class EigensolverFailure(WaveError):
    """The dense eigensolver failed."""


class NotFound(WaveError):
    """No eigenvalue crossing exists where one was expected."""
