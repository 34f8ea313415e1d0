"""Exception hierarchy shared by all modules."""


class GsKalmanError(Exception):
    """Base class for all library errors."""


class ShapeError(GsKalmanError):
    """Array dimensions are inconsistent with the operation's contract."""


class ConnectivityError(GsKalmanError):
    """Graph is disconnected; the spectral analysis assumes one zero eigenvalue."""


class DomainError(GsKalmanError):
    """Graph signal is in the wrong domain (vertex vs spectral)."""


class GenerationError(GsKalmanError):
    """Random topology generation could not produce a valid graph."""


class DowndateFailure(GsKalmanError):
    """Rank-1 Cholesky downdate would lose positive definiteness."""


class InputError(GsKalmanError):
    """Invalid scalar/parameter input (non-finite value, bad distribution params)."""


class ConfigError(GsKalmanError):
    """Invalid filter or experiment configuration."""


class NumericalError(GsKalmanError):
    """An unrecoverable numerical failure (singular or indefinite matrix)."""


class UnstableDynamicsError(GsKalmanError):
    """Error dynamics have spectral radius >= 1; no Lyapunov fixed point."""


class IoError(GsKalmanError):
    """Failure reading or writing an artifact file."""
