"""
Exception hierarchy for singulark.

Every error raised on purpose by the toolkit derives from
:class:`SingularkError`, so callers (the CLI in particular) can tell a
kinematic or data problem apart from a programming error.
"""

from __future__ import annotations


class SingularkError(Exception):
    """Base class for all toolkit errors."""


# ──────────────────────────────────────────────────────────────────────────────
# Configuration / geometry
# ──────────────────────────────────────────────────────────────────────────────


class ConfigError(SingularkError, ValueError):
    """A setting or run option is malformed or out of range."""


class InvalidGeometry(SingularkError, ValueError):
    """Geometry file is unreadable, incomplete, or physically meaningless."""


# ──────────────────────────────────────────────────────────────────────────────
# Kinematics
# ──────────────────────────────────────────────────────────────────────────────


class NonPositiveLength(SingularkError):
    """An actuator length evaluated to zero or a non-finite value."""


class NoConvergence(SingularkError):
    """Forward kinematics did not reach the residual tolerance."""

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularJacobian(SingularkError):
    """The forward Jacobian is rank deficient and the damped retry did not help."""

    def __init__(self, message: str, det_jd: float = 0.0):
        super().__init__(message)
        self.det_jd = det_jd


class NearSingular(SingularkError):
    """|det J_D| is below the rank tolerance; the platform is close to a Type II singularity."""

    def __init__(self, message: str, det_jd: float = 0.0):
        super().__init__(message)
        self.det_jd = det_jd


# ──────────────────────────────────────────────────────────────────────────────
# Screws / assembly
# ──────────────────────────────────────────────────────────────────────────────


class DegenerateLimb(SingularkError):
    """A limb has (near) zero length, so its wrench direction is undefined."""


class ModesIdentical(SingularkError, ValueError):
    """Two assembly modes passed for comparison are the same mode."""


# ──────────────────────────────────────────────────────────────────────────────
# Trajectories / benchmark
# ──────────────────────────────────────────────────────────────────────────────


class InvalidSpec(SingularkError, ValueError):
    """Trajectory spec is incomplete or non-finite."""


class ParseError(SingularkError, ValueError):
    """A pose CSV could not be parsed; ``row`` and ``column`` locate the problem."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class NonUniformDt(SingularkError, ValueError):
    """Sample spacing of an ingested run varies by more than the tolerance."""


class InsufficientData(SingularkError, ValueError):
    """Too few samples for the requested smoothing."""


class EmptyInput(SingularkError, ValueError):
    """An aggregate was requested over an empty collection."""


class ZeroReference(SingularkError, ValueError):
    """A normalization reference value is zero."""


class ReportError(SingularkError):
    """Writing a report file failed; the message carries the path."""
