"""
Kinematic data models for singulark.

Typed structures passed between the constraint, Jacobian and solver code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from model.errors import NonPositiveLength
from model.pose import Pose


@dataclass(frozen=True)
class ActuatorVector:
    """Active prismatic coordinates (meters)."""

    q13: float
    q23: float
    q33: float
    q42: float

    def __post_init__(self) -> None:
        for name, value in zip(("q13", "q23", "q33", "q42"), self.as_array()):
            if not math.isfinite(value) or value <= 0:
                raise NonPositiveLength(f"{name} must be a positive length, got {value!r}")

    @classmethod
    def from_array(cls, values: np.ndarray | list[float]) -> ActuatorVector:
        q13, q23, q33, q42 = (float(v) for v in values)
        return cls(q13, q23, q33, q42)

    def as_array(self) -> np.ndarray:
        return np.array([self.q13, self.q23, self.q33, self.q42], dtype=float)

    def to_dict(self) -> dict[str, Any]:
        return {"q13": self.q13, "q23": self.q23, "q33": self.q33, "q42": self.q42}

    def __str__(self) -> str:
        return f"(q13={self.q13:.6f}, q23={self.q23:.6f}, q33={self.q33:.6f}, q42={self.q42:.6f})"


@dataclass(frozen=True, eq=False)
class ConstraintResidual:
    """Left-hand sides of the four squared-length constraints (m²)."""

    values: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_consistent(self, tol: float = 1e-10) -> bool:
        """True when pose and actuator lengths satisfy every constraint."""
        return self.max_abs <= tol

    def __getitem__(self, index: int) -> float:
        return float(self.values[index])


@dataclass(frozen=True, eq=False)
class JacobianPair:
    """
    Forward and inverse Jacobians of the constraint system at one state.

    ``det_jd`` is the scale-free determinant ``det(J_D) / det(J_I)``, the value
    reported and compared against thresholds everywhere.  ``det_jd_raw`` is
    ``det(J_D)`` itself; both share sign and zero set.
    """

    jd: np.ndarray
    """4×4 ∂Φ/∂X with X = (xm, zm, theta, psi)."""

    ji: np.ndarray
    """4×4 ∂Φ/∂q, diagonal."""

    det_jd_raw: float
    det_jd: float

    @property
    def det_ji(self) -> float:
        return float(np.prod(np.diag(self.ji)))


@dataclass(frozen=True)
class ForwardSolution:
    """Result of a forward-kinematics solve with its convergence diagnostics."""

    pose: Pose
    residual: float
    """Max |Φ| at the returned pose (m²)."""

    iterations: int
    damped_steps: int = 0
    """Iterations that needed step halving or a regularized step."""

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.pose.to_dict(),
            "residual": self.residual,
            "iterations": self.iterations,
            "damped_steps": self.damped_steps,
        }
