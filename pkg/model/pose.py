"""
Platform pose, orientation matrix and anchor points.

The mobile platform of the 3UPS+RPU robot has four degrees of freedom:
translation ``xm`` along X_F, translation ``zm`` along Z_F, rotation ``theta``
about Y_M and rotation ``psi`` about Z_M (moving-axes Y-Z' Euler angles).
``y_m`` is identically zero and is not stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from model.geometry import RobotGeometry


@dataclass(frozen=True)
class Pose:
    """Platform pose; meters and radians."""

    xm: float
    zm: float
    theta: float
    psi: float

    @classmethod
    def from_degrees(cls, xm: float, zm: float, theta_deg: float, psi_deg: float) -> Pose:
        return cls(float(xm), float(zm), math.radians(theta_deg), math.radians(psi_deg))

    @classmethod
    def from_array(cls, values: np.ndarray | list[float]) -> Pose:
        xm, zm, theta, psi = (float(v) for v in values)
        return cls(xm, zm, theta, psi)

    def as_array(self) -> np.ndarray:
        return np.array([self.xm, self.zm, self.theta, self.psi], dtype=float)

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    @property
    def psi_deg(self) -> float:
        return math.degrees(self.psi)

    def wrapped(self) -> Pose:
        """Same pose with both angles mapped into (-pi, pi]."""
        return Pose(self.xm, self.zm, _wrap(self.theta), _wrap(self.psi))

    def distance(self, other: Pose) -> float:
        """Max-norm distance: meters for positions, radians for angles."""
        return float(np.max(np.abs(self.as_array() - other.as_array())))

    def to_dict(self) -> dict[str, Any]:
        return {
            "xm": self.xm,
            "zm": self.zm,
            "theta_deg": self.theta_deg,
            "psi_deg": self.psi_deg,
        }

    def __str__(self) -> str:
        return f"(xm={self.xm:.4f}, zm={self.zm:.4f}, θ={self.theta_deg:.2f}°, ψ={self.psi_deg:.2f}°)"


def _wrap(angle: float) -> float:
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


HOME_POSE = Pose(0.0, 0.7, 0.0, 0.0)


# ──────────────────────────────────────────────────────────────────────────────
# Orientation
# ──────────────────────────────────────────────────────────────────────────────


def rotation_matrix(pose: Pose) -> np.ndarray:
    """
    Orientation of {O_m} in {O_f}: rotation about Y_M by theta, then about Z_M by psi.

    Returns
    -------
    np.ndarray
        3×3 matrix ``Ry(theta) @ Rz(psi)``.
    """
    ct, st = math.cos(pose.theta), math.sin(pose.theta)
    cp, sp = math.cos(pose.psi), math.sin(pose.psi)
    return np.array(
        [
            [ct * cp, -ct * sp, st],
            [sp, cp, 0.0],
            [-st * cp, st * sp, ct],
        ]
    )


# ──────────────────────────────────────────────────────────────────────────────
# Anchors
# ──────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class AnchorSet:
    """Fixed and mobile anchor points, all expressed in {O_f} (meters)."""

    a0: np.ndarray
    b0: np.ndarray
    c0: np.ndarray
    d0: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    c1: np.ndarray
    om: np.ndarray

    @property
    def fixed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Fixed anchors of the three UPS limbs."""
        return self.a0, self.b0, self.c0

    @property
    def mobile(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Mobile anchors of the three UPS limbs."""
        return self.a1, self.b1, self.c1


def fixed_anchors(geom: RobotGeometry) -> np.ndarray:
    """Rows A0, B0, C0, D0.  Limb 1 sits on the negative X_F side."""
    return np.array(
        [
            [-geom.r1, 0.0, 0.0],
            [geom.r2 * math.cos(geom.beta_fd), geom.r2 * math.sin(geom.beta_fd), 0.0],
            [geom.r3 * math.cos(geom.beta_fi), -geom.r3 * math.sin(geom.beta_fi), 0.0],
            [geom.ds, 0.0, 0.0],
        ]
    )


def body_anchors(geom: RobotGeometry) -> np.ndarray:
    """Rows of the three mobile anchors in {O_m}."""
    md = geom.mobile_sign * geom.beta_md
    mi = geom.mobile_sign * geom.beta_mi
    return np.array(
        [
            [-geom.rm1, 0.0, 0.0],
            [geom.rm2 * math.cos(md), geom.rm2 * math.sin(md), 0.0],
            [geom.rm3 * math.cos(mi), -geom.rm3 * math.sin(mi), 0.0],
        ]
    )


def platform_origin(pose: Pose) -> np.ndarray:
    return np.array([pose.xm, 0.0, pose.zm])


def anchors(geom: RobotGeometry, pose: Pose) -> AnchorSet:
    """Fixed anchors plus the mobile anchors moved to ``pose``."""
    fixed = fixed_anchors(geom)
    om = platform_origin(pose)
    moved = om + body_anchors(geom) @ rotation_matrix(pose).T
    return AnchorSet(
        a0=fixed[0],
        b0=fixed[1],
        c0=fixed[2],
        d0=fixed[3],
        a1=moved[0],
        b1=moved[1],
        c1=moved[2],
        om=om,
    )
