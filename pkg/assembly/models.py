"""
Assembly-mode data models for singulark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from model.errors import ConfigError
from model.pose import Pose


@dataclass(frozen=True)
class SearchBox:
    """Bounds of the multi-start region (meters, radians)."""

    xm: tuple[float, float] = (-0.4, 0.4)
    zm: tuple[float, float] = (-0.9, 0.9)
    theta: tuple[float, float] = (-math.pi, math.pi)
    psi: tuple[float, float] = (-math.pi, math.pi)

    def __post_init__(self) -> None:
        for name in ("xm", "zm", "theta", "psi"):
            low, high = getattr(self, name)
            if not (math.isfinite(low) and math.isfinite(high) and low < high):
                raise ConfigError(f"search box bound {name}={low, high} must be finite with low < high")

    @property
    def lower(self) -> list[float]:
        return [self.xm[0], self.zm[0], self.theta[0], self.psi[0]]

    @property
    def upper(self) -> list[float]:
        return [self.xm[1], self.zm[1], self.theta[1], self.psi[1]]


@dataclass(frozen=True)
class AssemblyMode:
    """One real forward-kinematics solution for a fixed actuator vector."""

    pose: Pose
    residual: float
    """Max |Φ| at the pose (m²)."""

    det_jd: float

    @property
    def feasible(self) -> bool:
        """Only solutions above the base plane can be assembled."""
        return self.pose.zm > 0

    @property
    def tan_half(self) -> tuple[float, float, float, float]:
        """(x1, x2, x3, x4) = (xm, zm, tan(θ/2), tan(ψ/2))."""
        return (self.pose.xm, self.pose.zm, math.tan(self.pose.theta / 2), math.tan(self.pose.psi / 2))

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.pose.to_dict(),
            "detJD": self.det_jd,
            "feasible": self.feasible,
            "residual": self.residual,
        }


@dataclass
class ModeCatalog:
    """Deduplicated assembly modes plus search diagnostics."""

    modes: list[AssemblyMode] = field(default_factory=list)
    starts: int = 0
    converged: int = 0
    duplicates: int = 0

    @property
    def feasible(self) -> list[AssemblyMode]:
        return [m for m in self.modes if m.feasible]

    def __len__(self) -> int:
        return len(self.modes)

    def __str__(self) -> str:
        return (
            f"{len(self.modes)} modes ({len(self.feasible)} feasible) from "
            f"{self.starts} starts, {self.converged} converged, {self.duplicates} duplicates"
        )


class ChangeKind(str, Enum):
    """How the platform can move between two assembly modes."""

    SINGULAR = "singular"
    NON_SINGULAR_CANDIDATE = "non-singular candidate"


@dataclass(frozen=True)
class ModePairReport:
    """Comparison of two assembly modes along the straight pose path between them."""

    mode_a: AssemblyMode
    mode_b: AssemblyMode
    kind: ChangeKind
    crossing_fraction: float | None = None
    """Path parameter in [0, 1] where det J_D = 0, if crossed."""

    crossing_pose: Pose | None = None
    crossing_det_jd: float | None = None

    @property
    def sign_a(self) -> int:
        return 1 if self.mode_a.det_jd > 0 else -1

    @property
    def sign_b(self) -> int:
        return 1 if self.mode_b.det_jd > 0 else -1

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode_a": self.mode_a.to_dict(),
            "mode_b": self.mode_b.to_dict(),
            "kind": self.kind.value,
            "crossing_fraction": self.crossing_fraction,
            "crossing_pose": self.crossing_pose.to_dict() if self.crossing_pose else None,
            "crossing_detJD": self.crossing_det_jd,
        }
