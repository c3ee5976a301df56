"""
Trajectory data models for singulark.

A :class:`TrajectorySpec` fully determines a sample sequence once ``dt`` is
fixed.  Spec files are JSON objects tagged by ``kind``; angles are in degrees
there and in radians everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from model.errors import InvalidSpec
from model.pose import Pose


class TrajectoryKind(str, Enum):
    """Motion families used by the built-in trajectories."""

    LINEAR = "linear-multiaxis"
    ROTATION_SWEEP = "rotation-sweep"
    ELLIPTICAL = "elliptical-xz"

    def __str__(self) -> str:
        return self.value


def _pose_from_json(payload: Any, field_name: str) -> Pose:
    if not isinstance(payload, dict):
        raise InvalidSpec(f"'{field_name}' must be an object with xm, zm, theta_deg, psi_deg")
    try:
        return Pose.from_degrees(
            float(payload["xm"]),
            float(payload["zm"]),
            float(payload.get("theta_deg", 0.0)),
            float(payload.get("psi_deg", 0.0)),
        )
    except KeyError as exc:
        raise InvalidSpec(f"'{field_name}' is missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"'{field_name}' has a non-numeric value: {exc}") from exc


@dataclass(frozen=True)
class TrajectorySpec:
    """
    Description of one trajectory.

    ``end`` is the final pose for linear and elliptical kinds.  A rotation
    sweep keeps ``start`` fixed and only takes ψ from ``end``.  ``semi_axis``
    is the height ``b`` of the elliptical bump on Z_F (meters).
    """

    name: str
    kind: TrajectoryKind
    start: Pose
    end: Pose
    samples: int
    semi_axis: float = 0.0

    def __post_init__(self) -> None:
        if not self.name:
            raise InvalidSpec("trajectory name must not be empty")
        if self.samples < 1:
            raise InvalidSpec(f"{self.name}: samples must be >= 1, got {self.samples}")
        values = [*self.start.as_array(), *self.end.as_array(), self.semi_axis]
        if not all(math.isfinite(v) for v in values):
            raise InvalidSpec(f"{self.name}: start, end and semi_axis must be finite")

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> TrajectorySpec:
        """Build a spec from its JSON form; raises InvalidSpec on any problem."""
        if not isinstance(payload, dict):
            raise InvalidSpec("trajectory spec must be a JSON object")
        try:
            kind = TrajectoryKind(payload["kind"])
        except KeyError as exc:
            raise InvalidSpec("trajectory spec is missing 'kind'") from exc
        except ValueError as exc:
            raise InvalidSpec(f"unknown trajectory kind {payload['kind']!r}") from exc

        try:
            samples = int(payload.get("samples", 400))
            semi_axis = float(payload.get("semi_axis", 0.0))
        except (TypeError, ValueError) as exc:
            raise InvalidSpec(f"bad samples or semi_axis: {exc}") from exc

        return cls(
            name=str(payload.get("name", "")),
            kind=kind,
            start=_pose_from_json(payload.get("start"), "start"),
            end=_pose_from_json(payload.get("end"), "end"),
            samples=samples,
            semi_axis=semi_axis,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "start": self.start.to_dict(),
            "end": self.end.to_dict(),
            "samples": self.samples,
            "semi_axis": self.semi_axis,
        }


@dataclass(frozen=True)
class TrajectorySample:
    """One timed pose of a trajectory."""

    t: float
    pose: Pose
    index: int

    def to_dict(self) -> dict[str, Any]:
        return {"t": self.t, **self.pose.to_dict()}
