"""
Geometry of the 3UPS+RPU parallel robot.

The eleven constants that place the fixed and mobile anchors, loaded from a
JSON file whose keys are exactly::

    R1, R2, R3, Rm1, Rm2, Rm3, betaFD_deg, betaFI_deg, betaMD_deg, betaMI_deg, ds

plus the optional boolean ``mirror_mobile``.  Angles are degrees in the file
and radians in memory.

Usage
-----
    from model.geometry import default_geometry, load_geometry
    geom = load_geometry("config/default_geometry.json")
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from model.errors import InvalidGeometry

logger = logging.getLogger(__name__)

GEOMETRY_KEYS = (
    "R1",
    "R2",
    "R3",
    "Rm1",
    "Rm2",
    "Rm3",
    "betaFD_deg",
    "betaFI_deg",
    "betaMD_deg",
    "betaMI_deg",
    "ds",
)


@dataclass(frozen=True)
class RobotGeometry:
    """
    Anchor radii, anchor angles and the RPU offset of the robot.

    Defaults are the prototype values (radii in meters, angles in radians).
    """

    r1: float = 0.4
    """Fixed-platform radius of limb 1 anchor A0."""

    r2: float = 0.4
    """Fixed-platform radius of limb 2 anchor B0."""

    r3: float = 0.4
    """Fixed-platform radius of limb 3 anchor C0."""

    rm1: float = 0.3
    """Mobile-platform radius of limb 1 anchor."""

    rm2: float = 0.3
    """Mobile-platform radius of limb 2 anchor."""

    rm3: float = 0.3
    """Mobile-platform radius of limb 3 anchor."""

    beta_fd: float = math.radians(90.0)
    """Angle of B0 from X_F, counterclockwise."""

    beta_fi: float = math.radians(45.0)
    """Angle of C0 from X_F, clockwise."""

    beta_md: float = math.radians(50.0)
    """Angle of the limb 2 mobile anchor from X_M, counterclockwise."""

    beta_mi: float = math.radians(90.0)
    """Angle of the limb 3 mobile anchor from X_M, clockwise."""

    ds: float = 0.15
    """Distance from O_f to D0 along X_F."""

    mirror_mobile: bool = False
    """Measure the mobile-side angles with the opposite sense."""

    def __post_init__(self) -> None:
        values = {
            "R1": self.r1,
            "R2": self.r2,
            "R3": self.r3,
            "Rm1": self.rm1,
            "Rm2": self.rm2,
            "Rm3": self.rm3,
            "ds": self.ds,
        }
        for key, value in values.items():
            if not math.isfinite(value) or value <= 0:
                raise InvalidGeometry(f"{key} must be a positive finite length, got {value!r}")
        for key in ("beta_fd", "beta_fi", "beta_md", "beta_mi"):
            if not math.isfinite(getattr(self, key)):
                raise InvalidGeometry(f"{key} must be finite")

    @property
    def mobile_sign(self) -> float:
        """+1 for the standard mobile-anchor convention, -1 when mirrored."""
        return -1.0 if self.mirror_mobile else 1.0

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RobotGeometry:
        """Build from the JSON key set (degrees for angles)."""
        missing = [key for key in GEOMETRY_KEYS if key not in data]
        if missing:
            raise InvalidGeometry(f"geometry is missing keys: {', '.join(missing)}")
        unknown = sorted(set(data) - set(GEOMETRY_KEYS) - {"mirror_mobile"})
        if unknown:
            raise InvalidGeometry(f"geometry has unknown keys: {', '.join(unknown)}")
        try:
            return cls(
                r1=float(data["R1"]),
                r2=float(data["R2"]),
                r3=float(data["R3"]),
                rm1=float(data["Rm1"]),
                rm2=float(data["Rm2"]),
                rm3=float(data["Rm3"]),
                beta_fd=math.radians(float(data["betaFD_deg"])),
                beta_fi=math.radians(float(data["betaFI_deg"])),
                beta_md=math.radians(float(data["betaMD_deg"])),
                beta_mi=math.radians(float(data["betaMI_deg"])),
                ds=float(data["ds"]),
                mirror_mobile=bool(data.get("mirror_mobile", False)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidGeometry):
                raise
            raise InvalidGeometry(f"geometry values must be numeric: {exc}") from exc

    def to_dict(self) -> dict[str, Any]:
        """Serialize to the JSON key set."""
        data: dict[str, Any] = {
            "R1": self.r1,
            "R2": self.r2,
            "R3": self.r3,
            "Rm1": self.rm1,
            "Rm2": self.rm2,
            "Rm3": self.rm3,
            "betaFD_deg": math.degrees(self.beta_fd),
            "betaFI_deg": math.degrees(self.beta_fi),
            "betaMD_deg": math.degrees(self.beta_md),
            "betaMI_deg": math.degrees(self.beta_mi),
            "ds": self.ds,
        }
        if self.mirror_mobile:
            data["mirror_mobile"] = True
        return data

    def mirrored(self) -> RobotGeometry:
        """Same robot with the other mobile-anchor sign convention."""
        return RobotGeometry(**{**self.__dict__, "mirror_mobile": not self.mirror_mobile})


def default_geometry() -> RobotGeometry:
    """Prototype geometry."""
    return RobotGeometry()


def load_geometry(path: str | Path) -> RobotGeometry:
    """
    Load a geometry JSON file.

    Raises
    ------
    InvalidGeometry
        File missing, not JSON, keys wrong, or values invalid.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidGeometry(f"cannot read geometry file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InvalidGeometry(f"geometry file {path} is not UTF-8 text: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidGeometry(f"geometry file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidGeometry(f"geometry file {path} must hold a JSON object")

    geom = RobotGeometry.from_dict(data)
    logger.debug("Loaded geometry from %s: %s", path, geom.to_dict())
    return geom
