"""
Benchmark data models for singulark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from model.pose import Pose
from screws.models import SingularityAssessment
from trajectories.models import TrajectorySample


class Verdict(str, Enum):
    """Outcome of checking a trajectory minimum against an experimental limit."""

    PASS = "PASS"
    FLAG = "FLAG"

    def __str__(self) -> str:
        return self.value


class LimitIndex(str, Enum):
    """Which proximity index a limit check looks at."""

    DET_JD = "detJD"
    OMEGA34 = "omega34"
    BOTH = "both"


class Normalization(str, Enum):
    """Reference value used to normalize a series before differentiating it."""

    INITIAL = "initial"
    MAX = "max"


@dataclass(frozen=True)
class TrajectoryMinima:
    """Minimum |det J_D| and Ω34 reached along one trajectory (for a stopped run, the last values before the stop)."""

    name: str
    min_det_jd: float
    argmin_det_jd: int | None
    min_omega34: float
    argmin_omega34: int | None
    min_omega: float = math.nan
    """Smallest Ω over all six pairs (degrees)."""

    argmin_omega: int | None = None
    stopped_at: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "min_detJD": self.min_det_jd,
            "argmin_detJD": self.argmin_det_jd,
            "min_omega34_deg": self.min_omega34,
            "argmin_omega34": self.argmin_omega34,
            "stopped_at": self.stopped_at,
        }


@dataclass(frozen=True)
class ExperimentalLimits:
    """Practical no-go thresholds averaged from trajectory minima."""

    lim_det_jd: float
    lim_omega_deg: float
    provenance: tuple[TrajectoryMinima, ...] = ()
    mean_det_jd: float = math.nan
    mean_omega_deg: float = math.nan

    @classmethod
    def default(cls) -> ExperimentalLimits:
        """The default experimental limits, 0.015 and 1.80°."""
        return cls(lim_det_jd=0.015, lim_omega_deg=1.80)

    def to_dict(self) -> dict[str, Any]:
        return {
            "lim_detJD": self.lim_det_jd,
            "lim_omega_deg": self.lim_omega_deg,
            "mean_detJD": None if math.isnan(self.mean_det_jd) else self.mean_det_jd,
            "mean_omega_deg": None if math.isnan(self.mean_omega_deg) else self.mean_omega_deg,
            "provenance": [m.to_dict() for m in self.provenance],
        }

    def __str__(self) -> str:
        return f"lim_detJD={self.lim_det_jd:.3f} lim_omega={self.lim_omega_deg:.2f}° ({len(self.provenance)} trajectories)"


@dataclass(frozen=True)
class LimitCheck:
    """Verdict of one trajectory against the limits."""

    name: str
    index: LimitIndex
    verdict: Verdict
    min_det_jd: float
    min_omega34: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "index": self.index.value,
            "verdict": self.verdict.value,
            "min_detJD": self.min_det_jd,
            "min_omega34_deg": self.min_omega34,
        }


@dataclass(frozen=True)
class Crossing:
    """A sign change of det J_D between two samples, refined to the zero."""

    index: int
    """Sample before the sign change."""

    fraction: float
    """Position of the zero between sample ``index`` and ``index + 1``, in [0, 1]."""

    pose: Pose
    det_jd: float
    assessment: SingularityAssessment | None = None


@dataclass
class ScanResult:
    """Per-sample assessments of one trajectory plus what was derived from them."""

    name: str
    samples: list[TrajectorySample]
    assessments: list[SingularityAssessment | None]
    minima: TrajectoryMinima
    failures: dict[int, str] = field(default_factory=dict)
    crossings: list[Crossing] = field(default_factory=list)
    dt: float | None = None

    def series(self, key: str) -> np.ndarray:
        """
        One index as an array over all samples (NaN where the sample failed).

        ``key`` is ``"detJD"``, ``"abs_detJD"`` or a pair name like ``"omega34"``.
        """
        values = []
        for item in self.assessments:
            if item is None:
                values.append(math.nan)
            elif key == "detJD":
                values.append(item.det_jd)
            elif key == "abs_detJD":
                values.append(abs(item.det_jd))
            elif key.startswith("omega") and len(key) == 7:
                values.append(item.omega_deg[(int(key[5]), int(key[6]))])
            else:
                raise KeyError(f"unknown series {key!r}")
        return np.array(values, dtype=float)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=float)


@dataclass(frozen=True)
class RateComparison:
    """Mean normalized rates of change of |det J_D| and Ω34 (%/s)."""

    name: str
    mean_rate_det_jd: float
    mean_rate_omega34: float

    @property
    def difference(self) -> float:
        """Negative when Ω34 falls faster than |det J_D|."""
        return self.mean_rate_omega34 - self.mean_rate_det_jd

    @property
    def omega_faster(self) -> bool:
        return self.mean_rate_omega34 < self.mean_rate_det_jd

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "mean_rate_detJD": self.mean_rate_det_jd,
            "mean_rate_omega34": self.mean_rate_omega34,
            "difference": self.difference,
        }


@dataclass(frozen=True)
class ConventionRow:
    """One verification endpoint under one mobile-anchor convention."""

    name: str
    convention: str
    det_jd: float
    omega34: float
    reference_det_jd: float
    reference_omega34: float
    within_tolerance: bool
    error: float
    """Sum of both deviations, each divided by its tolerance."""

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ConventionReport:
    """Which mobile-anchor convention reproduces the reference VT values better."""

    rows: tuple[ConventionRow, ...]
    closer: dict[str, str]
    overall: str

    def __str__(self) -> str:
        lines = [f"closer convention overall: {self.overall}"]
        for row in self.rows:
            mark = "ok" if row.within_tolerance else "OUT"
            lines.append(
                f"  {row.name} [{row.convention}] detJD={row.det_jd:.4f} (ref {row.reference_det_jd:.4f}) "
                f"Ω34={row.omega34:.2f}° (ref {row.reference_omega34:.2f}°) {mark}"
            )
        return "\n".join(lines)
