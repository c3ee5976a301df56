"""
Screw and singularity-assessment data models for singulark.

Screws are 6-vectors split into an angular part ``omega`` and a linear part
``v``, both about O_m and expressed in {O_f}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from model.errors import ConfigError
from model.pose import Pose

PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
"""Index pairs of the six Ω angles, 1-based, in reporting order."""


class Classification(str, Enum):
    """Singularity class of a configuration."""

    REGULAR = "Regular"
    TYPE_II = "TypeII"
    AC_POINT = "ACPoint"
    BELOW_LIMITS = "BelowLimits"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class Screw:
    """Unit twist or wrench (angular part; linear part)."""

    omega: np.ndarray
    v: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.omega, self.v])

    def flipped(self) -> Screw:
        return Screw(omega=-self.omega, v=-self.v)

    def reciprocal(self, other: Screw) -> float:
        """ω_a·v_b + v_a·ω_b; zero when no instantaneous power is transmitted."""
        return float(self.omega @ other.v + self.v @ other.omega)


@dataclass(frozen=True, eq=False)
class OtsSet:
    """Output twist screws with the transmission wrench screws they were built from."""

    ots: tuple[Screw, Screw, Screw, Screw]
    tws: tuple[Screw, Screw, Screw, Screw]
    singular_values: np.ndarray
    """Shape (4, 4): the four singular values of each OTS system, descending."""

    null_space_dim_two: bool = False
    """Some OTS system lost a further rank; that OTS is not unique."""

    def reciprocal_residual(self) -> float:
        """Largest |Ŝ_Oi ∘ Ŝ_Tj| over i ≠ j."""
        return max(
            abs(self.ots[i].reciprocal(self.tws[j]))
            for i in range(4)
            for j in range(4)
            if i != j
        )

    def matrix(self) -> np.ndarray:
        """The four OTS as rows of a 4×6 matrix."""
        return np.vstack([s.as_vector() for s in self.ots])


@dataclass(frozen=True)
class AssessmentLimits:
    """Thresholds used to classify a configuration."""

    omega_tol_deg: float = 0.1
    """Ω below this counts as zero."""

    v_tol: float = 1e-3
    """Linear parts closer than this (m) count as equal."""

    d_tol: float = 1e-4
    """|det J_D| below this counts as zero."""

    lim_detjd: float = 0.015
    """Experimental limit on |det J_D|."""

    lim_omega_deg: float = 1.80
    """Experimental limit on Ω (degrees)."""

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ConfigError(f"{name} must be > 0, got {value!r}")

    def to_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SingularityAssessment:
    """det J_D, Ω angles, linear gaps and the resulting class at one pose."""

    pose: Pose
    det_jd: float
    omega_deg: dict[tuple[int, int], float]
    lin_gap: dict[tuple[int, int], float]
    classification: Classification
    responsible_pair: tuple[int, int]
    null_space_dim_two: bool = False
    det_jd_raw: float = field(default=float("nan"), repr=False)

    @property
    def omega_min(self) -> float:
        return self.omega_deg[self.responsible_pair]

    @property
    def omega34(self) -> float:
        return self.omega_deg[(3, 4)]

    @property
    def gap_at_pair(self) -> float:
        return self.lin_gap[self.responsible_pair]

    def to_dict(self) -> dict[str, Any]:
        """Flat record for CSV rows and JSON output."""
        row: dict[str, Any] = {**self.pose.to_dict(), "detJD": self.det_jd}
        for i, j in PAIRS:
            row[f"omega{i}{j}_deg"] = self.omega_deg[(i, j)]
        for i, j in PAIRS:
            row[f"gap{i}{j}"] = self.lin_gap[(i, j)]
        row["pair"] = f"{self.responsible_pair[0]}{self.responsible_pair[1]}"
        row["classification"] = self.classification.value
        row["null_space_dim_two"] = self.null_space_dim_two
        return row

    def __str__(self) -> str:
        i, j = self.responsible_pair
        return (
            f"[{self.classification.value}] {self.pose} detJD={self.det_jd:.5f} "
            f"Ω{i}{j}={self.omega_min:.4f}° gap={self.gap_at_pair:.4g}"
        )
