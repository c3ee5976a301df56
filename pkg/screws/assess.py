"""
Singularity assessment of a single configuration.

Combines det J_D with the six Ω indices and the linear gaps into one
:class:`SingularityAssessment`.  The class rule is deterministic and free of
side effects:

* **TypeII** — Ω_min ≈ 0, linear parts equal and det J_D ≈ 0.
* **ACPoint** — Ω_min ≈ 0 but linear parts differ and det J_D is clearly
  non-zero (partial degeneration of an OTS pair).
* **BelowLimits** — otherwise, when |det J_D| or Ω_min is under its
  experimental limit.
* **Regular** — everything else.

Usage
-----
    from screws.assess import assess
    print(assess(geom, Pose.from_degrees(0.2174, 0.7052, 27.74, 14)))
"""

from __future__ import annotations

import logging

from kinematics.constraints import jacobians
from kinematics.solver import inverse
from model.geometry import RobotGeometry
from model.pose import Pose
from screws.models import PAIRS, AssessmentLimits, Classification, SingularityAssessment
from screws.screws import linear_gap, omega_indices, ots

logger = logging.getLogger(__name__)

DEFAULT_LIMITS = AssessmentLimits()


def classify(det_jd: float, omega_min: float, gap: float, limits: AssessmentLimits = DEFAULT_LIMITS) -> Classification:
    """
    Classify one configuration from its indices.

    Parameters
    ----------
    det_jd : float
        Scale-free det J_D (signed).
    omega_min : float
        Smallest Ω, degrees.
    gap : float
        Linear gap of the pair that gives ``omega_min`` (m).
    """
    omega_zero = omega_min < limits.omega_tol_deg
    det_zero = abs(det_jd) < limits.d_tol

    if omega_zero and gap < limits.v_tol and det_zero:
        return Classification.TYPE_II
    if omega_zero and gap >= limits.v_tol and not det_zero:
        return Classification.AC_POINT
    if abs(det_jd) < limits.lim_detjd or omega_min < limits.lim_omega_deg:
        return Classification.BELOW_LIMITS
    return Classification.REGULAR


def assess(geom: RobotGeometry, pose: Pose, limits: AssessmentLimits | None = None) -> SingularityAssessment:
    """det J_D, all Ω, all gaps and the class of ``pose``."""
    limits = limits or DEFAULT_LIMITS
    act = inverse(geom, pose)
    pair = jacobians(geom, pose, act)
    ots_set = ots(geom, pose)

    omegas = omega_indices(ots_set)
    gaps = {(i, j): linear_gap(ots_set, i, j) for i, j in PAIRS}
    responsible = min(PAIRS, key=lambda p: omegas[p])
    label = classify(pair.det_jd, omegas[responsible], gaps[responsible], limits)

    if ots_set.null_space_dim_two:
        logger.warning("Multi-pair degeneration flagged at %s", pose)

    return SingularityAssessment(
        pose=pose,
        det_jd=pair.det_jd,
        omega_deg=omegas,
        lin_gap=gaps,
        classification=label,
        responsible_pair=responsible,
        null_space_dim_two=ots_set.null_space_dim_two,
        det_jd_raw=pair.det_jd_raw,
    )
