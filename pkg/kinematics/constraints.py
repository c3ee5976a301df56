"""
Constraint equations and Jacobians of the 3UPS+RPU robot.

Each row of Φ(X, q) balances a squared actuator length against the squared
anchor distance, written out in expanded form with the a/b/c coefficients of
the robot geometry::

    Φ1 = q13² + a1·CθCψ + 2Rm1·CθCψ·xm − 2Rm1·SθCψ·zm − 2R1·xm − xm² − zm² + a2
    Φ2 = q23² − b1·CθSψ + b2·CθCψ + b3·CθSψ·xm + b4·Sψ − b3·SθSψ·zm
         − b5·CθCψ·xm + b6·Cψ + b5·SθCψ·zm + b7·xm − xm² − zm² + b8
    Φ3 = q33² + c1·CθSψ + c2·CθCψ − c3·CθSψ·xm − c4·Sψ − c5·CθCψ·xm
         + c6·Cψ + c3·SθSψ·zm + c5·SθCψ·zm + c7·xm − xm² − zm² + c8
    Φ4 = q42² − ds² + 2ds·xm − xm² − zm²

J_D = ∂Φ/∂X is written out analytically; J_I = ∂Φ/∂q = diag(2q).

The ``*_batch`` functions take an (N, 4) array of poses so multi-start
searches can evaluate many candidates at once.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from kinematics.models import ActuatorVector, ConstraintResidual, JacobianPair
from model.geometry import RobotGeometry
from model.pose import Pose


class Coefficients(NamedTuple):
    """Geometry-only coefficients of the expanded constraint rows."""

    a: tuple[float, float]
    b: tuple[float, ...]
    c: tuple[float, ...]


def _limb_coefficients(r: float, rm: float, beta_f: float, beta_m: float) -> tuple[float, ...]:
    cf, sf = math.cos(beta_f), math.sin(beta_f)
    cm, sm = math.cos(beta_m), math.sin(beta_m)
    return (
        2 * r * rm * cf * sm,
        2 * r * rm * cf * cm,
        2 * rm * sm,
        2 * r * rm * sf * cm,
        2 * rm * cm,
        2 * r * rm * sf * sm,
        2 * r * cf,
        -(r**2) - rm**2,
    )


@lru_cache(maxsize=32)
def coefficients(geom: RobotGeometry) -> Coefficients:
    """a1..a2, b1..b8 and c1..c8 for ``geom``."""
    return Coefficients(
        a=(2 * geom.r1 * geom.rm1, -(geom.r1**2) - geom.rm1**2),
        b=_limb_coefficients(geom.r2, geom.rm2, geom.beta_fd, geom.mobile_sign * geom.beta_md),
        c=_limb_coefficients(geom.r3, geom.rm3, geom.beta_fi, geom.mobile_sign * geom.beta_mi),
    )


def _trig(poses: np.ndarray) -> tuple[np.ndarray, ...]:
    xm, zm, theta, psi = poses[:, 0], poses[:, 1], poses[:, 2], poses[:, 3]
    return xm, zm, np.cos(theta), np.sin(theta), np.cos(psi), np.sin(psi)


# ──────────────────────────────────────────────────────────────────────────────
# Batch evaluation
# ──────────────────────────────────────────────────────────────────────────────


def constraints_batch(geom: RobotGeometry, poses: np.ndarray, q: np.ndarray) -> np.ndarray:
    """
    Evaluate Φ for many poses against one actuator vector.

    Parameters
    ----------
    poses : np.ndarray
        Shape (N, 4), columns (xm, zm, theta, psi).
    q : np.ndarray
        Shape (4,), (q13, q23, q33, q42).

    Returns
    -------
    np.ndarray
        Shape (N, 4), one constraint row per column.
    """
    poses = np.atleast_2d(np.asarray(poses, dtype=float))
    q = np.asarray(q, dtype=float)
    xm, zm, ct, st, cp, sp = _trig(poses)
    (a1, a2), b, c = coefficients(geom)
    r1, rm1, ds = geom.r1, geom.rm1, geom.ds
    sq = xm**2 + zm**2

    phi = np.empty((poses.shape[0], 4))
    phi[:, 0] = q[0] ** 2 + a1 * ct * cp + 2 * rm1 * ct * cp * xm - 2 * rm1 * st * cp * zm - 2 * r1 * xm - sq + a2
    phi[:, 1] = (
        q[1] ** 2
        - b[0] * ct * sp
        + b[1] * ct * cp
        + b[2] * ct * sp * xm
        + b[3] * sp
        - b[2] * st * sp * zm
        - b[4] * ct * cp * xm
        + b[5] * cp
        + b[4] * st * cp * zm
        + b[6] * xm
        - sq
        + b[7]
    )
    phi[:, 2] = (
        q[2] ** 2
        + c[0] * ct * sp
        + c[1] * ct * cp
        - c[2] * ct * sp * xm
        - c[3] * sp
        - c[4] * ct * cp * xm
        + c[5] * cp
        + c[2] * st * sp * zm
        + c[4] * st * cp * zm
        + c[6] * xm
        - sq
        + c[7]
    )
    phi[:, 3] = q[3] ** 2 - ds**2 + 2 * ds * xm - sq
    return phi


def jd_batch(geom: RobotGeometry, poses: np.ndarray) -> np.ndarray:
    """∂Φ/∂X for many poses; shape (N, 4, 4).  J_D does not depend on q."""
    poses = np.atleast_2d(np.asarray(poses, dtype=float))
    xm, zm, ct, st, cp, sp = _trig(poses)
    (a1, _), b, c = coefficients(geom)
    r1, rm1, ds = geom.r1, geom.rm1, geom.ds

    jd = np.zeros((poses.shape[0], 4, 4))

    # Row 1
    jd[:, 0, 0] = 2 * rm1 * ct * cp - 2 * r1 - 2 * xm
    jd[:, 0, 1] = -2 * rm1 * st * cp - 2 * zm
    jd[:, 0, 2] = -a1 * st * cp - 2 * rm1 * st * cp * xm - 2 * rm1 * ct * cp * zm
    jd[:, 0, 3] = -a1 * ct * sp - 2 * rm1 * ct * sp * xm + 2 * rm1 * st * sp * zm

    # Row 2
    jd[:, 1, 0] = b[2] * ct * sp - b[4] * ct * cp + b[6] - 2 * xm
    jd[:, 1, 1] = -b[2] * st * sp + b[4] * st * cp - 2 * zm
    jd[:, 1, 2] = (
        b[0] * st * sp
        - b[1] * st * cp
        - b[2] * st * sp * xm
        - b[2] * ct * sp * zm
        + b[4] * st * cp * xm
        + b[4] * ct * cp * zm
    )
    jd[:, 1, 3] = (
        -b[0] * ct * cp
        - b[1] * ct * sp
        + b[2] * ct * cp * xm
        + b[3] * cp
        - b[2] * st * cp * zm
        + b[4] * ct * sp * xm
        - b[5] * sp
        - b[4] * st * sp * zm
    )

    # Row 3
    jd[:, 2, 0] = -c[2] * ct * sp - c[4] * ct * cp + c[6] - 2 * xm
    jd[:, 2, 1] = c[2] * st * sp + c[4] * st * cp - 2 * zm
    jd[:, 2, 2] = (
        -c[0] * st * sp
        - c[1] * st * cp
        + c[2] * st * sp * xm
        + c[4] * st * cp * xm
        + c[2] * ct * sp * zm
        + c[4] * ct * cp * zm
    )
    jd[:, 2, 3] = (
        c[0] * ct * cp
        - c[1] * ct * sp
        - c[2] * ct * cp * xm
        - c[3] * cp
        + c[4] * ct * sp * xm
        - c[5] * sp
        + c[2] * st * cp * zm
        - c[4] * st * sp * zm
    )

    # Row 4
    jd[:, 3, 0] = 2 * ds - 2 * xm
    jd[:, 3, 1] = -2 * zm
    return jd


def squared_lengths_batch(geom: RobotGeometry, poses: np.ndarray) -> np.ndarray:
    """Squared anchor distances per limb; Φ with q = 0 negated."""
    return -constraints_batch(geom, poses, np.zeros(4))


# ──────────────────────────────────────────────────────────────────────────────
# Single-state API
# ──────────────────────────────────────────────────────────────────────────────


def constraints(geom: RobotGeometry, pose: Pose, act: ActuatorVector) -> ConstraintResidual:
    """Φ(X, q) at one state; zero iff pose and lengths are consistent."""
    values = constraints_batch(geom, pose.as_array()[None, :], act.as_array())[0]
    return ConstraintResidual(values=values)


def jacobians(geom: RobotGeometry, pose: Pose, act: ActuatorVector) -> JacobianPair:
    """
    Analytic J_D, J_I and their determinants.

    Returns
    -------
    JacobianPair
        ``det_jd`` is ``det(J_D) / det(J_I)``; ``det_jd_raw`` is ``det(J_D)``.
    """
    jd = jd_batch(geom, pose.as_array()[None, :])[0]
    ji = np.diag(2.0 * act.as_array())
    det_raw = float(np.linalg.det(jd))
    return JacobianPair(jd=jd, ji=ji, det_jd_raw=det_raw, det_jd=det_raw / float(np.prod(np.diag(ji))))


def det_jd_batch(geom: RobotGeometry, poses: np.ndarray) -> np.ndarray:
    """Scale-free det J_D at the consistent states of many poses."""
    poses = np.atleast_2d(np.asarray(poses, dtype=float))
    lengths = np.sqrt(squared_lengths_batch(geom, poses))
    return np.linalg.det(jd_batch(geom, poses)) / (16.0 * np.prod(lengths, axis=1))
