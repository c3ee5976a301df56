"""
Transmission wrench screws, output twist screws and the Ω angle indices.

For every actuator l the transmission wrench screw (TWS) is the unit wrench
along the limb, written about O_m.  The output twist screw (OTS) of actuator i
is the platform twist with every other actuator locked: it is reciprocal to
the three other TWSs and obeys the platform's motion constraints
(v_y = 0 and cosθ·ω_x − sinθ·ω_z = 0).  Ω_ij is the angle between the axes of
OTS i and OTS j; a Type II singularity drives one Ω to zero with matching
linear parts.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.linalg import svd

from model.errors import DegenerateLimb
from model.geometry import RobotGeometry
from model.pose import Pose, anchors, platform_origin
from screws.models import PAIRS, OtsSet, Screw

logger = logging.getLogger(__name__)

MIN_LIMB_LENGTH = 1e-9
NULL_SPACE_TOL = 1e-12


def tws(geom: RobotGeometry, pose: Pose) -> tuple[Screw, Screw, Screw, Screw]:
    """
    Unit transmission wrench screws of the four actuators about O_m.

    Raises
    ------
    DegenerateLimb
        A limb is shorter than 1e-9 m, so its direction is undefined.
    """
    pts = anchors(geom, pose)
    om = platform_origin(pose)
    screws: list[Screw] = []

    for limb, (fixed, mobile) in enumerate(zip(pts.fixed, pts.mobile), start=1):
        direction = mobile - fixed
        length = float(np.linalg.norm(direction))
        if length < MIN_LIMB_LENGTH:
            raise DegenerateLimb(f"limb {limb} has length {length:.3e} at {pose}")
        unit = direction / length
        screws.append(Screw(omega=unit, v=np.cross(mobile - om, unit)))

    # RPU limb: its line runs through O_m, so the moment about O_m vanishes
    direction = om - pts.d0
    length = float(np.linalg.norm(direction))
    if length < MIN_LIMB_LENGTH:
        raise DegenerateLimb(f"limb 4 has length {length:.3e} at {pose}")
    screws.append(Screw(omega=direction / length, v=np.zeros(3)))
    return screws[0], screws[1], screws[2], screws[3]


def _ots_system(wrenches: list[Screw], theta: float) -> np.ndarray:
    """Rows over unknowns (ω_x, ω_y, ω_z, v_x, v_z)."""
    rows = [np.array([*w.v, w.omega[0], w.omega[2]]) for w in wrenches]
    rows.append(np.array([math.cos(theta), 0.0, -math.sin(theta), 0.0, 0.0]))
    return np.vstack(rows)


def _unit_twist(null_vector: np.ndarray) -> Screw:
    omega = null_vector[:3]
    v = np.array([null_vector[3], 0.0, null_vector[4]])
    scale = float(np.linalg.norm(omega))
    if scale < NULL_SPACE_TOL:
        logger.warning("OTS is a pure translation; normalizing by the full vector")
        scale = float(np.linalg.norm(null_vector))
    omega, v = omega / scale, v / scale
    if omega[int(np.argmax(np.abs(omega)))] < 0:
        omega, v = -omega, -v
    return Screw(omega=omega, v=v)


def ots(geom: RobotGeometry, pose: Pose) -> OtsSet:
    """
    Output twist screws of the four actuators at ``pose``.

    Each OTS is the one-dimensional null space of a 4×5 system (three
    reciprocity rows plus the orientation coupling row), taken from the SVD,
    scaled to |ω| = 1 and signed so its largest ω component is positive.
    """
    wrenches = tws(geom, pose)
    twists: list[Screw] = []
    singular_values = np.zeros((4, 4))
    dim_two = False

    for i in range(4):
        locked = [wrenches[j] for j in range(4) if j != i]
        _, s, vt = svd(_ots_system(locked, pose.theta))
        singular_values[i] = s
        if s[-1] < NULL_SPACE_TOL:
            dim_two = True
            logger.warning("OTS %d null space has dimension two at %s (σ_min=%.2e)", i + 1, pose, s[-1])
        twists.append(_unit_twist(vt[-1]))

    return OtsSet(
        ots=(twists[0], twists[1], twists[2], twists[3]),
        tws=wrenches,
        singular_values=singular_values,
        null_space_dim_two=dim_two,
    )


def omega_indices(ots_set: OtsSet) -> dict[tuple[int, int], float]:
    """
    The six Ω_ij angles (degrees) between undirected OTS axes.

    Returns
    -------
    dict
        ``{(1, 2): Ω12, (1, 3): Ω13, ..., (3, 4): Ω34}``, each in [0°, 90°].
    """
    result: dict[tuple[int, int], float] = {}
    for i, j in PAIRS:
        dot = abs(float(ots_set.ots[i - 1].omega @ ots_set.ots[j - 1].omega))
        result[(i, j)] = math.degrees(math.acos(min(max(dot, 0.0), 1.0)))
    return result


def linear_gap(ots_set: OtsSet, i: int, j: int) -> float:
    """|v_i − v_j| after turning OTS j so that ω_i·ω_j ≥ 0 (meters)."""
    a, b = ots_set.ots[i - 1], ots_set.ots[j - 1]
    if float(a.omega @ b.omega) < 0:
        b = b.flipped()
    return float(np.linalg.norm(a.v - b.v))
