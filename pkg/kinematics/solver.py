"""
Inverse, forward and velocity kinematics of the 3UPS+RPU robot.

* :func:`inverse` — closed form, one actuator length per limb.
* :func:`solve_forward` / :func:`forward` — damped Newton on Φ(X, q) = 0 with
  the analytic J_D.
* :func:`forward_velocity` — Ẋ from q̇ through J_D Ẋ + J_I q̇ = 0.

Usage
-----
    from kinematics.solver import inverse, forward
    act = inverse(geom, pose)
    pose_back = forward(geom, act, seed=pose)
"""

from __future__ import annotations

import logging

import numpy as np

from kinematics.constraints import constraints_batch, det_jd_batch, jacobians, jd_batch
from kinematics.models import ActuatorVector, ForwardSolution
from model.errors import NearSingular, NonPositiveLength, NoConvergence, SingularJacobian
from model.geometry import RobotGeometry
from model.pose import Pose, anchors

logger = logging.getLogger(__name__)

RANK_TOL = 1e-8
"""|det J_D| (scale-free) below which a linear solve is treated as singular."""

RESIDUAL_TOL = 1e-10
STEP_TOL = 1e-10
MAX_ITERATIONS = 100
MAX_HALVINGS = 8
_LEVENBERG_LAMBDA = 1e-6


# ──────────────────────────────────────────────────────────────────────────────
# Inverse kinematics
# ──────────────────────────────────────────────────────────────────────────────


def inverse(geom: RobotGeometry, pose: Pose) -> ActuatorVector:
    """
    Actuator lengths that place the platform at ``pose``.

    Raises
    ------
    NonPositiveLength
        A limb collapses to zero length.
    """
    pts = anchors(geom, pose)
    lengths = [
        float(np.linalg.norm(pts.a1 - pts.a0)),
        float(np.linalg.norm(pts.b1 - pts.b0)),
        float(np.linalg.norm(pts.c1 - pts.c0)),
        float(np.linalg.norm(pts.om - pts.d0)),
    ]
    if min(lengths) <= 0.0:
        raise NonPositiveLength(f"degenerate limb at pose {pose}: lengths {lengths}")
    return ActuatorVector.from_array(lengths)


def det_jd(geom: RobotGeometry, pose: Pose) -> float:
    """Scale-free det J_D at the consistent state of ``pose``."""
    return float(det_jd_batch(geom, pose.as_array()[None, :])[0])


# ──────────────────────────────────────────────────────────────────────────────
# Forward kinematics
# ──────────────────────────────────────────────────────────────────────────────


def _residual(geom: RobotGeometry, x: np.ndarray, q: np.ndarray) -> np.ndarray:
    return constraints_batch(geom, x[None, :], q)[0]


def _levenberg_step(jd: np.ndarray, phi: np.ndarray) -> np.ndarray:
    jtj = jd.T @ jd
    lam = _LEVENBERG_LAMBDA * max(1.0, float(np.trace(jtj)))
    return np.linalg.solve(jtj + lam * np.eye(4), -jd.T @ phi)


def solve_forward(
    geom: RobotGeometry,
    act: ActuatorVector,
    seed: Pose,
    tol: float = RESIDUAL_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> ForwardSolution:
    """
    Newton iteration on Φ(X, q) = 0 starting from ``seed``.

    A step that does not reduce ‖Φ‖ is halved up to eight times.  When the
    scale-free |det J_D| drops below :data:`RANK_TOL` a warning is logged and a
    regularized (Levenberg) step is tried instead of the Newton step.

    Returns
    -------
    ForwardSolution
        Pose with angles wrapped into (-π, π], final max |Φ|, iteration count.

    Raises
    ------
    SingularJacobian
        J_D is singular and the regularized step does not reduce ‖Φ‖.
    NoConvergence
        Tolerance not reached within ``max_iterations``.
    """
    q = act.as_array()
    det_ji = 16.0 * float(np.prod(q))
    x = seed.as_array()
    phi = _residual(geom, x, q)
    damped = 0

    for iteration in range(1, max_iterations + 1):
        norm = float(np.linalg.norm(phi))
        jd = jd_batch(geom, x[None, :])[0]
        det_scaled = float(np.linalg.det(jd)) / det_ji
        if not np.isfinite(det_scaled):
            raise NoConvergence("forward kinematics diverged", residual=float("inf"), iterations=iteration)

        if abs(det_scaled) < RANK_TOL:
            logger.warning(
                "Near-singular J_D at iteration %d (det=%.3e), trying regularized step",
                iteration,
                det_scaled,
            )
            step = _levenberg_step(jd, phi)
            trial = _residual(geom, x + step, q)
            if float(np.linalg.norm(trial)) >= norm and norm > tol:
                raise SingularJacobian(
                    f"forward kinematics stalled at a singular J_D (det={det_scaled:.3e})",
                    det_jd=det_scaled,
                )
            damped += 1
        else:
            step = np.linalg.solve(jd, -phi)
            trial = _residual(geom, x + step, q)
            halvings = 0
            while norm > tol and float(np.linalg.norm(trial)) >= norm and halvings < MAX_HALVINGS:
                step = step / 2.0
                trial = _residual(geom, x + step, q)
                halvings += 1
            if halvings:
                damped += 1

        x = x + step
        phi = trial
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(phi)):
            raise NoConvergence("forward kinematics diverged", residual=float("inf"), iterations=iteration)

        residual = float(np.max(np.abs(phi)))
        logger.debug("FK iter %d: residual=%.3e step=%.3e", iteration, residual, float(np.max(np.abs(step))))
        if residual <= tol and float(np.max(np.abs(step))) <= STEP_TOL:
            pose = Pose.from_array(x).wrapped()
            return ForwardSolution(pose=pose, residual=residual, iterations=iteration, damped_steps=damped)

    residual = float(np.max(np.abs(phi)))
    raise NoConvergence(
        f"forward kinematics did not converge in {max_iterations} iterations (residual={residual:.3e})",
        residual=residual,
        iterations=max_iterations,
    )


def forward(geom: RobotGeometry, act: ActuatorVector, seed: Pose) -> Pose:
    """Pose reached by actuator lengths ``act`` in the assembly mode nearest ``seed``."""
    return solve_forward(geom, act, seed).pose


# ──────────────────────────────────────────────────────────────────────────────
# Velocity
# ──────────────────────────────────────────────────────────────────────────────


def forward_velocity(
    geom: RobotGeometry,
    pose: Pose,
    act: ActuatorVector,
    qdot: np.ndarray | list[float],
) -> np.ndarray:
    """
    Platform rates (ẋm, żm, θ̇, ψ̇) produced by actuator rates ``qdot``.

    Raises
    ------
    NearSingular
        |det J_D| below :data:`RANK_TOL`; the platform is at or next to a
        Type II singularity.
    """
    pair = jacobians(geom, pose, act)
    if abs(pair.det_jd) < RANK_TOL:
        raise NearSingular(f"det J_D = {pair.det_jd:.3e} at {pose}", det_jd=pair.det_jd)
    return np.linalg.solve(pair.jd, -pair.ji @ np.asarray(qdot, dtype=float))
