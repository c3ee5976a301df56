"""
Assembly-mode enumeration for the 3UPS+RPU robot.

For fixed actuator lengths the forward kinematics has several real solutions
(at most 44).  They are found numerically: damped Newton on Φ(X, q) = 0 from
a scrambled Sobol sequence of starts, run as one vectorized batch, then each
converged start is polished with :func:`kinematics.solver.solve_forward` and
deduplicated.

Usage
-----
    from assembly.modes import enumerate_modes
    catalog = enumerate_modes(geom, inverse(geom, pose), n_starts=4096, seed=0)
"""

from __future__ import annotations

import logging
import math
import warnings

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

from assembly.models import AssemblyMode, ChangeKind, ModeCatalog, ModePairReport, SearchBox
from kinematics.constraints import constraints_batch, det_jd_batch, jd_batch
from kinematics.models import ActuatorVector
from kinematics.solver import det_jd, solve_forward
from model.errors import ConfigError, ModesIdentical, SingularkError
from model.geometry import RobotGeometry
from model.pose import Pose

logger = logging.getLogger(__name__)

MAX_MODES = 44
DEDUP_TOL = 1e-6
MODE_RESIDUAL_TOL = 1e-9

_BATCH_ITERATIONS = 60
_BATCH_TOL = 1e-11
_MAX_STEP = 0.5
_ESCAPE = 5.0


# ──────────────────────────────────────────────────────────────────────────────
# Multi-start search
# ──────────────────────────────────────────────────────────────────────────────


def sobol_starts(box: SearchBox, n_starts: int, seed: int) -> np.ndarray:
    """
    First ``n_starts`` points of a scrambled Sobol sequence scaled to ``box``.

    The prefix is stable: asking for more starts never changes the earlier ones.
    """
    sampler = qmc.Sobol(d=4, scramble=True, seed=seed)
    with warnings.catch_warnings():
        # Sobol balance warning for non powers of two
        warnings.simplefilter("ignore", UserWarning)
        unit = sampler.random(n_starts)
    return qmc.scale(unit, box.lower, box.upper)


def _batch_newton(geom: RobotGeometry, starts: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Newton on every start at once; returns final points and the converged mask."""
    x = starts.copy()
    alive = np.ones(len(x), dtype=bool)
    done = np.zeros(len(x), dtype=bool)

    for _ in range(_BATCH_ITERATIONS):
        phi = constraints_batch(geom, x, q)
        done = alive & (np.max(np.abs(phi), axis=1) < _BATCH_TOL)
        active = alive & ~done
        if not active.any():
            break

        idx = np.flatnonzero(active)
        jd = jd_batch(geom, x[idx])
        solvable = np.abs(np.linalg.det(jd)) > 1e-14
        alive[idx[~solvable]] = False
        idx, jd = idx[solvable], jd[solvable]
        if len(idx) == 0:
            continue

        step = np.linalg.solve(jd, -phi[idx][:, :, None])[:, :, 0]
        largest = np.max(np.abs(step), axis=1, keepdims=True)
        step = np.where(largest > _MAX_STEP, step * (_MAX_STEP / np.maximum(largest, 1e-300)), step)
        x[idx] += step

        escaped = ~np.all(np.isfinite(x), axis=1) | (np.abs(x[:, 0]) > _ESCAPE) | (np.abs(x[:, 1]) > _ESCAPE)
        alive &= ~escaped

    phi = constraints_batch(geom, x, q)
    return x, alive & np.all(np.isfinite(phi), axis=1) & (np.max(np.abs(phi), axis=1) < _BATCH_TOL)


def _angle_gap(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2.0 * math.pi))


def mode_distance(a: Pose, b: Pose) -> float:
    """Max of |Δxm|, |Δzm| (m) and wrapped |Δθ|, |Δψ| (rad)."""
    return max(abs(a.xm - b.xm), abs(a.zm - b.zm), _angle_gap(a.theta, b.theta), _angle_gap(a.psi, b.psi))


def enumerate_modes(
    geom: RobotGeometry,
    act: ActuatorVector,
    box: SearchBox | None = None,
    n_starts: int = 4096,
    seed: int = 0,
) -> ModeCatalog:
    """
    Real assembly modes reachable by Newton from ``n_starts`` quasi-random starts.

    Returns
    -------
    ModeCatalog
        Modes sorted by zm then xm, each with residual ≤ 1e-9.  An empty
        catalog is a valid result; its diagnostics tell why.
    """
    if n_starts < 1:
        raise ConfigError(f"n_starts must be >= 1, got {n_starts}")
    box = box or SearchBox()
    q = act.as_array()

    starts = sobol_starts(box, n_starts, seed)
    solutions, converged_mask = _batch_newton(geom, starts, q)
    catalog = ModeCatalog(starts=n_starts, converged=int(converged_mask.sum()))

    kept: list[AssemblyMode] = []
    for row in solutions[converged_mask]:
        candidate = Pose.from_array(row).wrapped()
        if any(mode_distance(candidate, m.pose) <= DEDUP_TOL for m in kept):
            catalog.duplicates += 1
            continue
        try:
            solution = solve_forward(geom, act, candidate)
        except SingularkError as exc:
            logger.debug("Polishing start %s failed: %s", candidate, exc)
            continue
        if solution.residual > MODE_RESIDUAL_TOL:
            continue
        if any(mode_distance(solution.pose, m.pose) <= DEDUP_TOL for m in kept):
            catalog.duplicates += 1
            continue
        kept.append(AssemblyMode(pose=solution.pose, residual=solution.residual, det_jd=det_jd(geom, solution.pose)))

    if len(kept) > MAX_MODES:
        logger.error("Found %d modes, more than the %d possible; dedup tolerance too tight?", len(kept), MAX_MODES)

    catalog.modes = sorted(kept, key=lambda m: (m.pose.zm, m.pose.xm))
    logger.info("Assembly modes for %s: %s", act, catalog)
    return catalog


# ──────────────────────────────────────────────────────────────────────────────
# Assembly change between two modes
# ──────────────────────────────────────────────────────────────────────────────


def _path(a: Pose, b: Pose) -> tuple[np.ndarray, np.ndarray]:
    """Start and delta of the straight pose path a → b, angles taking the short way."""
    start = a.as_array()
    delta = b.as_array() - start
    delta[2] = math.remainder(delta[2], 2.0 * math.pi)
    delta[3] = math.remainder(delta[3], 2.0 * math.pi)
    return start, delta


def mode_pair_report(
    geom: RobotGeometry,
    act: ActuatorVector,
    mode_a: AssemblyMode,
    mode_b: AssemblyMode,
    samples: int = 200,
) -> ModePairReport:
    """
    Does the straight path between two modes cross det J_D = 0?

    The path is sampled at ``samples`` points; the first sign change is
    refined with Brent's bracketing method.

    Raises
    ------
    ModesIdentical
        The two modes are closer than the dedup tolerance.
    """
    if mode_distance(mode_a.pose, mode_b.pose) <= DEDUP_TOL:
        raise ModesIdentical(f"modes {mode_a.pose} and {mode_b.pose} are the same")

    residuals = constraints_batch(geom, np.vstack([mode_a.pose.as_array(), mode_b.pose.as_array()]), act.as_array())
    if float(np.max(np.abs(residuals))) > MODE_RESIDUAL_TOL:
        logger.warning("Compared modes are not both solutions for %s (max |Φ|=%.3e)", act, np.max(np.abs(residuals)))

    start, delta = _path(mode_a.pose, mode_b.pose)
    fractions = np.linspace(0.0, 1.0, samples)
    dets = det_jd_batch(geom, start + fractions[:, None] * delta)

    for k in range(len(fractions) - 1):
        if dets[k] == 0.0 or dets[k] * dets[k + 1] < 0:
            def along(s: float) -> float:
                return float(det_jd_batch(geom, (start + s * delta)[None, :])[0])

            root = fractions[k] if dets[k] == 0.0 else brentq(along, fractions[k], fractions[k + 1], xtol=1e-15)
            crossing = Pose.from_array(start + root * delta)
            logger.info("Singular assembly change: det J_D = 0 at s=%.6f (%s)", root, crossing)
            return ModePairReport(
                mode_a=mode_a,
                mode_b=mode_b,
                kind=ChangeKind.SINGULAR,
                crossing_fraction=float(root),
                crossing_pose=crossing,
                crossing_det_jd=det_jd(geom, crossing),
            )

    return ModePairReport(mode_a=mode_a, mode_b=mode_b, kind=ChangeKind.NON_SINGULAR_CANDIDATE)
