"""
Loess smoothing of measured pose runs.

Each degree of freedom is smoothed on its own: at every output time the
``ceil(span·n)`` nearest samples are fitted with a weighted polynomial of the
requested degree (tricube weights on the distance scaled by the farthest
point used), and the fitted constant term is the smoothed value.  Optional
robustness iterations re-weight the samples with the bisquare of their
residuals, scaled by six median absolute residuals.

Usage
-----
    from trajectories.smoothing import loess_smooth
    smooth = loess_smooth(ingest_csv("run.csv"), span=0.1, degree=2, out_dt=0.1)
"""

from __future__ import annotations

import logging
import math

import numpy as np

from model.errors import ConfigError, InsufficientData
from model.pose import Pose
from trajectories.models import TrajectorySample

logger = logging.getLogger(__name__)

MIN_SAMPLES = 5


def _tricube(u: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.abs(u) ** 3, 0.0, None) ** 3


def _bisquare(u: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - u**2, 0.0, None) ** 2


def _local_fit(
    t: np.ndarray,
    y: np.ndarray,
    targets: np.ndarray,
    window: int,
    degree: int,
    robustness: np.ndarray,
) -> np.ndarray:
    """Loess estimate of y at every target time."""
    fitted = np.empty(len(targets))
    for k, x0 in enumerate(targets):
        distance = np.abs(t - x0)
        nearest = np.argsort(distance, kind="stable")[:window]
        h = float(distance[nearest].max())
        if h == 0.0:
            fitted[k] = float(np.average(y[nearest], weights=robustness[nearest]))
            continue
        weights = _tricube(distance[nearest] / h) * robustness[nearest]
        if np.count_nonzero(weights) <= degree:
            # Too many points down-weighted to fit the polynomial
            weights = robustness[nearest] + 1e-12
        coefficients = np.polyfit(t[nearest] - x0, y[nearest], degree, w=np.sqrt(weights))
        fitted[k] = coefficients[-1]
    return fitted


def _smooth_series(
    t: np.ndarray,
    y: np.ndarray,
    targets: np.ndarray,
    window: int,
    degree: int,
    robust_iterations: int,
) -> np.ndarray:
    robustness = np.ones(len(t))
    for iteration in range(robust_iterations):
        residuals = y - _local_fit(t, y, t, window, degree, robustness)
        scale = float(np.median(np.abs(residuals)))
        if scale == 0.0:
            logger.debug("Robustness iteration %d: residuals vanish, stopping", iteration)
            break
        robustness = _bisquare(residuals / (6.0 * scale))
    return _local_fit(t, y, targets, window, degree, robustness)


def loess_smooth(
    samples: list[TrajectorySample],
    span: float = 0.1,
    degree: int = 2,
    out_dt: float = 0.1,
    robust_iterations: int = 0,
) -> list[TrajectorySample]:
    """
    Smooth a run and resample it on a uniform ``out_dt`` grid.

    Parameters
    ----------
    samples : list[TrajectorySample]
        Input run in time order.
    span : float
        Fraction of the samples used in each local fit, in (0, 1].
    degree : int
        Local polynomial degree, 1 or 2.
    out_dt : float
        Output spacing (s); the grid starts at the first input time.
    robust_iterations : int
        Bisquare re-weighting passes; 0 gives plain local regression.

    Raises
    ------
    InsufficientData
        Fewer than ``max(5, degree + 2)`` samples.
    ConfigError
        ``span``, ``degree``, ``out_dt`` or ``robust_iterations`` out of range.
    """
    if not 0.0 < span <= 1.0:
        raise ConfigError(f"span must be in (0, 1], got {span}")
    if degree not in (1, 2):
        raise ConfigError(f"degree must be 1 or 2, got {degree}")
    if not (math.isfinite(out_dt) and out_dt > 0):
        raise ConfigError(f"out_dt must be positive, got {out_dt}")
    if robust_iterations < 0:
        raise ConfigError(f"robust_iterations must be >= 0, got {robust_iterations}")

    needed = max(MIN_SAMPLES, degree + 2)
    if len(samples) < needed:
        raise InsufficientData(f"loess needs at least {needed} samples, got {len(samples)}")

    t = np.array([s.t for s in samples], dtype=float)
    values = np.array([s.pose.as_array() for s in samples])
    window = min(len(samples), max(math.ceil(span * len(samples)), degree + 2))

    count = int(math.floor((t[-1] - t[0]) / out_dt + 1e-9)) + 1
    targets = t[0] + out_dt * np.arange(count)

    columns = [_smooth_series(t, values[:, dof], targets, window, degree, robust_iterations) for dof in range(4)]
    smoothed = np.column_stack(columns)

    logger.info(
        "Loess smoothed %d samples to %d (span=%.3g, degree=%d, robust=%d)",
        len(samples),
        count,
        span,
        degree,
        robust_iterations,
    )
    return [TrajectorySample(t=float(targets[k]), pose=Pose.from_array(smoothed[k]), index=k) for k in range(count)]
