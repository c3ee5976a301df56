"""
Experimental-limit benchmark over trajectory sets.

Pipeline
--------
1. :func:`scan` — assess every sample of a trajectory, keep the minima of
   |det J_D| and Ω34, and locate every sign change of det J_D.
2. :func:`derive_limits` — average the minima of the test trajectories into
   the experimental limits.
3. :func:`verify_limits` — check the verification trajectories against the
   limits (PASS when the minimum stays at or above the limit, FLAG otherwise).
4. :func:`rate_of_change` / :func:`compare_rates` — normalized rates of change
   of both indices, to see which one reacts first near a singularity.

Usage
-----
    from benchmark.benchmark import derive_limits, run_benchmark, verify_limits
    tests = run_benchmark(geom, builtin_specs("TT"))
    limits = derive_limits([s.minima for s in tests])
    checks = verify_limits([s.minima for s in run_benchmark(geom, builtin_specs("VT"))], limits)
"""

from __future__ import annotations

import logging
import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from benchmark.models import (
    ConventionReport,
    ConventionRow,
    Crossing,
    ExperimentalLimits,
    LimitCheck,
    LimitIndex,
    Normalization,
    RateComparison,
    ScanResult,
    TrajectoryMinima,
    Verdict,
)
from kinematics.constraints import det_jd_batch
from model.errors import (
    ConfigError,
    EmptyInput,
    InsufficientData,
    NonUniformDt,
    SingularkError,
    ZeroReference,
)
from model.geometry import RobotGeometry
from model.pose import Pose
from screws.assess import assess
from screws.models import AssessmentLimits, SingularityAssessment
from trajectories.generator import builtin_spec, generate
from trajectories.ingest import infer_dt
from trajectories.models import TrajectorySample, TrajectorySpec

logger = logging.getLogger(__name__)

VERIFICATION_FRACTION = 0.3

REFERENCE_VT_VALUES: dict[str, tuple[float, float]] = {
    "VT1": (0.0194, 2.90),
    "VT2": (0.0137, 1.44),
    "VT3": (0.0145, 0.73),
}
"""Reference (detJD, Ω34°) at the verification endpoints."""

CONVENTION_DET_TOL = 0.004
CONVENTION_OMEGA_TOL = 0.5


# ──────────────────────────────────────────────────────────────────────────────
# Scanning
# ──────────────────────────────────────────────────────────────────────────────


def minima_from_assessments(
    name: str,
    assessments: Sequence[SingularityAssessment | None],
    stopped_at: int | None = None,
) -> TrajectoryMinima:
    """
    Minima of a trajectory's indices.

    Without ``stopped_at`` these are the minima over all samples; ties
    resolve to the earliest sample.  A run that lost control at
    ``stopped_at`` reports the values of the last sample assessed before
    the stop instead.

    Failed samples (``None``) are skipped.
    """
    end = len(assessments) if stopped_at is None else stopped_at
    window = [(k, a) for k, a in enumerate(assessments[:end]) if a is not None]
    if not window:
        return TrajectoryMinima(name, math.nan, None, math.nan, None, stopped_at=stopped_at)

    if stopped_at is not None:
        k_last, a_last = window[-1]
        if k_last != stopped_at - 1:
            logger.warning("%s: sample %d failed, reporting sample %d as the value before the stop", name, stopped_at - 1, k_last)
        return TrajectoryMinima(
            name=name,
            min_det_jd=abs(a_last.det_jd),
            argmin_det_jd=k_last,
            min_omega34=a_last.omega34,
            argmin_omega34=k_last,
            min_omega=a_last.omega_min,
            argmin_omega=k_last,
            stopped_at=stopped_at,
        )

    k_det, a_det = min(window, key=lambda item: abs(item[1].det_jd))
    k_o34, a_o34 = min(window, key=lambda item: item[1].omega34)
    k_omin, a_omin = min(window, key=lambda item: item[1].omega_min)
    return TrajectoryMinima(
        name=name,
        min_det_jd=abs(a_det.det_jd),
        argmin_det_jd=k_det,
        min_omega34=a_o34.omega34,
        argmin_omega34=k_o34,
        min_omega=a_omin.omega_min,
        argmin_omega=k_omin,
        stopped_at=stopped_at,
    )


def locate_crossings(
    geom: RobotGeometry,
    samples: Sequence[TrajectorySample],
    limits: AssessmentLimits | None = None,
) -> list[Crossing]:
    """
    Every sign change of det J_D between consecutive samples.

    The zero is refined with Brent's method along the straight pose path
    between the two bracketing samples and assessed there.
    """
    if len(samples) < 2:
        return []
    points = np.array([s.pose.as_array() for s in samples])
    dets = det_jd_batch(geom, points)
    crossings: list[Crossing] = []

    for k in range(len(samples) - 1):
        a, b = dets[k], dets[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        # An exact zero on a sample belongs to the interval that ends there
        at_start = a == 0.0 and k == 0
        if not (at_start or (a != 0.0 and (b == 0.0 or a * b < 0))):
            continue
        start, delta = points[k], points[k + 1] - points[k]

        def along(s: float) -> float:
            return float(det_jd_batch(geom, (start + s * delta)[None, :])[0])

        if at_start:
            fraction = 0.0
        elif b == 0.0:
            fraction = 1.0
        else:
            fraction = brentq(along, 0.0, 1.0, xtol=1e-15)
        pose = Pose.from_array(start + fraction * delta)
        try:
            assessment = assess(geom, pose, limits)
        except SingularkError as exc:
            logger.error("Assessing crossing after sample %d failed: %s", k, exc, exc_info=True)
            assessment = None
        crossings.append(Crossing(index=k, fraction=float(fraction), pose=pose, det_jd=along(fraction), assessment=assessment))
        logger.info("det J_D changes sign between samples %d and %d at %s", k, k + 1, pose)

    return crossings


def scan(
    geom: RobotGeometry,
    samples: Sequence[TrajectorySample],
    name: str = "run",
    limits: AssessmentLimits | None = None,
    stopped_at: int | None = None,
    dt: float | None = None,
    locate: bool = True,
) -> ScanResult:
    """
    Assess every sample of a trajectory.

    A sample that cannot be assessed is logged, recorded in
    ``ScanResult.failures`` and left as ``None``; the scan goes on.

    Parameters
    ----------
    stopped_at : int, optional
        For runs that lost control: crossings only use samples
        ``0 … stopped_at - 1`` and the reported minima are the values at
        the last of them.
    dt : float, optional
        Sample spacing; inferred from the sample times when omitted.

    Raises
    ------
    EmptyInput
        ``samples`` is empty.
    ConfigError
        ``stopped_at`` outside ``1 … len(samples)``.
    """
    if not samples:
        raise EmptyInput(f"{name}: cannot scan an empty trajectory")
    if stopped_at is not None and not 0 < stopped_at <= len(samples):
        raise ConfigError(f"{name}: stopped_at={stopped_at} outside 1..{len(samples)}")

    assessments: list[SingularityAssessment | None] = []
    failures: dict[int, str] = {}
    for k, sample in enumerate(samples):
        try:
            assessments.append(assess(geom, sample.pose, limits))
        except SingularkError as exc:
            logger.error("%s: sample %d (%s) failed: %s", name, k, sample.pose, exc, exc_info=True)
            failures[k] = str(exc)
            assessments.append(None)

    minima = minima_from_assessments(name, assessments, stopped_at)
    end = len(samples) if stopped_at is None else stopped_at
    crossings = locate_crossings(geom, samples[:end], limits) if locate else []

    if dt is None and len(samples) > 1:
        try:
            dt = infer_dt(list(samples))
        except NonUniformDt as exc:
            logger.warning("%s: no uniform dt (%s)", name, exc)

    logger.info(
        "Scanned %s: %d samples, %d failed, %d crossings, min |detJD|=%.5f @%s, min Ω34=%.4f° @%s",
        name,
        len(samples),
        len(failures),
        len(crossings),
        minima.min_det_jd,
        minima.argmin_det_jd,
        minima.min_omega34,
        minima.argmin_omega34,
    )
    return ScanResult(
        name=name,
        samples=list(samples),
        assessments=assessments,
        minima=minima,
        failures=failures,
        crossings=crossings,
        dt=dt,
    )


def run_benchmark(
    geom: RobotGeometry,
    specs: Sequence[TrajectorySpec],
    dt: float = 0.1,
    limits: AssessmentLimits | None = None,
) -> list[ScanResult]:
    """Generate and scan every spec; a spec that fails is logged and skipped."""
    results: list[ScanResult] = []
    for spec in specs:
        try:
            results.append(scan(geom, generate(spec, dt), name=spec.name, limits=limits, dt=dt))
        except SingularkError as exc:
            logger.error("Trajectory %s failed: %s", spec.name, exc, exc_info=True)
    logger.info("Benchmark finished: %d/%d trajectories scanned", len(results), len(specs))
    return results


# ──────────────────────────────────────────────────────────────────────────────
# Limits
# ──────────────────────────────────────────────────────────────────────────────


def _round_to(value: float, quantum: float) -> float:
    """Round half-up to a multiple of ``quantum``, on the decimal text of both."""
    step = Decimal(str(quantum))
    return float((Decimal(str(value)) / step).quantize(Decimal(1), rounding=ROUND_HALF_UP) * step)


def derive_limits(
    minima: Sequence[TrajectoryMinima],
    det_quantum: float = 0.001,
    omega_quantum: float = 0.1,
) -> ExperimentalLimits:
    """
    Experimental limits: the mean of the per-trajectory minima, rounded.

    Entries whose minima are NaN (nothing could be assessed) are ignored.

    Parameters
    ----------
    det_quantum : float
        Rounding step of the det J_D limit (thousandths by default).
    omega_quantum : float
        Rounding step of the Ω limit.  The default is 0.1°, not hundredths:
        a mean of 1.79003° has to give the 1.80° limit.  Pass 0.01 for
        rounding to hundredths.

    Raises
    ------
    EmptyInput
        No usable entry.
    """
    if det_quantum <= 0 or omega_quantum <= 0:
        raise ConfigError("rounding quanta must be > 0")
    det_values = [m.min_det_jd for m in minima if math.isfinite(m.min_det_jd)]
    omega_values = [m.min_omega34 for m in minima if math.isfinite(m.min_omega34)]
    if not det_values or not omega_values:
        raise EmptyInput("derive_limits needs at least one trajectory with finite minima")

    mean_det = math.fsum(det_values) / len(det_values)
    mean_omega = math.fsum(omega_values) / len(omega_values)
    limits = ExperimentalLimits(
        lim_det_jd=_round_to(mean_det, det_quantum),
        lim_omega_deg=_round_to(mean_omega, omega_quantum),
        provenance=tuple(minima),
        mean_det_jd=mean_det,
        mean_omega_deg=mean_omega,
    )
    logger.info("Derived limits from %d trajectories: %s (means %.4f, %.4f°)", len(minima), limits, mean_det, mean_omega)
    return limits


def verify_limits(
    minima: Sequence[TrajectoryMinima],
    limits: ExperimentalLimits,
    index: LimitIndex = LimitIndex.BOTH,
) -> list[LimitCheck]:
    """
    PASS when the trajectory minimum of the selected index is at or above its
    limit, FLAG otherwise.  With ``BOTH`` a trajectory passes only when both do.
    """
    checks: list[LimitCheck] = []
    for m in minima:
        det_ok = m.min_det_jd >= limits.lim_det_jd
        omega_ok = m.min_omega34 >= limits.lim_omega_deg
        if index is LimitIndex.DET_JD:
            passed = det_ok
        elif index is LimitIndex.OMEGA34:
            passed = omega_ok
        else:
            passed = det_ok and omega_ok
        verdict = Verdict.PASS if passed else Verdict.FLAG
        if verdict is Verdict.FLAG:
            logger.warning("%s below the limits (%s): min |detJD|=%.4f, min Ω34=%.3f°", m.name, index.value, m.min_det_jd, m.min_omega34)
        checks.append(LimitCheck(m.name, index, verdict, m.min_det_jd, m.min_omega34))
    return checks


def check_verification_set(n_test: int, n_verify: int) -> bool:
    """True when the verification set has at least 30 % as many trajectories as the test set."""
    needed = math.ceil(VERIFICATION_FRACTION * n_test)
    if n_verify < needed:
        logger.warning("Verification set has %d trajectories; %d needed for %d test trajectories", n_verify, needed, n_test)
        return False
    return True


# ──────────────────────────────────────────────────────────────────────────────
# Rate of change
# ──────────────────────────────────────────────────────────────────────────────


def rate_of_change(
    series: Sequence[float] | np.ndarray,
    dt: float,
    normalize_by: Normalization = Normalization.INITIAL,
) -> np.ndarray:
    """
    Derivative of the normalized series in percent per second.

    Central differences inside, one-sided at both ends.

    Raises
    ------
    InsufficientData
        Fewer than two values.
    ZeroReference
        The normalizing value is zero.
    """
    values = np.asarray(series, dtype=float)
    if len(values) < 2:
        raise InsufficientData("rate of change needs at least two values")
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")

    reference = values[0] if normalize_by is Normalization.INITIAL else float(np.nanmax(np.abs(values)))
    if reference == 0 or not math.isfinite(reference):
        raise ZeroReference(f"cannot normalize by {normalize_by.value} value {reference}")
    return np.gradient(values / reference, dt) * 100.0


def compare_rates(scan_result: ScanResult, normalize_by: Normalization = Normalization.INITIAL) -> RateComparison:
    """Mean normalized rates of |det J_D| and Ω34 over a scan (%/s)."""
    dt = scan_result.dt
    if dt is None:
        raise InsufficientData(f"{scan_result.name}: no uniform dt to differentiate with")
    end = scan_result.minima.stopped_at or len(scan_result.samples)
    det_rate = rate_of_change(scan_result.series("abs_detJD")[:end], dt, normalize_by)
    omega_rate = rate_of_change(scan_result.series("omega34")[:end], dt, normalize_by)
    comparison = RateComparison(
        name=scan_result.name,
        mean_rate_det_jd=float(np.nanmean(det_rate)),
        mean_rate_omega34=float(np.nanmean(omega_rate)),
    )
    logger.info(
        "%s rates: |detJD|_n %.3f %%/s, Ω34_n %.3f %%/s (difference %.3f)",
        comparison.name,
        comparison.mean_rate_det_jd,
        comparison.mean_rate_omega34,
        comparison.difference,
    )
    return comparison


# ──────────────────────────────────────────────────────────────────────────────
# Mobile-anchor convention
# ──────────────────────────────────────────────────────────────────────────────


def _convention_name(geom: RobotGeometry) -> str:
    return "mirrored" if geom.mirror_mobile else "standard"


def convention_report(geom: RobotGeometry) -> ConventionReport:
    """
    Evaluate the verification endpoints under both mobile-anchor conventions
    and compare them with the reference detJD and Ω34 values.
    """
    rows: list[ConventionRow] = []
    for variant in (geom, geom.mirrored()):
        for name, (ref_det, ref_omega) in REFERENCE_VT_VALUES.items():
            result = assess(variant, builtin_spec(name).end)
            det_error = abs(result.det_jd - ref_det)
            omega_error = abs(result.omega34 - ref_omega)
            rows.append(
                ConventionRow(
                    name=name,
                    convention=_convention_name(variant),
                    det_jd=result.det_jd,
                    omega34=result.omega34,
                    reference_det_jd=ref_det,
                    reference_omega34=ref_omega,
                    within_tolerance=det_error <= CONVENTION_DET_TOL and omega_error <= CONVENTION_OMEGA_TOL,
                    error=det_error / CONVENTION_DET_TOL + omega_error / CONVENTION_OMEGA_TOL,
                )
            )

    closer = {
        name: min((r for r in rows if r.name == name), key=lambda r: r.error).convention for name in REFERENCE_VT_VALUES
    }
    totals: dict[str, float] = {}
    for row in rows:
        totals[row.convention] = totals.get(row.convention, 0.0) + row.error
    overall = min(totals, key=lambda key: totals[key])

    report = ConventionReport(rows=tuple(rows), closer=closer, overall=overall)
    logger.info("Convention report: %s closer overall", overall)
    return report
