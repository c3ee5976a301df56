"""
Pose CSV files: read measured or generated runs and write them back.

Schema (header is matched exactly)::

    t,xm,zm,theta_deg,psi_deg

Comma separated, decimal point, UTF-8.  Times in seconds, positions in
meters, angles in degrees.
"""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from model.errors import NonUniformDt, ParseError, ReportError
from model.pose import Pose
from trajectories.models import TrajectorySample

logger = logging.getLogger(__name__)

POSE_HEADER = ["t", "xm", "zm", "theta_deg", "psi_deg"]
DT_TOLERANCE = 0.01
"""Allowed relative spread of the sample spacing."""

_JITTER_WARN = 1e-3


def _cell(value: str, row: int, column: str) -> float:
    try:
        number = float(value)
    except ValueError as exc:
        raise ParseError(f"row {row}, column '{column}': {value!r} is not a number", row=row, column=column) from exc
    if not math.isfinite(number):
        raise ParseError(f"row {row}, column '{column}': value must be finite", row=row, column=column)
    return number


def ingest_csv(path: str | Path) -> list[TrajectorySample]:
    """
    Samples of a pose CSV in file order, with the spacing checked.

    Row numbers in errors count the header as row 1.

    Raises
    ------
    ParseError
        Missing or wrong header, wrong number of cells, or a bad number.
    NonUniformDt
        Sample spacing varies by more than 1 %.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text: {exc}") from exc

    if not rows or [c.strip() for c in rows[0]] != POSE_HEADER:
        raise ParseError(f"{path}: header must be {','.join(POSE_HEADER)}", row=1)

    samples: list[TrajectorySample] = []
    for row_number, cells in enumerate(rows[1:], start=2):
        if not cells:
            continue
        if len(cells) != len(POSE_HEADER):
            raise ParseError(
                f"{path}: row {row_number} has {len(cells)} cells, expected {len(POSE_HEADER)}",
                row=row_number,
            )
        t, xm, zm, theta, psi = (_cell(v, row_number, c) for v, c in zip(cells, POSE_HEADER))
        samples.append(TrajectorySample(t=t, pose=Pose.from_degrees(xm, zm, theta, psi), index=len(samples)))

    if len(samples) > 1:
        dt = infer_dt(samples)
        logger.info("Ingested %d samples from %s (dt=%.4g s)", len(samples), path, dt)
    return samples


def infer_dt(samples: list[TrajectorySample]) -> float:
    """
    Mean sample spacing of a run.

    Raises
    ------
    NonUniformDt
        Fewer than two samples, non-increasing times, or a spacing that
        differs from the mean by more than 1 %.
    """
    if len(samples) < 2:
        raise NonUniformDt("at least two samples are needed to infer dt")
    steps = np.diff([s.t for s in samples])
    dt = float(np.mean(steps))
    if dt <= 0 or np.any(steps <= 0):
        raise NonUniformDt("sample times must be strictly increasing")

    spread = float(np.max(np.abs(steps - dt))) / dt
    if spread > DT_TOLERANCE:
        worst = int(np.argmax(np.abs(steps - dt)))
        raise NonUniformDt(
            f"sample spacing varies by {spread:.2%} (limit {DT_TOLERANCE:.0%}); "
            f"worst step {steps[worst]:.6g} s after sample {worst}"
        )
    if spread > _JITTER_WARN:
        logger.warning("Sample spacing jitters by %.2f%% around dt=%.6g s", spread * 100, dt)
    return dt


def write_csv(samples: Iterable[TrajectorySample], path: str | Path) -> Path:
    """Write samples in the pose CSV schema; floats keep full precision."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(POSE_HEADER)
            for sample in samples:
                writer.writerow([repr(float(v)) for v in sample.to_dict().values()])
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc
    logger.info("Wrote pose CSV %s", path)
    return path
