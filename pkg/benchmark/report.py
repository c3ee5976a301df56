"""
Report files for scans, limits and assembly-mode catalogs.

Files written by :func:`report` into one output directory:

* ``<name>_samples.csv`` — every sample: time, pose, detJD, six Ω, six gaps,
  responsible pair, class.
* ``summary.csv`` — one row of minima per trajectory plus an ``Average`` row
  when there is more than one.
* ``crossings.csv`` — every located sign change of det J_D.
* ``series/<name>_<index>.csv`` — two-column ``t,value`` files for plotting.
* ``limits.json`` — the limits used, when given.

All floats are written with ``repr`` so the files re-read losslessly.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from assembly.models import ModeCatalog
from benchmark.models import ExperimentalLimits, LimitCheck, ScanResult, TrajectoryMinima
from model.errors import ParseError, ReportError
from screws.models import PAIRS

logger = logging.getLogger(__name__)

SUMMARY_HEADER = ["name", "min_detJD", "argmin_detJD", "min_omega34_deg", "argmin_omega34", "stopped_at", "verdict"]
MODES_HEADER = ["mode_id", "xm", "zm", "theta_deg", "psi_deg", "detJD", "feasible", "residual"]
SAMPLE_HEADER = (
    ["t", "index", "xm", "zm", "theta_deg", "psi_deg", "detJD"]
    + [f"omega{i}{j}_deg" for i, j in PAIRS]
    + [f"gap{i}{j}" for i, j in PAIRS]
    + ["pair", "classification", "null_space_dim_two", "error"]
)
CROSSING_HEADER = ["name", "index", "fraction", "xm", "zm", "theta_deg", "psi_deg", "detJD", "omega_min_deg", "pair", "gap", "classification"]
SERIES_KEYS = ("detJD", "omega34")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc
    logger.debug("Wrote %s", path)
    return path


# ──────────────────────────────────────────────────────────────────────────────
# Individual files
# ──────────────────────────────────────────────────────────────────────────────


def write_samples(scan_result: ScanResult, path: Path) -> Path:
    """Per-sample CSV of one scan; failed samples carry only pose and error."""
    rows = []
    for k, (sample, item) in enumerate(zip(scan_result.samples, scan_result.assessments)):
        pose = sample.pose.to_dict()
        head = [sample.t, k, pose["xm"], pose["zm"], pose["theta_deg"], pose["psi_deg"]]
        if item is None:
            rows.append(head + [None] * (len(SAMPLE_HEADER) - len(head) - 1) + [scan_result.failures.get(k, "")])
            continue
        record = item.to_dict()
        rows.append(
            head
            + [record["detJD"]]
            + [record[f"omega{i}{j}_deg"] for i, j in PAIRS]
            + [record[f"gap{i}{j}"] for i, j in PAIRS]
            + [record["pair"], record["classification"], record["null_space_dim_two"], None]
        )
    return _write_rows(path, SAMPLE_HEADER, rows)


def write_summary(
    minima: Sequence[TrajectoryMinima],
    path: Path,
    checks: Sequence[LimitCheck] | None = None,
) -> Path:
    """Minima per trajectory; an ``Average`` row is added for two or more."""
    verdicts = {c.name: c.verdict.value for c in checks or ()}
    rows: list[list[Any]] = []
    for m in minima:
        rows.append(
            [m.name, m.min_det_jd, m.argmin_det_jd, m.min_omega34, m.argmin_omega34, m.stopped_at, verdicts.get(m.name)]
        )

    if len(minima) > 1:
        dets = [m.min_det_jd for m in minima if math.isfinite(m.min_det_jd)]
        omegas = [m.min_omega34 for m in minima if math.isfinite(m.min_omega34)]
        rows.append(
            [
                "Average",
                math.fsum(dets) / len(dets) if dets else None,
                None,
                math.fsum(omegas) / len(omegas) if omegas else None,
                None,
                None,
                None,
            ]
        )
    return _write_rows(path, SUMMARY_HEADER, rows)


def write_crossings(scans: Sequence[ScanResult], path: Path) -> Path:
    rows = []
    for s in scans:
        for c in s.crossings:
            pose = c.pose.to_dict()
            a = c.assessment
            rows.append(
                [
                    s.name,
                    c.index,
                    c.fraction,
                    pose["xm"],
                    pose["zm"],
                    pose["theta_deg"],
                    pose["psi_deg"],
                    c.det_jd,
                    a.omega_min if a else None,
                    f"{a.responsible_pair[0]}{a.responsible_pair[1]}" if a else None,
                    a.gap_at_pair if a else None,
                    a.classification.value if a else None,
                ]
            )
    return _write_rows(path, CROSSING_HEADER, rows)


def write_series(times: np.ndarray, values: np.ndarray, path: Path) -> Path:
    """Two-column ``t,value`` file."""
    return _write_rows(path, ["t", "value"], zip(times.tolist(), values.tolist()))


def read_series(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """
    Read a series file written by :func:`write_series`.

    Empty value cells (failed samples) come back as NaN.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text: {exc}") from exc
    if not rows or rows[0] != ["t", "value"]:
        raise ParseError(f"{path}: header must be t,value", row=1)

    times, values = [], []
    for row_number, row in enumerate(rows[1:], start=2):
        try:
            times.append(float(row[0]))
            values.append(float(row[1]) if row[1] else math.nan)
        except (IndexError, ValueError) as exc:
            raise ParseError(f"{path}: bad row {row_number}: {row}", row=row_number) from exc
    return np.array(times), np.array(values)


def _optional_int(value: str) -> int | None:
    return int(value) if value else None


def read_minima(path: str | Path) -> list[TrajectoryMinima]:
    """
    Per-trajectory minima from a summary-shaped CSV (e.g. measured runs).

    Only ``name``, ``min_detJD`` and ``min_omega34_deg`` are required; an
    ``Average`` row is skipped.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text: {exc}") from exc

    minima: list[TrajectoryMinima] = []
    for row_number, row in enumerate(rows, start=2):
        if row.get("name") == "Average":
            continue
        try:
            minima.append(
                TrajectoryMinima(
                    name=row["name"],
                    min_det_jd=float(row["min_detJD"]),
                    argmin_det_jd=_optional_int(row.get("argmin_detJD") or ""),
                    min_omega34=float(row["min_omega34_deg"]),
                    argmin_omega34=_optional_int(row.get("argmin_omega34") or ""),
                    stopped_at=_optional_int(row.get("stopped_at") or ""),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad minima row {row_number}: {exc}", row=row_number) from exc
    return minima


def write_modes(catalog: ModeCatalog, path: Path) -> Path:
    """Assembly-mode catalog CSV, one row per mode in catalog order."""
    rows = []
    for mode_id, mode in enumerate(catalog.modes, start=1):
        record = mode.to_dict()
        rows.append(
            [
                mode_id,
                record["xm"],
                record["zm"],
                record["theta_deg"],
                record["psi_deg"],
                record["detJD"],
                record["feasible"],
                record["residual"],
            ]
        )
    return _write_rows(path, MODES_HEADER, rows)


def write_limits(limits: ExperimentalLimits, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(limits.to_dict(), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc}") from exc
    return path


# ──────────────────────────────────────────────────────────────────────────────
# Full report
# ──────────────────────────────────────────────────────────────────────────────


def report(
    scans: Sequence[ScanResult],
    out_dir: str | Path,
    limits: ExperimentalLimits | None = None,
    checks: Sequence[LimitCheck] | None = None,
) -> list[Path]:
    """
    Write every report file for ``scans`` into ``out_dir``.

    Returns
    -------
    list[Path]
        Files written, in a fixed order.

    Raises
    ------
    ReportError
        A file could not be written; the message names it.
    """
    out = Path(out_dir)
    written: list[Path] = []
    for s in scans:
        written.append(write_samples(s, out / f"{s.name}_samples.csv"))
        for key in SERIES_KEYS:
            written.append(write_series(s.times, s.series(key), out / "series" / f"{s.name}_{key}.csv"))
    written.append(write_summary([s.minima for s in scans], out / "summary.csv", checks))
    written.append(write_crossings(scans, out / "crossings.csv"))
    if limits is not None:
        written.append(write_limits(limits, out / "limits.json"))

    logger.info("Report: %d files written to %s", len(written), out)
    return written
