"""
Trajectory generation and the built-in trajectory sets.

Three families are built in:

* **TT** — test trajectories that run into (or close to) a Type II
  singularity; they set the experimental limits.
* **VT** — verification trajectories from the home pose towards a
  near-singular pose; the limits are checked against them.
* **ACT** — trajectories from the home pose to candidate assembly-change
  points.

Free degrees of freedom of the TT family default to zm = 0.7 m and θ = 0°.

Usage
-----
    from trajectories.generator import builtin_spec, generate
    samples = generate(builtin_spec("VT1"), dt=0.1)
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np

from model.errors import InvalidSpec
from model.pose import HOME_POSE, Pose
from trajectories.models import TrajectoryKind, TrajectorySample, TrajectorySpec

logger = logging.getLogger(__name__)

TT_SAMPLES = 400
VT_SAMPLES = 250
FAMILIES = ("TT", "VT", "ACT")


# ──────────────────────────────────────────────────────────────────────────────
# Generation
# ──────────────────────────────────────────────────────────────────────────────


def _path_points(spec: TrajectorySpec) -> np.ndarray:
    """(samples, 4) array of pose coordinates for s running 0 → 1."""
    s = np.linspace(0.0, 1.0, spec.samples) if spec.samples > 1 else np.zeros(1)
    start = spec.start.as_array()
    end = spec.end.as_array()

    if spec.kind is TrajectoryKind.ROTATION_SWEEP:
        end = start.copy()
        end[3] = spec.end.psi

    points = start + s[:, None] * (end - start)
    if spec.kind is TrajectoryKind.ELLIPTICAL:
        points[:, 1] += spec.semi_axis * np.sin(np.pi * s)
    return points


def generate(spec: TrajectorySpec, dt: float = 0.1) -> list[TrajectorySample]:
    """
    Timed pose sequence for ``spec``; sample ``k`` is at ``t = k·dt``.

    Linear kinds interpolate every DOF independently.  Rotation sweeps vary ψ
    only.  Elliptical kinds add ``semi_axis·sin(πs)`` to the linear zm so the
    platform rises on a half ellipse while xm moves linearly.

    Raises
    ------
    InvalidSpec
        ``dt`` is not a positive finite number.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise InvalidSpec(f"{spec.name}: dt must be positive, got {dt!r}")

    points = _path_points(spec)
    samples = [TrajectorySample(t=k * dt, pose=Pose.from_array(row), index=k) for k, row in enumerate(points)]
    logger.info("Generated %s (%s): %d samples, dt=%.4g s", spec.name, spec.kind, len(samples), dt)
    return samples


# ──────────────────────────────────────────────────────────────────────────────
# Built-in sets
# ──────────────────────────────────────────────────────────────────────────────


def _deg(xm: float, zm: float, theta: float, psi: float) -> Pose:
    return Pose.from_degrees(xm, zm, theta, psi)


def _linear(name: str, start: Pose, end: Pose, samples: int) -> TrajectorySpec:
    return TrajectorySpec(name=name, kind=TrajectoryKind.LINEAR, start=start, end=end, samples=samples)


def _sweep(name: str, start: Pose, psi_deg: float) -> TrajectorySpec:
    end = Pose.from_degrees(start.xm, start.zm, start.theta_deg, psi_deg)
    return TrajectorySpec(name=name, kind=TrajectoryKind.ROTATION_SWEEP, start=start, end=end, samples=TT_SAMPLES)


def _ellipse(name: str, start: Pose, end: Pose, semi_axis: float) -> TrajectorySpec:
    return TrajectorySpec(
        name=name,
        kind=TrajectoryKind.ELLIPTICAL,
        start=start,
        end=end,
        samples=TT_SAMPLES,
        semi_axis=semi_axis,
    )


_BUILTIN: dict[str, TrajectorySpec] = {
    spec.name: spec
    for spec in (
        _sweep("TT1", _deg(-0.155, 0.7, 0, 0), 59),
        _linear("TT2", _deg(-0.1, 0.65, 0, 0), _deg(0.1, 0.75, -15, 59), TT_SAMPLES),
        _ellipse("TT3", _deg(0.15, 0.66, 0, 0), _deg(0.35, 0.66, -4, 4), 0.08),
        _ellipse("TT4", _deg(0.10, 0.66, 0, 0), _deg(0.30, 0.66, -5, 10), 0.08),
        _sweep("TT5", _deg(0.012, 0.7, 0, 0), 20),
        _linear("TT6", _deg(0, 0.7, 0, 0), _deg(0.1, 0.7, 20, 10), TT_SAMPLES),
        _ellipse("TT7", _deg(-0.05, 0.68, 0, 0), _deg(0.05, 0.68, 0, 0), 0.05),
        _linear("TT8", _deg(0, 0.7, 0, 0), _deg(0.16, 0.7, 20, 20), TT_SAMPLES),
        _linear("TT9", _deg(0, 0.7, 0, 0), _deg(0.2, 0.7, 20, 20), TT_SAMPLES),
        _linear("VT1", HOME_POSE, _deg(0.2174, 0.7052, 27.74, 14), VT_SAMPLES),
        _linear("VT2", HOME_POSE, _deg(0.087, 0.705, -3.93, 3.38), VT_SAMPLES),
        _linear("VT3", HOME_POSE, _deg(0.088, 0.724, 6.39, 15.66), VT_SAMPLES),
        _linear("ACT1", HOME_POSE, _deg(0.016, 0.7076, -14.67, 20), VT_SAMPLES),
        _linear("ACT2", HOME_POSE, _deg(-0.1, 0.75, -15, 0), VT_SAMPLES),
        _linear("ACT3", HOME_POSE, _deg(-0.144, 0.7047, 7.78, 16.8), VT_SAMPLES),
    )
}


def builtin_spec(name: str) -> TrajectorySpec:
    """One built-in spec by name (case-insensitive), e.g. ``"TT3"``."""
    try:
        return _BUILTIN[name.upper()]
    except KeyError as exc:
        raise InvalidSpec(f"unknown built-in trajectory {name!r}; known: {', '.join(_BUILTIN)}") from exc


def builtin_specs(family: str) -> list[TrajectorySpec]:
    """All built-in specs of ``family`` ("TT", "VT" or "ACT") in numeric order."""
    family = family.upper()
    if family not in FAMILIES:
        raise InvalidSpec(f"unknown trajectory family {family!r}; expected one of {FAMILIES}")
    return [spec for name, spec in _BUILTIN.items() if name.rstrip("0123456789") == family]


# ──────────────────────────────────────────────────────────────────────────────
# Spec files
# ──────────────────────────────────────────────────────────────────────────────


def load_specs(path: str | Path) -> list[TrajectorySpec]:
    """
    Read a JSON spec file holding one spec object or a list of them.

    Raises
    ------
    InvalidSpec
        The file cannot be read, is not JSON, or a spec in it is invalid.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidSpec(f"cannot read spec file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InvalidSpec(f"spec file {path} is not UTF-8 text: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"{path} is not valid JSON: {exc}") from exc

    items = payload if isinstance(payload, list) else [payload]
    specs = []
    for position, item in enumerate(items):
        try:
            specs.append(TrajectorySpec.from_dict(item))
        except InvalidSpec as exc:
            raise InvalidSpec(f"{path} entry {position}: {exc}") from exc
    return specs


def resolve_specs(reference: str) -> list[TrajectorySpec]:
    """
    ``builtin:TT`` (a family), ``builtin:VT1`` (one spec) or a JSON file path.
    """
    if reference.startswith("builtin:"):
        key = reference.split(":", 1)[1]
        if key.upper() in FAMILIES:
            return builtin_specs(key)
        return [builtin_spec(key)]
    return load_specs(reference)
