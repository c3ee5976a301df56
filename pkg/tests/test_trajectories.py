"""
Tests for the trajectories package.

Covers:
- Trajectory generation and the built-in sets
- Spec files
- Pose CSV ingestion and writing
- Loess smoothing
"""

from __future__ import annotations

import json
import logging
import math

import numpy as np
import pytest

from model.errors import ConfigError, InsufficientData, InvalidSpec, NonUniformDt, ParseError
from model.pose import HOME_POSE, Pose
from trajectories.generator import builtin_spec, builtin_specs, generate, load_specs, resolve_specs
from trajectories.ingest import POSE_HEADER, infer_dt, ingest_csv, write_csv
from trajectories.models import TrajectoryKind, TrajectorySample, TrajectorySpec
from trajectories.smoothing import loess_smooth


def _run(times, values) -> list[TrajectorySample]:
    """Samples with every DOF set to the same series (xm, zm in m; angles in rad)."""
    return [TrajectorySample(t=float(t), pose=Pose(v, v, v, v), index=k) for k, (t, v) in enumerate(zip(times, values))]


# ──────────────────────────────────────────────────────────────────────────────
# Generation
# ──────────────────────────────────────────────────────────────────────────────


class TestGenerate:
    """Tests for generate() and the built-in specs."""

    def test_vt1_runs_from_home_to_endpoint(self):
        samples = generate(builtin_spec("VT1"), dt=0.1)
        assert len(samples) == 250
        assert samples[0].pose == HOME_POSE
        last = samples[-1].pose
        assert math.isclose(last.xm, 0.2174, abs_tol=1e-12), f"{last}"
        assert math.isclose(last.theta_deg, 27.74, abs_tol=1e-9), f"{last}"
        assert math.isclose(samples[-1].t, 24.9, abs_tol=1e-9)

    def test_rotation_sweep_moves_psi_only(self):
        """TT1 holds xm at -0.155 m while ψ rises to 59°."""
        samples = generate(builtin_spec("TT1"))
        psis = [s.pose.psi for s in samples]
        assert all(b > a for a, b in zip(psis, psis[1:]))
        assert all(s.pose.xm == -0.155 for s in samples)
        assert math.isclose(samples[-1].pose.psi_deg, 59.0, abs_tol=1e-9)

    def test_tt_sets_have_400_samples(self):
        samples = generate(builtin_spec("tt3"))
        assert len(samples) == 400
        assert samples[244].index == 244

    def test_elliptical_midpoint_reaches_semi_axis(self):
        start = Pose(0.1, 0.66, 0.0, 0.0)
        spec = TrajectorySpec("bump", TrajectoryKind.ELLIPTICAL, start, Pose(0.3, 0.66, 0.0, 0.0), samples=5, semi_axis=0.08)
        samples = generate(spec)
        assert math.isclose(samples[2].pose.zm, 0.66 + 0.08, abs_tol=1e-12), f"{samples[2].pose}"
        assert math.isclose(samples[2].pose.xm, 0.2, abs_tol=1e-12)
        assert math.isclose(samples[-1].pose.zm, 0.66, abs_tol=1e-12)

    def test_single_sample_is_start(self):
        spec = TrajectorySpec("one", TrajectoryKind.LINEAR, HOME_POSE, Pose(0.1, 0.7, 0.0, 0.0), samples=1)
        samples = generate(spec)
        assert len(samples) == 1 and samples[0].pose == HOME_POSE

    def test_family_sizes(self):
        assert [len(builtin_specs(f)) for f in ("TT", "VT", "ACT")] == [9, 3, 3]
        assert [s.name for s in builtin_specs("vt")] == ["VT1", "VT2", "VT3"]

    def test_bad_inputs(self):
        with pytest.raises(InvalidSpec):
            builtin_spec("TT10")
        with pytest.raises(InvalidSpec):
            builtin_specs("XT")
        with pytest.raises(InvalidSpec):
            generate(builtin_spec("VT1"), dt=0.0)
        with pytest.raises(InvalidSpec):
            TrajectorySpec("", TrajectoryKind.LINEAR, HOME_POSE, HOME_POSE, samples=10)
        with pytest.raises(InvalidSpec):
            TrajectorySpec("nan", TrajectoryKind.LINEAR, HOME_POSE, Pose(math.nan, 0.7, 0.0, 0.0), samples=10)


class TestSpecFiles:
    """Tests for the JSON spec format."""

    def test_dict_round_trip(self):
        spec = builtin_spec("TT3")
        again = TrajectorySpec.from_dict(json.loads(json.dumps(spec.to_dict())))
        assert again.kind is TrajectoryKind.ELLIPTICAL
        assert again.samples == 400 and again.semi_axis == 0.08
        assert again.end.distance(spec.end) <= 1e-12

    def test_load_list_and_resolve(self, tmp_path):
        path = tmp_path / "specs.json"
        path.write_text(json.dumps([builtin_spec("VT2").to_dict(), builtin_spec("ACT1").to_dict()]))
        assert [s.name for s in load_specs(path)] == ["VT2", "ACT1"]
        assert [s.name for s in resolve_specs(str(path))] == ["VT2", "ACT1"]
        assert [s.name for s in resolve_specs("builtin:ACT")] == ["ACT1", "ACT2", "ACT3"]
        assert [s.name for s in resolve_specs("builtin:vt3")] == ["VT3"]

    def test_missing_fields_rejected(self, tmp_path):
        with pytest.raises(InvalidSpec, match="kind"):
            TrajectorySpec.from_dict({"name": "x", "start": {"xm": 0, "zm": 0.7}, "end": {"xm": 0, "zm": 0.7}})
        with pytest.raises(InvalidSpec, match="zm"):
            TrajectorySpec.from_dict({"name": "x", "kind": "linear-multiaxis", "start": {"xm": 0}, "end": {"xm": 0, "zm": 0.7}})
        with pytest.raises(InvalidSpec, match="helix"):
            TrajectorySpec.from_dict({"name": "x", "kind": "helix"})
        broken = tmp_path / "broken.json"
        broken.write_text("[{")
        with pytest.raises(InvalidSpec):
            load_specs(broken)

    def test_non_utf8_spec_file(self, tmp_path):
        latin = tmp_path / "latin.json"
        latin.write_bytes(b'{"name": "caf\xe9"}')
        with pytest.raises(InvalidSpec, match="UTF-8"):
            load_specs(latin)


# ──────────────────────────────────────────────────────────────────────────────
# Pose CSV
# ──────────────────────────────────────────────────────────────────────────────


class TestPoseCsv:
    """Tests for ingest_csv(), write_csv() and infer_dt()."""

    def test_write_then_ingest(self, tmp_path):
        samples = generate(builtin_spec("VT3"), dt=0.1)
        path = write_csv(samples, tmp_path / "vt3.csv")
        assert path.read_text().splitlines()[0] == ",".join(POSE_HEADER)
        loaded = ingest_csv(path)
        assert len(loaded) == len(samples)
        for a, b in zip(samples, loaded):
            assert a.pose.distance(b.pose) <= 1e-12, f"{a.pose} != {b.pose}"

    def test_high_rate_run(self, tmp_path):
        """A 120 Hz capture keeps its 8.3 ms spacing."""
        path = tmp_path / "capture.csv"
        rows = [",".join(POSE_HEADER)] + [f"{k * 0.0083!r},0.0,0.7,0.0,0.0" for k in range(50)]
        path.write_text("\n".join(rows) + "\n")
        samples = ingest_csv(path)
        assert math.isclose(infer_dt(samples), 0.0083, rel_tol=1e-9)

    def test_bad_cell_reports_row_and_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,xm,zm,theta_deg,psi_deg\n0.0,0,0.7,0,0\n0.1,0,abc,0,0\n")
        with pytest.raises(ParseError) as info:
            ingest_csv(path)
        assert info.value.row == 3, f"row={info.value.row}"
        assert info.value.column == "zm"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "header.csv"
        path.write_text("time,x,z,theta,psi\n0,0,0.7,0,0\n")
        with pytest.raises(ParseError, match="header"):
            ingest_csv(path)

    def test_short_row(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("t,xm,zm,theta_deg,psi_deg\n0.0,0,0.7,0\n")
        with pytest.raises(ParseError) as info:
            ingest_csv(path)
        assert info.value.row == 2

    def test_non_utf8_bytes(self, tmp_path):
        path = tmp_path / "latin.csv"
        path.write_bytes(b"t,xm,zm,theta_deg,psi_deg\n0.0,0,0.7,0,\xff\n")
        with pytest.raises(ParseError, match="UTF-8"):
            ingest_csv(path)

    def test_uneven_spacing_rejected(self):
        with pytest.raises(NonUniformDt):
            infer_dt(_run([0.0, 0.1, 0.2, 0.35], [0.0] * 4))
        with pytest.raises(NonUniformDt):
            infer_dt(_run([0.0, 0.1, 0.1], [0.0] * 3))
        with pytest.raises(NonUniformDt):
            infer_dt(_run([0.0], [0.0]))

    def test_small_jitter_warns(self, caplog):
        times = [0.0, 0.1, 0.2005, 0.3, 0.4]
        with caplog.at_level(logging.WARNING, logger="trajectories.ingest"):
            dt = infer_dt(_run(times, [0.0] * 5))
        assert math.isclose(dt, 0.1, rel_tol=1e-9)
        assert "jitters" in caplog.text


# ──────────────────────────────────────────────────────────────────────────────
# Smoothing
# ──────────────────────────────────────────────────────────────────────────────


class TestLoess:
    """Tests for loess_smooth()."""

    def test_constant_is_unchanged(self):
        smooth = loess_smooth(_run(np.arange(40) * 0.1, [0.3] * 40))
        assert all(math.isclose(s.pose.zm, 0.3, abs_tol=1e-12) for s in smooth)

    def test_linear_is_reproduced(self):
        times = np.arange(100) * 0.05
        smooth = loess_smooth(_run(times, 0.2 + 0.03 * times), span=0.2, degree=1, out_dt=0.1)
        assert len(smooth) == 50
        for s in smooth:
            assert math.isclose(s.pose.xm, 0.2 + 0.03 * s.t, abs_tol=1e-9), f"{s.t}: {s.pose.xm}"

    def test_noise_is_reduced(self):
        rng = np.random.default_rng(8)
        times = np.arange(200) * 0.1
        truth = 0.1 * np.sin(0.2 * times)
        noisy = truth + rng.normal(0.0, 2e-3, len(times))
        smooth = loess_smooth(_run(times, noisy), span=0.3, degree=2, out_dt=0.1)
        error = np.array([s.pose.theta for s in smooth]) - truth
        rms = float(np.sqrt(np.mean(error**2)))
        assert rms < 1e-3, f"rms error {rms:.2e}"

    def test_robust_iterations_reject_spike(self):
        rng = np.random.default_rng(9)
        times = np.arange(100) * 0.1
        truth = 0.7 + 0.01 * times
        values = truth + rng.normal(0.0, 1e-3, len(times))
        values[50] += 1.0
        plain = loess_smooth(_run(times, values), span=0.3, out_dt=0.1)
        robust = loess_smooth(_run(times, values), span=0.3, out_dt=0.1, robust_iterations=2)
        assert abs(plain[50].pose.zm - truth[50]) > 0.03
        assert abs(robust[50].pose.zm - truth[50]) < 0.01, f"{robust[50].pose.zm} vs {truth[50]}"

    def test_too_few_samples(self):
        with pytest.raises(InsufficientData):
            loess_smooth(_run([0.0, 0.1, 0.2, 0.3], [0.0] * 4))

    def test_bad_parameters(self):
        run = _run(np.arange(20) * 0.1, [0.0] * 20)
        for kwargs in ({"span": 0.0}, {"span": 1.5}, {"degree": 3}, {"out_dt": -0.1}, {"robust_iterations": -1}):
            with pytest.raises(ConfigError):
                loess_smooth(run, **kwargs)
