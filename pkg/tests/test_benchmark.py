"""
Tests for the benchmark package.

Covers:
- Scanning trajectories: minima, failures and det J_D crossings
- Deriving and verifying experimental limits
- Normalized rates of change
- Report files
"""

from __future__ import annotations

import csv
import json
import logging
import math
import random

import numpy as np
import pytest

from benchmark.benchmark import (
    check_verification_set,
    compare_rates,
    convention_report,
    derive_limits,
    minima_from_assessments,
    rate_of_change,
    run_benchmark,
    scan,
    verify_limits,
)
from benchmark.models import ExperimentalLimits, LimitIndex, Normalization, TrajectoryMinima, Verdict
from benchmark.report import SAMPLE_HEADER, read_minima, read_series, report, write_summary
from model.errors import ConfigError, EmptyInput, InsufficientData, NoConvergence, ParseError, ZeroReference
from model.geometry import default_geometry
from screws.assess import assess
from trajectories.generator import builtin_spec, builtin_specs, generate
from trajectories.models import TrajectorySample

GEOM = default_geometry()

# Measured minima of the nine test trajectories (|detJD|, Ω34 in degrees)
MEASURED_TT = [
    ("TT1", 0.0041, 0.0000),
    ("TT2", 0.0113, 1.0508),
    ("TT3", 0.0109, 0.9470),
    ("TT4", 0.0152, 1.9782),
    ("TT5", 0.0163, 1.1556),
    ("TT6", 0.0195, 2.6781),
    ("TT7", 0.0207, 3.1103),
    ("TT8", 0.0217, 2.6425),
    ("TT9", 0.0166, 2.5478),
]


def _minima(rows) -> list[TrajectoryMinima]:
    return [TrajectoryMinima(name, det, None, omega, None) for name, det, omega in rows]


@pytest.fixture(scope="module")
def vt_scans():
    return {s.name: s for s in run_benchmark(GEOM, builtin_specs("VT"), dt=0.1)}


# ──────────────────────────────────────────────────────────────────────────────
# Scanning
# ──────────────────────────────────────────────────────────────────────────────


class TestScan:
    """Tests for scan() and minima_from_assessments()."""

    def test_constant_trajectory(self):
        """Holding one pose gives its own indices as minima at sample 0."""
        pose = builtin_spec("VT2").end
        samples = [TrajectorySample(t=0.1 * k, pose=pose, index=k) for k in range(5)]
        result = scan(GEOM, samples, name="hold")
        expected = assess(GEOM, pose)
        assert result.minima.argmin_det_jd == 0 and result.minima.argmin_omega34 == 0
        assert math.isclose(result.minima.min_det_jd, abs(expected.det_jd), rel_tol=1e-12)
        assert result.crossings == []
        assert math.isclose(result.dt, 0.1, rel_tol=1e-9)

    def test_vt1_minimum_at_endpoint(self, vt_scans):
        minima = vt_scans["VT1"].minima
        assert minima.argmin_det_jd == 249, f"{minima}"
        assert minima.argmin_omega34 == 249, f"{minima}"
        assert math.isclose(minima.min_det_jd, 0.0195, abs_tol=2e-4), f"{minima}"
        assert math.isclose(minima.min_omega34, 2.928, abs_tol=0.01), f"{minima}"

    def test_minima_match_series(self, vt_scans):
        for scan_result in vt_scans.values():
            assert math.isclose(scan_result.minima.min_det_jd, float(np.nanmin(scan_result.series("abs_detJD"))))
            assert math.isclose(scan_result.minima.min_omega34, float(np.nanmin(scan_result.series("omega34"))))

    def test_tt2_crosses_type_ii(self):
        """TT2 changes det J_D sign near sample 152; the crossing is a Type II singularity."""
        result = scan(GEOM, generate(builtin_spec("TT2")), name="TT2")
        assert result.crossings, "TT2 should cross det J_D = 0"
        first = result.crossings[0]
        assert abs(first.index - 152) <= 5, f"crossing after sample {first.index}"
        assert abs(first.det_jd) < 1e-8
        assert first.assessment is not None and first.assessment.omega_min < 0.1, f"{first.assessment}"

    def test_stopped_run(self):
        """A stopped run reports the sample just before the stop."""
        result = scan(GEOM, generate(builtin_spec("VT1")), name="VT1", stopped_at=100)
        assert result.minima.argmin_det_jd == 99
        assert result.minima.stopped_at == 100

    def test_stopped_out_and_back_uses_last_value(self):
        """Out along VT1 and back: the stop value, not the deeper minimum at the far end."""
        out = generate(builtin_spec("VT1"))
        poses = [s.pose for s in out] + [s.pose for s in reversed(out[:-1])]
        samples = [TrajectorySample(t=0.1 * k, pose=p, index=k) for k, p in enumerate(poses)]
        result = scan(GEOM, samples, name="out-and-back", stopped_at=349, locate=False)
        expected = assess(GEOM, poses[348])
        deepest = assess(GEOM, poses[249])
        assert result.minima.argmin_det_jd == 348 and result.minima.argmin_omega34 == 348
        assert math.isclose(result.minima.min_det_jd, abs(expected.det_jd), rel_tol=1e-12)
        assert math.isclose(result.minima.min_omega34, expected.omega34, rel_tol=1e-12)
        assert result.minima.min_det_jd > abs(deepest.det_jd) + 1e-3, f"{result.minima}"

    def test_stopped_run_skips_failed_last_sample(self, caplog):
        a = assess(GEOM, builtin_spec("VT1").end)
        with caplog.at_level(logging.WARNING, logger="benchmark.benchmark"):
            minima = minima_from_assessments("gap", [a, a, None], stopped_at=3)
        assert minima.argmin_det_jd == 1
        assert "sample 2 failed" in caplog.text

    def test_bad_stop_and_empty(self):
        samples = generate(builtin_spec("VT1"))
        with pytest.raises(ConfigError):
            scan(GEOM, samples, stopped_at=0)
        with pytest.raises(ConfigError):
            scan(GEOM, samples, stopped_at=len(samples) + 1)
        with pytest.raises(EmptyInput):
            scan(GEOM, [])

    def test_failed_sample_is_skipped(self, mocker, caplog):
        """One sample raising is logged and left out of the minima; the scan continues."""
        samples = generate(builtin_spec("VT1"))[:10]
        calls = {"n": 0}

        def flaky(geom, pose, limits=None):
            calls["n"] += 1
            if calls["n"] == 4:
                raise NoConvergence("boom")
            return assess(geom, pose, limits)

        mocker.patch("benchmark.benchmark.assess", side_effect=flaky)
        with caplog.at_level(logging.ERROR, logger="benchmark.benchmark"):
            result = scan(GEOM, samples, name="flaky", locate=False)
        assert list(result.failures) == [3]
        assert result.assessments[3] is None
        assert math.isnan(result.series("detJD")[3])
        assert result.minima.argmin_det_jd == 9
        assert "sample 3" in caplog.text

    def test_all_failed_gives_nan(self):
        minima = minima_from_assessments("none", [None, None])
        assert math.isnan(minima.min_det_jd) and minima.argmin_det_jd is None


# ──────────────────────────────────────────────────────────────────────────────
# Limits
# ──────────────────────────────────────────────────────────────────────────────


class TestDeriveLimits:
    """Tests for derive_limits()."""

    def test_measured_test_set(self):
        """The nine measured minima average to 0.0151 / 1.79° and round to 0.015 / 1.8°."""
        limits = derive_limits(_minima(MEASURED_TT))
        assert limits.lim_det_jd == 0.015, f"{limits}"
        assert limits.lim_omega_deg == 1.8, f"{limits}"
        assert math.isclose(limits.mean_det_jd, 0.0151444, abs_tol=1e-6)
        assert math.isclose(limits.mean_omega_deg, 1.790033, abs_tol=1e-5)
        assert len(limits.provenance) == 9

    def test_order_does_not_matter(self):
        rows = MEASURED_TT.copy()
        random.Random(3).shuffle(rows)
        shuffled = derive_limits(_minima(rows))
        assert (shuffled.lim_det_jd, shuffled.lim_omega_deg) == (0.015, 1.8)

    def test_single_trajectory(self):
        limits = derive_limits(_minima([("one", 0.01234, 2.345)]))
        assert (limits.lim_det_jd, limits.lim_omega_deg) == (0.012, 2.3)

    def test_half_up_on_decimal_text(self):
        """0.0155 sits on the rounding boundary and goes up, not down."""
        limits = derive_limits(_minima([("edge", 0.0155, 1.75)]))
        assert (limits.lim_det_jd, limits.lim_omega_deg) == (0.016, 1.8)

    def test_hundredths_for_omega(self):
        limits = derive_limits(_minima(MEASURED_TT), omega_quantum=0.01)
        assert limits.lim_omega_deg == 1.79

    def test_nan_entries_ignored(self):
        rows = _minima(MEASURED_TT) + [TrajectoryMinima("lost", math.nan, None, math.nan, None)]
        assert derive_limits(rows).lim_det_jd == 0.015

    def test_empty(self):
        with pytest.raises(EmptyInput):
            derive_limits([])


class TestVerifyLimits:
    """Tests for verify_limits() and check_verification_set()."""

    def test_vt1_passes_vt2_flagged(self, vt_scans):
        checks = {c.name: c for c in verify_limits([s.minima for s in vt_scans.values()], ExperimentalLimits.default())}
        assert checks["VT1"].verdict is Verdict.PASS, f"{checks['VT1']}"
        assert checks["VT2"].verdict is Verdict.FLAG, f"{checks['VT2']}"

    def test_single_index(self):
        limits = ExperimentalLimits(lim_det_jd=0.015, lim_omega_deg=1.8)
        m = TrajectoryMinima("mixed", 0.02, None, 1.0, None)
        assert verify_limits([m], limits, LimitIndex.DET_JD)[0].verdict is Verdict.PASS
        assert verify_limits([m], limits, LimitIndex.OMEGA34)[0].verdict is Verdict.FLAG
        assert verify_limits([m], limits, LimitIndex.BOTH)[0].verdict is Verdict.FLAG

    def test_limit_itself_passes(self):
        m = TrajectoryMinima("edge", 0.015, None, 1.8, None)
        assert verify_limits([m], ExperimentalLimits.default())[0].verdict is Verdict.PASS

    def test_lower_limits_never_flag_more(self):
        minima = _minima(MEASURED_TT)
        strict = verify_limits(minima, ExperimentalLimits(0.015, 1.8))
        loose = verify_limits(minima, ExperimentalLimits(0.010, 1.0))
        flagged = lambda checks: {c.name for c in checks if c.verdict is Verdict.FLAG}  # noqa: E731
        assert flagged(loose) <= flagged(strict)

    def test_empty_set(self):
        assert verify_limits([], ExperimentalLimits.default()) == []

    def test_verification_set_size(self, caplog):
        assert check_verification_set(9, 3)
        with caplog.at_level(logging.WARNING, logger="benchmark.benchmark"):
            assert not check_verification_set(9, 2)
        assert "3 needed" in caplog.text


# ──────────────────────────────────────────────────────────────────────────────
# Rates
# ──────────────────────────────────────────────────────────────────────────────


class TestRates:
    """Tests for rate_of_change() and compare_rates()."""

    def test_constant_has_zero_rate(self):
        assert np.allclose(rate_of_change([0.02] * 10, 0.1), 0.0)

    def test_linear_drop_to_zero(self):
        """A series falling linearly to zero over T seconds changes at -100/T %/s."""
        t = np.arange(51) * 0.1
        rates = rate_of_change(1.0 - t / 5.0, 0.1)
        assert np.allclose(rates, -20.0), f"{rates[:3]}"

    def test_max_normalization(self):
        rates = rate_of_change([1.0, 2.0, 4.0], 1.0, Normalization.MAX)
        assert np.allclose(rates, [25.0, 37.5, 50.0])

    def test_errors(self):
        with pytest.raises(ZeroReference):
            rate_of_change([0.0, 1.0], 0.1)
        with pytest.raises(InsufficientData):
            rate_of_change([1.0], 0.1)
        with pytest.raises(ConfigError):
            rate_of_change([1.0, 2.0], 0.0)

    def test_omega_falls_faster_on_vt2_and_vt3(self, vt_scans):
        for name in ("VT2", "VT3"):
            comparison = compare_rates(vt_scans[name])
            assert comparison.omega_faster, f"{comparison}"
            assert comparison.difference < 0


class TestConventionReport:
    """Tests for convention_report()."""

    def test_rows_and_choice(self):
        result = convention_report(GEOM)
        assert len(result.rows) == 6
        assert {r.convention for r in result.rows} == {"standard", "mirrored"}
        assert set(result.closer) == {"VT1", "VT2", "VT3"}
        totals = {c: sum(r.error for r in result.rows if r.convention == c) for c in ("standard", "mirrored")}
        assert result.overall == min(totals, key=totals.get)
        assert result.overall == "standard", f"{result}"
        vt1 = next(r for r in result.rows if r.name == "VT1" and r.convention == "standard")
        assert vt1.within_tolerance, f"{vt1}"


# ──────────────────────────────────────────────────────────────────────────────
# Reports
# ──────────────────────────────────────────────────────────────────────────────


class TestReport:
    """Tests for the report files."""

    def test_single_scan_has_no_average_row(self, tmp_path, vt_scans):
        paths = report([vt_scans["VT1"]], tmp_path)
        with (tmp_path / "summary.csv").open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["name"] for r in rows] == ["VT1"]
        assert tmp_path / "VT1_samples.csv" in paths
        assert not (tmp_path / "limits.json").exists()

    def test_sample_file_columns(self, tmp_path, vt_scans):
        report([vt_scans["VT2"]], tmp_path)
        with (tmp_path / "VT2_samples.csv").open(newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == SAMPLE_HEADER
        assert len(rows) == 251
        assert all(len(r) == len(SAMPLE_HEADER) for r in rows)

    def test_average_row_for_measured_set(self, tmp_path):
        path = write_summary(_minima(MEASURED_TT), tmp_path / "summary.csv")
        with path.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        average = rows[-1]
        assert average["name"] == "Average"
        assert round(float(average["min_detJD"]), 4) == 0.0151
        assert round(float(average["min_omega34_deg"]), 4) == 1.79
        again = read_minima(path)
        assert [m.name for m in again] == [name for name, _, _ in MEASURED_TT]

    def test_series_files_re_read(self, tmp_path, vt_scans):
        report(list(vt_scans.values()), tmp_path, limits=ExperimentalLimits.default())
        times, values = read_series(tmp_path / "series" / "VT3_omega34.csv")
        assert np.array_equal(times, vt_scans["VT3"].times)
        assert np.array_equal(values, vt_scans["VT3"].series("omega34"))
        limits = json.loads((tmp_path / "limits.json").read_text())
        assert limits["lim_detJD"] == 0.015

    def test_non_utf8_inputs(self, tmp_path):
        minima = tmp_path / "minima.csv"
        minima.write_bytes(b"name,min_detJD,min_omega34_deg\nTT\xff,0.01,1.0\n")
        series = tmp_path / "series.csv"
        series.write_bytes(b"t,value\n0.0,\xff\n")
        with pytest.raises(ParseError, match="UTF-8"):
            read_minima(minima)
        with pytest.raises(ParseError, match="UTF-8"):
            read_series(series)
