"""
Tests for the assembly package.

Covers:
- Multi-start enumeration of assembly modes
- Determinism and monotone coverage of the start sequence
- Singular and non-singular assembly-change reports
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from assembly.models import AssemblyMode, ChangeKind, SearchBox
from assembly.modes import MAX_MODES, enumerate_modes, mode_distance, mode_pair_report, sobol_starts
from kinematics.constraints import constraints
from kinematics.solver import det_jd, inverse
from model.errors import ConfigError, ModesIdentical
from model.geometry import default_geometry
from model.pose import HOME_POSE, Pose

GEOM = default_geometry()
ACT1_END = Pose.from_degrees(0.016, 0.7076, -14.67, 20)
ACT3_END = Pose.from_degrees(-0.144, 0.7047, 7.78, 16.8)


@pytest.fixture(scope="module")
def act1_catalog():
    return enumerate_modes(GEOM, inverse(GEOM, ACT1_END), n_starts=4096, seed=0)


@pytest.fixture(scope="module")
def act3_catalog():
    return enumerate_modes(GEOM, inverse(GEOM, ACT3_END), n_starts=4096, seed=0)


def _nearest(catalog, pose: Pose) -> AssemblyMode:
    return min(catalog.modes, key=lambda m: mode_distance(m.pose, pose))


class TestSearchBox:
    """Tests for SearchBox and the start sequence."""

    def test_bad_bounds_rejected(self):
        with pytest.raises(ConfigError):
            SearchBox(xm=(0.4, -0.4))

    def test_starts_inside_box(self):
        box = SearchBox()
        starts = sobol_starts(box, 300, seed=1)
        assert starts.shape == (300, 4)
        assert np.all(starts >= box.lower) and np.all(starts <= box.upper)

    def test_start_prefix_is_stable(self):
        """Asking for more starts keeps the earlier ones."""
        short = sobol_starts(SearchBox(), 100, seed=3)
        long = sobol_starts(SearchBox(), 400, seed=3)
        assert np.array_equal(short, long[:100])


class TestEnumerateModes:
    """Tests for enumerate_modes()."""

    def test_act1_has_three_feasible_modes_including_nominal(self, act1_catalog):
        assert len(act1_catalog.feasible) >= 3, f"{act1_catalog}"
        nominal = _nearest(act1_catalog, ACT1_END)
        assert mode_distance(nominal.pose, ACT1_END) <= 1e-6, f"nominal found as {nominal.pose}"
        assert len(act1_catalog) <= MAX_MODES

    def test_act3_has_two_feasible_modes(self, act3_catalog):
        assert len(act3_catalog.feasible) >= 2, f"{act3_catalog}"
        assert len(act3_catalog) <= MAX_MODES

    def test_every_mode_solves_the_constraints(self, act1_catalog):
        act = inverse(GEOM, ACT1_END)
        for mode in act1_catalog.modes:
            residual = constraints(GEOM, mode.pose, act).max_abs
            assert residual <= 1e-9, f"mode {mode.pose} residual {residual:.2e}"
            assert mode.residual <= 1e-9

    def test_modes_are_distinct_and_sorted(self, act1_catalog):
        modes = act1_catalog.modes
        for i, a in enumerate(modes):
            for b in modes[i + 1 :]:
                assert mode_distance(a.pose, b.pose) > 1e-6
        keys = [(m.pose.zm, m.pose.xm) for m in modes]
        assert keys == sorted(keys)

    def test_feasibility_and_tan_half(self, act1_catalog):
        for mode in act1_catalog.modes:
            assert mode.feasible == (mode.pose.zm > 0)
            x1, x2, x3, x4 = mode.tan_half
            assert (x1, x2) == (mode.pose.xm, mode.pose.zm)
            assert math.isclose(x3, math.tan(mode.pose.theta / 2))
            assert math.isclose(x4, math.tan(mode.pose.psi / 2))

    def test_deterministic_and_monotone(self):
        """Same seed gives the same catalog; more starts never lose a mode."""
        act = inverse(GEOM, ACT3_END)
        small = enumerate_modes(GEOM, act, n_starts=512, seed=7)
        again = enumerate_modes(GEOM, act, n_starts=512, seed=7)
        large = enumerate_modes(GEOM, act, n_starts=2048, seed=7)
        assert [m.pose for m in small.modes] == [m.pose for m in again.modes]
        for mode in small.modes:
            assert any(mode_distance(mode.pose, other.pose) <= 1e-6 for other in large.modes), f"{mode.pose} lost"

    def test_diagnostics(self, act3_catalog):
        assert act3_catalog.starts == 4096
        assert act3_catalog.converged >= len(act3_catalog)
        assert "feasible" in str(act3_catalog)

    def test_zero_starts_rejected(self):
        with pytest.raises(ConfigError):
            enumerate_modes(GEOM, inverse(GEOM, HOME_POSE), n_starts=0)


class TestModePairReport:
    """Tests for mode_pair_report()."""

    def test_act1_singular_change(self, act1_catalog):
        """The nominal ACT1 mode and a feasible mode of opposite det sign are separated by det J_D = 0."""
        act = inverse(GEOM, ACT1_END)
        nominal = _nearest(act1_catalog, ACT1_END)
        opposite = [m for m in act1_catalog.feasible if m.det_jd * nominal.det_jd < 0]
        assert opposite, f"no feasible mode with opposite det sign in {act1_catalog}"
        partner = min(opposite, key=lambda m: mode_distance(m.pose, nominal.pose))

        result = mode_pair_report(GEOM, act, nominal, partner)
        assert result.kind is ChangeKind.SINGULAR
        assert result.sign_a != result.sign_b
        assert 0.0 < result.crossing_fraction < 1.0
        assert abs(result.crossing_det_jd) < 1e-8, f"det at crossing {result.crossing_det_jd:.2e}"

    def test_same_sign_without_crossing_is_candidate(self):
        """Two nearby poses on the same side of det J_D = 0 report a non-singular candidate."""
        act = inverse(GEOM, HOME_POSE)
        near = Pose(0.01, 0.7, 0.0, 0.0)
        a = AssemblyMode(pose=HOME_POSE, residual=0.0, det_jd=det_jd(GEOM, HOME_POSE))
        b = AssemblyMode(pose=near, residual=0.0, det_jd=det_jd(GEOM, near))
        result = mode_pair_report(GEOM, act, a, b)
        assert result.kind is ChangeKind.NON_SINGULAR_CANDIDATE
        assert result.crossing_pose is None

    def test_identical_modes_rejected(self, act3_catalog):
        mode = act3_catalog.modes[0]
        with pytest.raises(ModesIdentical):
            mode_pair_report(GEOM, inverse(GEOM, ACT3_END), mode, mode)

    def test_report_serializes(self, act1_catalog):
        a, b = act1_catalog.modes[0], act1_catalog.modes[-1]
        d = mode_pair_report(GEOM, inverse(GEOM, ACT1_END), a, b).to_dict()
        assert d["kind"] in {k.value for k in ChangeKind}
        assert set(d["mode_a"]) == {"xm", "zm", "theta_deg", "psi_deg", "detJD", "feasible", "residual"}
