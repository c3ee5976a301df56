"""
Command-line front end for singulark.

Subcommands
-----------
    ik         actuator lengths for a pose
    fk         pose for actuator lengths (Newton from a seed pose)
    eval       det J_D, Ω indices and class of a pose
    traj       generate (or ingest) trajectories, scan and report them
    modes      enumerate assembly modes for actuator lengths
    benchmark  derive experimental limits from a test set, verify a second set
    report     derive limits from a minima CSV (measured runs)

Angles on the command line are degrees.  Exit codes: 0 success, 2 forward
kinematics failed, 64 usage error, 65 data error.

Usage
-----
    python -m cli.main ik --pose 0.15,0.7,0,0
    python -m cli.main benchmark --set builtin:TT --verify builtin:VT --derive-limits
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from assembly.modes import enumerate_modes, mode_pair_report
from benchmark.benchmark import (
    check_verification_set,
    compare_rates,
    convention_report,
    derive_limits,
    run_benchmark,
    scan,
    verify_limits,
)
from benchmark.models import ExperimentalLimits, LimitIndex
from benchmark.report import read_minima, report, write_limits, write_modes, write_summary
from config.settings import Settings
from kinematics.constraints import constraints
from kinematics.models import ActuatorVector
from kinematics.solver import inverse, solve_forward
from model.errors import ConfigError, NoConvergence, SingularJacobian, SingularkError
from model.geometry import RobotGeometry, load_geometry
from model.pose import HOME_POSE, Pose
from screws.assess import assess
from screws.models import AssessmentLimits
from trajectories.generator import generate, resolve_specs
from trajectories.ingest import ingest_csv, infer_dt, write_csv
from trajectories.smoothing import loess_smooth

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_KINEMATICS = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    """Bad command-line usage."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _vector(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected four comma-separated numbers, got {text!r}") from exc
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"expected four comma-separated numbers, got {len(values)}")
    return values


# ──────────────────────────────────────────────────────────────────────────────
# Run configuration
# ──────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on: settings overridden by command-line flags."""

    geometry_path: str
    dt: float
    omega_tol_deg: float
    v_tol: float
    d_tol: float
    lim_detjd: float
    lim_omega_deg: float
    output_dir: str
    seed: int
    n_starts: int
    log_level: str

    def __post_init__(self) -> None:
        for name in ("dt", "omega_tol_deg", "v_tol", "d_tol", "lim_detjd", "lim_omega_deg"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigError(f"{name} must be > 0, got {value!r}")
        if self.n_starts < 1:
            raise ConfigError(f"n_starts must be >= 1, got {self.n_starts}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: Settings) -> RunConfig:
        def pick(flag: str, fallback):
            value = getattr(args, flag, None)
            return fallback if value is None else value

        return cls(
            geometry_path=pick("geometry", settings.GEOMETRY_PATH),
            dt=pick("dt", settings.DT),
            omega_tol_deg=pick("omega_tol", settings.OMEGA_TOL_DEG),
            v_tol=pick("v_tol", settings.V_TOL),
            d_tol=pick("d_tol", settings.D_TOL),
            lim_detjd=pick("lim_detjd", settings.LIM_DETJD),
            lim_omega_deg=pick("lim_omega", settings.LIM_OMEGA_DEG),
            output_dir=pick("output_dir", settings.OUTPUT_DIR),
            seed=pick("seed", settings.SEED),
            n_starts=pick("n_starts", settings.N_STARTS),
            log_level=pick("log_level", settings.LOG_LEVEL),
        )

    @property
    def assessment_limits(self) -> AssessmentLimits:
        return AssessmentLimits(
            omega_tol_deg=self.omega_tol_deg,
            v_tol=self.v_tol,
            d_tol=self.d_tol,
            lim_detjd=self.lim_detjd,
            lim_omega_deg=self.lim_omega_deg,
        )

    @property
    def experimental_limits(self) -> ExperimentalLimits:
        return ExperimentalLimits(lim_det_jd=self.lim_detjd, lim_omega_deg=self.lim_omega_deg)

    def geometry(self) -> RobotGeometry:
        return load_geometry(self.geometry_path)


# ──────────────────────────────────────────────────────────────────────────────
# Subcommands
# ──────────────────────────────────────────────────────────────────────────────


def cmd_ik(args: argparse.Namespace, run: RunConfig) -> int:
    pose = Pose.from_degrees(*args.pose)
    act = inverse(run.geometry(), pose)
    print(f"pose {pose}")
    for name, value in act.to_dict().items():
        print(f"{name} = {value!r}")
    return EXIT_OK


def cmd_fk(args: argparse.Namespace, run: RunConfig) -> int:
    geom = run.geometry()
    act = ActuatorVector.from_array(args.act)
    seed = Pose.from_degrees(*args.seed_pose) if args.seed_pose else HOME_POSE
    solution = solve_forward(geom, act, seed)
    pose = solution.pose
    residual = constraints(geom, pose, act)
    print(f"pose {pose}")
    print(f"xm = {pose.xm!r}\nzm = {pose.zm!r}\ntheta_deg = {pose.theta_deg!r}\npsi_deg = {pose.psi_deg!r}")
    print(f"residual = {residual.max_abs:.3e} ({solution.iterations} iterations, {solution.damped_steps} damped)")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, run: RunConfig) -> int:
    pose = Pose.from_degrees(*args.pose)
    result = assess(run.geometry(), pose, run.assessment_limits)
    print(result)
    for (i, j), value in result.omega_deg.items():
        print(f"  Ω{i}{j} = {value:.4f}°  gap = {result.lin_gap[(i, j)]:.4g} m")
    record = result.to_dict()
    print(",".join(record))
    print(",".join(repr(v) if isinstance(v, float) else str(v) for v in record.values()))
    return EXIT_OK


def cmd_traj(args: argparse.Namespace, run: RunConfig) -> int:
    geom = run.geometry()
    out = Path(run.output_dir)
    limits = run.assessment_limits
    scans = []

    if args.input:
        samples = ingest_csv(args.input)
        dt = infer_dt(samples) if len(samples) > 1 else run.dt
        if args.smooth_span:
            samples = loess_smooth(samples, span=args.smooth_span, degree=args.smooth_degree, out_dt=run.dt)
            dt = run.dt
        name = Path(args.input).stem
        scans.append(scan(geom, samples, name=name, limits=limits, stopped_at=args.stopped_at, dt=dt))
    else:
        for spec in resolve_specs(args.spec):
            samples = generate(spec, run.dt)
            write_csv(samples, out / f"{spec.name}.csv")
            scans.append(scan(geom, samples, name=spec.name, limits=limits, stopped_at=args.stopped_at, dt=run.dt))

    checks = verify_limits([s.minima for s in scans], run.experimental_limits)
    report(scans, out, checks=checks)
    for s, check in zip(scans, checks):
        print(f"{s.name}: min |detJD| {s.minima.min_det_jd:.5f} @{s.minima.argmin_det_jd}, "
              f"min Ω34 {s.minima.min_omega34:.4f}° @{s.minima.argmin_omega34}, "
              f"{len(s.crossings)} crossings, {check.verdict}")
    return EXIT_OK


def cmd_modes(args: argparse.Namespace, run: RunConfig) -> int:
    geom = run.geometry()
    if args.act:
        act = ActuatorVector.from_array(args.act)
    else:
        act = inverse(geom, Pose.from_degrees(*args.pose))

    catalog = enumerate_modes(geom, act, n_starts=run.n_starts, seed=run.seed)
    path = write_modes(catalog, Path(run.output_dir) / "modes.csv")
    print(catalog)
    for mode_id, mode in enumerate(catalog.modes, start=1):
        print(f"  {mode_id}: {mode.pose} detJD={mode.det_jd:+.5f} {'feasible' if mode.feasible else 'infeasible'}")

    if args.compare:
        a, b = args.compare
        if not (1 <= a <= len(catalog) and 1 <= b <= len(catalog)):
            raise UsageError(f"--compare ids must be within 1..{len(catalog)}")
        pair = mode_pair_report(geom, act, catalog.modes[a - 1], catalog.modes[b - 1])
        print(f"modes {a} -> {b}: {pair.kind.value}" + (f" at {pair.crossing_pose}" if pair.crossing_pose else ""))
    print(f"wrote {path}")
    return EXIT_OK


def cmd_benchmark(args: argparse.Namespace, run: RunConfig) -> int:
    geom = run.geometry()
    out = Path(run.output_dir)
    limits = run.assessment_limits

    tests = run_benchmark(geom, resolve_specs(args.set), run.dt, limits)
    experimental = derive_limits([s.minima for s in tests]) if args.derive_limits else run.experimental_limits
    print(f"limits: {experimental}")

    verification = run_benchmark(geom, resolve_specs(args.verify), run.dt, limits) if args.verify else []
    if args.verify:
        check_verification_set(len(tests), len(verification))
    checks = verify_limits([s.minima for s in verification], experimental, LimitIndex(args.index))

    report(tests, out / "test", limits=experimental)
    if verification:
        report(verification, out / "verify", limits=experimental, checks=checks)
    write_limits(experimental, out / "limits.json")

    for check in checks:
        print(f"{check.name}: {check.verdict} (min |detJD| {check.min_det_jd:.4f}, min Ω34 {check.min_omega34:.3f}°)")
    for s in verification:
        if s.dt is not None:
            rates = compare_rates(s)
            print(f"{s.name}: rate |detJD|_n {rates.mean_rate_det_jd:.3f} %/s, Ω34_n {rates.mean_rate_omega34:.3f} %/s")
    if args.conventions:
        print(convention_report(geom))
    return EXIT_OK


def cmd_report(args: argparse.Namespace, run: RunConfig) -> int:
    out = Path(run.output_dir)
    minima = read_minima(args.minima)
    limits = derive_limits(minima)
    verification = read_minima(args.verify) if args.verify else []
    checks = verify_limits(verification, limits, LimitIndex(args.index))

    write_summary(minima, out / "summary.csv")
    if verification:
        write_summary(verification, out / "verify_summary.csv", checks)
    write_limits(limits, out / "limits.json")
    print(f"limits: {limits}")
    for check in checks:
        print(f"{check.name}: {check.verdict}")
    return EXIT_OK


# ──────────────────────────────────────────────────────────────────────────────
# Entry point
# ──────────────────────────────────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--geometry", help="geometry JSON (default: $SINGULARK_GEOMETRY or bundled)")
    common.add_argument("--output-dir", dest="output_dir", help="directory for result files")
    common.add_argument("--dt", type=float, help="sample spacing (s)")
    common.add_argument("--seed", type=int, help="multi-start seed")
    common.add_argument("--n-starts", dest="n_starts", type=int, help="multi-start count")
    common.add_argument("--omega-tol", dest="omega_tol", type=float, help="Ω ≈ 0 tolerance (deg)")
    common.add_argument("--v-tol", dest="v_tol", type=float, help="linear-part tolerance (m)")
    common.add_argument("--d-tol", dest="d_tol", type=float, help="det J_D ≈ 0 tolerance")
    common.add_argument("--lim-detjd", dest="lim_detjd", type=float, help="experimental det J_D limit")
    common.add_argument("--lim-omega", dest="lim_omega", type=float, help="experimental Ω limit (deg)")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ERROR")

    parser = _Parser(prog="singulark", description="Singularity analysis of the 3UPS+RPU parallel robot")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ik", parents=[common], help="inverse kinematics")
    p.add_argument("--pose", type=_vector, required=True, help="xm,zm,theta_deg,psi_deg")
    p.set_defaults(handler=cmd_ik)

    p = sub.add_parser("fk", parents=[common], help="forward kinematics")
    p.add_argument("--act", type=_vector, required=True, help="q13,q23,q33,q42")
    p.add_argument("--seed-pose", dest="seed_pose", type=_vector, help="xm,zm,theta_deg,psi_deg (default home)")
    p.set_defaults(handler=cmd_fk)

    p = sub.add_parser("eval", parents=[common], help="singularity indices of a pose")
    p.add_argument("--pose", type=_vector, required=True, help="xm,zm,theta_deg,psi_deg")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("traj", parents=[common], help="generate or ingest, scan and report trajectories")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="builtin:<family|name> or a JSON spec file")
    source.add_argument("--input", help="pose CSV of a measured run")
    p.add_argument("--stopped-at", dest="stopped_at", type=int, help="sample where the run lost control")
    p.add_argument("--smooth-span", dest="smooth_span", type=float, help="Loess span for --input")
    p.add_argument("--smooth-degree", dest="smooth_degree", type=int, default=2, help="Loess degree (1 or 2)")
    p.set_defaults(handler=cmd_traj)

    p = sub.add_parser("modes", parents=[common], help="assembly modes for fixed actuator lengths")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--act", type=_vector, help="q13,q23,q33,q42")
    target.add_argument("--pose", type=_vector, help="use the actuator lengths of this pose")
    p.add_argument("--compare", type=int, nargs=2, metavar=("A", "B"), help="mode ids to check for a singular change")
    p.set_defaults(handler=cmd_modes)

    p = sub.add_parser("benchmark", parents=[common], help="experimental-limit benchmark")
    p.add_argument("--set", default="builtin:TT", help="test trajectories")
    p.add_argument("--verify", help="verification trajectories")
    p.add_argument("--derive-limits", dest="derive_limits", action="store_true", help="average limits from --set")
    p.add_argument("--index", choices=[i.value for i in LimitIndex], default=LimitIndex.BOTH.value)
    p.add_argument("--conventions", action="store_true", help="compare mobile-anchor conventions")
    p.set_defaults(handler=cmd_benchmark)

    p = sub.add_parser("report", parents=[common], help="limits from a minima CSV")
    p.add_argument("--minima", required=True, help="summary-shaped CSV of test minima")
    p.add_argument("--verify", help="summary-shaped CSV of verification minima")
    p.add_argument("--index", choices=[i.value for i in LimitIndex], default=LimitIndex.BOTH.value)
    p.set_defaults(handler=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        run = RunConfig.from_args(args, Settings())
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, run.log_level.upper(), logging.INFO),
        format="%(asctime)s | %(name)s | %(levelname)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )

    try:
        return args.handler(args, run)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergence, SingularJacobian) as exc:
        logger.error("Forward kinematics failed: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_KINEMATICS
    except (SingularkError, OSError, json.JSONDecodeError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
