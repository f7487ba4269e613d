"""Command-line front end.

Exit codes: 0 ok, 2 usage, 3 infeasible/unreachable query, 4 numeric or IO
failure.  Errors are reported on stderr as ``ERROR <CODE>: message``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from orthoglide import geometry, kinematics, serialize, singularity, sweeps
from orthoglide.errors import (
    DegenerateJoint,
    NoAssembly,
    NotAPosture,
    OrthoglideError,
    OutsideReach,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_FAILURE = 4

# flags whose values may start with '-' (negative coordinates)
_VALUE_FLAGS = {"--point", "--joints", "--mode", "--z"}


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int):
        super().__init__(message)
        self.code = code
        self.exit_code = exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("USAGE", message, EXIT_USAGE)


def _triple(text: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z numbers, got {text!r}")
    if len(vals) != 3 or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected three finite numbers, got {text!r}")
    return vals


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return conv


def _branch(text: str):
    try:
        return kinematics.Branch.from_label(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _mode(text: str):
    t = text.strip().lower()
    if t == "both":
        return "both"
    if t in ("-1", "+1", "1"):
        return int(t)
    raise argparse.ArgumentTypeError(f"mode must be -1, +1 or both, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--leg-length", type=_positive(float), default=1.0, metavar="L")

    parser = _Parser(prog="orthoglide", description="Orthoglide kinematics, workspace and singularity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ik", parents=[common], help="inverse kinematics")
    p.add_argument("--point", type=_triple, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--branch", type=_branch, default=kinematics.PPP)
    g.add_argument("--all", action="store_true", help="list every feasible branch")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fk", parents=[common], help="direct kinematics")
    p.add_argument("--joints", type=_triple, required=True)
    p.add_argument("--mode", type=_mode, default="both")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify", parents=[common], help="singularity class of a posture")
    p.add_argument("--point", type=_triple, required=True)
    p.add_argument("--joints", type=_triple, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mesh", parents=[common], help="surface meshes")
    p.add_argument("surface", choices=["workspace", "jointspace", "singularity"])
    p.add_argument("--dphi", type=_positive(float), default=geometry.DEFAULT_STEP)
    p.add_argument("--dtheta", type=_positive(float), default=geometry.DEFAULT_STEP)
    p.add_argument("--eps", type=_positive(float), default=geometry.DEFAULT_EPS)
    p.add_argument("--format", choices=["obj", "csv"], required=True)
    p.add_argument("--out", required=True, help="output path, '-' for stdout")

    p = sub.add_parser("volume", parents=[common], help="region volumes")
    p.add_argument("--region", required=True, type=str.lower, choices=["c", "s", "g", "w", "free"])
    p.add_argument("--method", choices=["closed", "mc"], default="closed")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=_positive(int), default=1)

    p = sub.add_parser("sweep", parents=[common], help="det(J) sweep along the bisector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("section", parents=[common], help="cond(J)^-1 sections")
    p.add_argument("--z", type=float, default=0.0)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--plane", choices=["horizontal", "bisector"], default="horizontal")
    p.add_argument("--out", default=None)
    return parser


def _normalize_argv(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _posture_fields(point, joints, L):
    out = {}
    try:
        out["det_jinv"] = singularity.det_inverse_jacobian(point, joints, L)
    except OrthoglideError:
        out["det_jinv"] = math.inf
    try:
        out["class"] = str(singularity.classify_configuration(point, joints, L).kind)
    except OrthoglideError:
        out["class"] = None
    return out


def _emit_objects(objs, as_json, out):
    for obj in objs:
        if as_json:
            clean = {}
            for k, v in obj.items():
                if isinstance(v, float) and not math.isfinite(v):
                    v = serialize.fmt(v)
                elif isinstance(v, float) and v == 0.0:
                    v = 0.0  # no negative zero
                clean[k] = v
            out.write(json.dumps(clean, sort_keys=False) + "\n")
        else:
            parts = []
            for k, v in obj.items():
                if isinstance(v, (list, tuple)):
                    v = serialize.fmt_vec(v)
                elif v is None:
                    v = "none"
                elif isinstance(v, (bool, float, int)):
                    v = serialize.fmt(v)
                parts.append(f"{k}={v}")
            out.write(" ".join(parts) + "\n")


def _vec(v):
    return [float(c) for c in v]


def cmd_ik(args, out):
    L = args.leg_length
    p = args.point
    if args.all:
        sols = kinematics.ik_all_feasible(p, L)
        if not sols:
            try:
                kinematics.leg_projections(p, L)
            except OutsideReach as exc:
                raise CliError("UNREACHABLE", str(exc), EXIT_INFEASIBLE)
            raise CliError("INFEASIBLE", "no inverse-kinematics branch satisfies the joint limits", EXIT_INFEASIBLE)
        objs = []
        for s, rho in sols:
            obj = {"point": _vec(p), "joints": _vec(rho), "branch": s.label, "feasible": True}
            obj.update(_posture_fields(p, rho, L))
            objs.append(obj)
        _emit_objects(objs, args.json, out)
        return EXIT_OK

    try:
        rho, feasible = kinematics.inverse_kinematics(p, args.branch, L)
    except OutsideReach as exc:
        raise CliError("UNREACHABLE", str(exc), EXIT_INFEASIBLE)
    obj = {"point": _vec(p), "joints": _vec(rho), "branch": args.branch.label, "feasible": feasible}
    obj.update(_posture_fields(p, rho, L))
    _emit_objects([obj], args.json, out)
    if not feasible:
        raise CliError("INFEASIBLE", f"branch {args.branch.label} violates the joint limits", EXIT_INFEASIBLE)
    return EXIT_OK


def cmd_fk(args, out):
    L = args.leg_length
    rho = args.joints
    try:
        sols = kinematics.fk_solutions(rho, L)
    except DegenerateJoint as exc:
        raise CliError("DEGENERATE_JOINT", str(exc), EXIT_INFEASIBLE)
    if not sols:
        raise CliError("NO_ASSEMBLY", "joint values are outside the reachable jointspace", EXIT_INFEASIBLE)
    if args.mode != "both" and len(sols) == 2:
        sols = [s for s in sols if s.mode == args.mode]
    objs = []
    for sol in sols:
        mode = sol.mode
        if mode is None and not args.json:
            mode = "flat"
        obj = {"mode": mode, "joints": _vec(rho), "point": _vec(sol.point)}
        obj.update(_posture_fields(sol.point, rho, L))
        objs.append(obj)
    _emit_objects(objs, args.json, out)
    return EXIT_OK


def cmd_classify(args, out):
    L = args.leg_length
    p, rho = args.point, args.joints
    try:
        cls = singularity.classify_configuration(p, rho, L)
        angles = singularity.leg_angles(p, rho, L)
    except NotAPosture as exc:
        raise CliError("NOT_A_POSTURE", str(exc), EXIT_INFEASIBLE)
    det_j, det_jinv, cond = sweeps.jacobian_measures(p, rho, L)
    obj = {
        "point": _vec(p),
        "joints": _vec(rho),
        "class": str(cls.kind),
        "det_jinv": det_jinv,
        "det_j": det_j,
        "cond_inv": cond,
        "leg_angles": list(angles),
        "serial_axes": "".join("xyz"[i] for i in cls.serial_axes) or "none",
    }
    _emit_objects([obj], args.json, out)
    return EXIT_OK


def cmd_mesh(args, out):
    try:
        spec = geometry.MeshSpec(args.dphi, args.dtheta, args.eps, args.leg_length)
    except ValueError as exc:
        raise CliError("USAGE", str(exc), EXIT_USAGE)
    build = {
        "workspace": geometry.workspace_mesh,
        "jointspace": geometry.jointspace_mesh,
        "singularity": geometry.flat_singularity_mesh,
    }[args.surface]
    grid = build(spec)
    writer = serialize.write_obj if args.format == "obj" else serialize.write_grid_csv
    with serialize.open_output(args.out, out) as fh:
        writer(grid, fh)
    return EXIT_OK


def cmd_volume(args, out):
    L = args.leg_length
    region = geometry.normalize_region(args.region)
    if args.method == "closed":
        if region == "Free":
            raise CliError("USAGE", "the singularity-free region has no closed form; use --method mc", EXIT_USAGE)
        report = geometry.volume_closed_form(region, L)
    else:
        if args.samples < geometry.MC_MIN_SAMPLES:
            raise CliError("USAGE", f"--samples must be at least {geometry.MC_MIN_SAMPLES}", EXIT_USAGE)
        report = geometry.volume_monte_carlo(region, args.samples, args.seed, L, workers=args.workers)
    out.write(serialize.format_volume_report(report) + "\n")
    return EXIT_OK


def cmd_sweep(args, out):
    if args.n < 2:
        raise CliError("USAGE", "--n must be at least 2", EXIT_USAGE)
    records = sweeps.sweep_bisector(args.n, args.leg_length)
    with serialize.open_output(args.out, out) as fh:
        serialize.write_sweep_csv(records, fh)
    return EXIT_OK


def cmd_section(args, out):
    L = args.leg_length
    if args.n < 2:
        raise CliError("USAGE", "--n must be at least 2", EXIT_USAGE)
    if args.plane == "bisector":
        curves = sweeps.bisector_section(args.n, L)
        with serialize.open_output(args.out, out) as fh:
            serialize.write_curves_csv(curves, fh)
        return EXIT_OK
    if not abs(args.z) < L:
        raise CliError("USAGE", "--z must satisfy |z| < L", EXIT_USAGE)
    records = sweeps.section_cond(args.z, args.n, L)
    with serialize.open_output(args.out, out) as fh:
        serialize.write_section_csv(records, fh)
    return EXIT_OK


COMMANDS = {
    "ik": cmd_ik,
    "fk": cmd_fk,
    "classify": cmd_classify,
    "mesh": cmd_mesh,
    "volume": cmd_volume,
    "sweep": cmd_sweep,
    "section": cmd_section,
}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        try:
            args = build_parser().parse_args(_normalize_argv(argv))
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        err.write(f"ERROR {exc.code}: {exc}\n")
        return exc.exit_code
    except NoAssembly as exc:
        err.write(f"ERROR NO_ASSEMBLY: {exc}\n")
        return EXIT_INFEASIBLE
    except OSError as exc:
        err.write(f"ERROR IO: {exc}\n")
        return EXIT_FAILURE
    except (OrthoglideError, ArithmeticError, ValueError) as exc:
        err.write(f"ERROR NUMERIC: {exc}\n")
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
