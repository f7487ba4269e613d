"""Inverse Jacobian, conditioning and singularity classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from orthoglide.errors import NotAPosture, NotOnSphere, OutsideReach, SerialDegenerate
from orthoglide.kinematics import (
    TAU_RAD,
    TAU_REGION,
    TAU_ZERO,
    Branch,
    _as_branch,
    _leg_projections,
    _xyz,
    check_leg_length,
    loop_residuals,
    mode_expression,
)

SERIAL_TOL = 1e-9  # |p_i - rho_i|, times L
PARALLEL_TOL = 1e-9  # |det numerator|, times L^3
POSTURE_TOL = 1e-6  # loop-closure residual, times L^2


class SingularityKind(enum.Enum):
    REGULAR = "Regular"
    SERIAL = "Serial"
    PARALLEL_FLAT = "ParallelFlat"
    PARALLEL_BAR = "ParallelBar"
    PARALLEL_HALF_BAR = "ParallelHalfBar"
    COMBINED = "Combined"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SingularityClass:
    kind: SingularityKind
    numerator: float
    serial_axes: tuple[int, ...] = field(default=())

    @property
    def is_singular(self) -> bool:
        return self.kind is not SingularityKind.REGULAR


class LegAngles(NamedTuple):
    theta_x: float
    theta_y: float
    theta_z: float


def _denominators(p, rho, L):
    dens = [pi - ri for pi, ri in zip(p, rho)]
    bad = [i for i, d in enumerate(dens) if abs(d) <= TAU_ZERO * L]
    if bad:
        raise SerialDegenerate(
            f"p_i == rho_i on axis {','.join('xyz'[i] for i in bad)}; inverse Jacobian undefined"
        )
    return dens


def inverse_jacobian(p: Sequence[float], rho: Sequence[float], L: float = 1.0) -> np.ndarray:
    """``d rho / d p`` written in terms of the posture.

    Row i holds 1 on the diagonal and ``p_j / (p_i - rho_i)`` elsewhere.
    """
    L = check_leg_length(L)
    p = _xyz(p, "p")
    rho = _xyz(rho, "rho")
    dens = _denominators(p, rho, L)
    M = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            M[i, j] = 1.0 if i == j else p[j] / dens[i]
    return M


def inverse_jacobian_branch(p: Sequence[float], s: Branch | Sequence[int] | str, L: float = 1.0) -> np.ndarray:
    """Same matrix obtained by differentiating the IK formula on branch ``s``."""
    L = check_leg_length(L)
    s = _as_branch(s)
    p = _xyz(p, "p")
    roots = _leg_projections(*p, L)
    if min(roots) <= TAU_ZERO * L:
        raise SerialDegenerate("IK square root vanishes; inverse Jacobian unbounded")
    M = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            M[i, j] = 1.0 if i == j else -s[i] * p[j] / roots[i]
    return M


def det_inverse_jacobian(p: Sequence[float], rho: Sequence[float], L: float = 1.0) -> float:
    """Closed-form ``det(J^-1)`` = mode expression / prod(p_i - rho_i)."""
    L = check_leg_length(L)
    pp = _xyz(p, "p")
    rr = _xyz(rho, "rho")
    dens = _denominators(pp, rr, L)
    return mode_expression(pp, rr) / (dens[0] * dens[1] * dens[2])


def cofactor_det(M) -> float:
    """Determinant by cofactor expansion along the first row."""
    a = np.asarray(M, dtype=float)
    return float(
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def singular_values(M) -> np.ndarray:
    """Singular values in descending order (LAPACK SVD)."""
    return np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)


def inverse_condition_number(M) -> float:
    """``sigma_min / sigma_max`` in [0, 1]; identical for a matrix and its inverse."""
    sv = singular_values(M)
    if sv[0] == 0.0:
        return 0.0
    return float(sv[-1] / sv[0])


def _check_posture(p, rho, L):
    res = loop_residuals(p, rho, L)
    worst = float(np.max(np.abs(res)))
    if worst > POSTURE_TOL * L * L:
        raise NotAPosture(f"loop-closure residual {worst:.3g} exceeds {POSTURE_TOL:g} L^2")


def classify_configuration(p: Sequence[float], rho: Sequence[float], L: float = 1.0) -> SingularityClass:
    """Classify a posture as regular, serial, parallel (flat/bar/half-bar) or combined."""
    L = check_leg_length(L)
    p = _xyz(p, "p")
    rho = _xyz(rho, "rho")
    _check_posture(p, rho, L)

    num = mode_expression(p, rho)
    serial = tuple(i for i in range(3) if abs(p[i] - rho[i]) <= SERIAL_TOL * L)
    parallel = abs(num) <= PARALLEL_TOL * L**3

    if serial and parallel:
        kind = SingularityKind.COMBINED
    elif serial:
        kind = SingularityKind.SERIAL
    elif parallel:
        zero_joints = sum(1 for r in rho if abs(r) <= SERIAL_TOL * L)
        if zero_joints == 3:
            kind = SingularityKind.PARALLEL_BAR
        elif zero_joints == 2:
            kind = SingularityKind.PARALLEL_HALF_BAR
        else:
            kind = SingularityKind.PARALLEL_FLAT
    else:
        kind = SingularityKind.REGULAR
    return SingularityClass(kind, num, serial)


def leg_angles(p: Sequence[float], rho: Sequence[float], L: float = 1.0) -> LegAngles:
    """Angles between each bar link and its prismatic axis, ``arccos((p_i - rho_i)/L)``."""
    L = check_leg_length(L)
    p = _xyz(p, "p")
    rho = _xyz(rho, "rho")
    _check_posture(p, rho, L)
    return LegAngles(*(math.acos(min(1.0, max(-1.0, (pi - ri) / L))) for pi, ri in zip(p, rho)))


def flat_residual(p, L: float = 1.0):
    """Signed distance-like function of the flat singularity surface (PPP branch).

    Evaluates ``2 p_x p_y p_z + p_x p_y r_z + p_x p_z r_y + p_y p_z r_x - r_x r_y r_z``
    with ``r_x = sqrt(L^2 - p_y^2 - p_z^2)`` etc.  Negative at the origin, zero on
    the surface and positive between it and the sphere in the first octant.
    Accepts one point or an ``(..., 3)`` array.
    """
    L = check_leg_length(L)
    pts = np.asarray(p, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError("points must have three components")
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    L2 = L * L
    rads = [L2 - y * y - z * z, L2 - x * x - z * z, L2 - x * x - y * y]
    if min(float(np.min(r)) for r in rads) < -TAU_RAD * L2:
        raise OutsideReach("flat_residual evaluated outside the cylinder intersection")
    rx, ry, rz = (np.sqrt(np.maximum(r, 0.0)) for r in rads)
    val = 2.0 * x * y * z + x * y * rz + x * z * ry + y * z * rx - rx * ry * rz
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class BoundaryPosture:
    """One of the eight IK solutions at a point of the sphere ``|p| = L``."""

    index: int  # 1..8
    joints: np.ndarray
    numerator: float
    denominator: float
    kind: SingularityKind
    feasible: bool

    @property
    def det_jinv(self) -> float:
        if self.denominator == 0.0:
            return math.copysign(math.inf, self.numerator) if self.numerator else math.nan
        return self.numerator / self.denominator


# which axes carry 2*p_i (1) or 0 (0) for postures rho_1..rho_8
_BOUNDARY_PATTERNS = (
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (1, 1, 1),
)


def boundary_postures(p: Sequence[float], L: float = 1.0) -> list[BoundaryPosture]:
    """The eight sphere-boundary postures ``rho_i = p_i +/- p_i`` and their singularity data."""
    L = check_leg_length(L)
    p = _xyz(p, "p")
    norm = math.sqrt(sum(c * c for c in p))
    if abs(norm - L) > TAU_REGION * L:
        raise NotOnSphere(f"|p| = {norm:.12g} differs from L = {L:g}")
    open_octant = all(c > 0.0 for c in p)
    out = []
    for k, pattern in enumerate(_BOUNDARY_PATTERNS, start=1):
        rho = tuple(2.0 * c if bit else 0.0 for c, bit in zip(p, pattern))
        num = mode_expression(p, rho)
        den = (p[0] - rho[0]) * (p[1] - rho[1]) * (p[2] - rho[2])
        cls = classify_configuration(p, rho, L)
        # the zero joint values sit on the closed limit; rho_1 never counts as feasible
        feasible = k > 1 and open_octant and all(r <= 2.0 * L for r in rho)
        out.append(BoundaryPosture(k, np.array(rho), num, den, cls.kind, feasible))
    return out
