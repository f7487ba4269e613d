"""Closed-form inverse and direct kinematics of the Orthoglide.

The mechanism is modelled by three bar links of length ``L``, each joining the
tool centre point ``p`` to a prismatic joint sliding along one coordinate axis
at position ``rho_i``.  The loop-closure equations are::

    (p_x - rho_x)^2 + p_y^2 + p_z^2 = L^2     (and cyclic)

Every routine here is a pure function.  Points and joint vectors are accepted
as any length-3 sequence and returned as ``numpy`` float arrays.
"""

from __future__ import annotations

import enum
import itertools
import math
from typing import NamedTuple, Sequence

import numpy as np

from orthoglide.errors import (
    DegenerateJoint,
    FlatBoundary,
    NoAssembly,
    OutsideReach,
    SerialBoundary,
)

# Tolerances, all relative to the leg length L (see module docstring of each).
TAU_RAD = 1e-12  # radicand clamp, times L^2
TAU_ZERO = 1e-12  # zero joint / zero leg projection, times L
TAU_DISC = 1e-12  # FK discriminant, relative to B^2
TAU_REGION = 1e-9  # workspace boundary band, times L^2
TAU_JOINT = 1e-9  # jointspace boundary band on the Eq. 16 expression
TAU_FLAT = 1e-9  # assembly-mode zero band, times |rho_x rho_y rho_z|


class Branch(NamedTuple):
    """Inverse-kinematics configuration indices, each +1 or -1."""

    sx: int
    sy: int
    sz: int

    @property
    def label(self) -> str:
        return "".join("P" if s > 0 else "M" for s in self)

    @classmethod
    def from_label(cls, label: str) -> "Branch":
        label = label.strip().upper()
        if len(label) != 3 or set(label) - {"P", "M"}:
            raise ValueError(f"branch label must be three of P/M, got {label!r}")
        return cls(*(1 if ch == "P" else -1 for ch in label))

    def __str__(self) -> str:
        return self.label


# PPP, PPM, PMP, PMM, MPP, MPM, MMP, MMM
BRANCHES: tuple[Branch, ...] = tuple(Branch(*s) for s in itertools.product((1, -1), repeat=3))
PPP = BRANCHES[0]


class Region(enum.Enum):
    OUTSIDE_WORKSPACE = "OutsideWorkspace"
    SPHERE_S = "SphereS"
    SOLID_G = "SolidG"
    BOUNDARY_SPHERE = "BoundarySphere"
    BOUNDARY_CYLINDER = "BoundaryCylinder"

    def __str__(self) -> str:
        return self.value


# integer codes used by the vectorised classifier
REGION_CODES: tuple[Region, ...] = tuple(Region)


class JointRegion(enum.Enum):
    OUTSIDE_LIMITS = "OutsideLimits"
    OUTSIDE_REACHABLE = "OutsideReachable"
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"

    def __str__(self) -> str:
        return self.value


class IKResult(NamedTuple):
    joints: np.ndarray
    feasible: bool


class FkQuadratic(NamedTuple):
    """Coefficients of ``A t^2 + B t + C = 0`` and the double-root location ``t0``."""

    A: float
    B: float
    C: float
    t0: float

    @property
    def discriminant(self) -> float:
        return self.B * self.B - 4.0 * self.A * self.C

    @property
    def relative_discriminant(self) -> float:
        # equals 1 - (sum rho^2 - 4L^2)(sum rho^-2)
        return self.discriminant / (self.B * self.B)


class FkSolution(NamedTuple):
    """One direct-kinematics root; ``mode`` is None for the flat double root."""

    mode: int | None
    point: np.ndarray


def check_leg_length(L: float) -> float:
    L = float(L)
    if not (L > 0.0 and math.isfinite(L)):
        raise ValueError(f"leg length must be positive and finite, got {L}")
    return L


def as_vector(v: Sequence[float], name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have exactly three components")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _xyz(v, name):
    x, y, z = as_vector(v, name)
    return float(x), float(y), float(z)


def joint_limits_ok(rho: Sequence[float], L: float = 1.0) -> bool:
    """True iff ``0 < rho_i <= 2L`` on every axis."""
    L = check_leg_length(L)
    return all(0.0 < r <= 2.0 * L for r in _xyz(rho, "rho"))


def loop_residuals(p: Sequence[float], rho: Sequence[float], L: float = 1.0) -> np.ndarray:
    """Residuals of the three loop-closure equations (units of L^2)."""
    px, py, pz = _xyz(p, "p")
    rx, ry, rz = _xyz(rho, "rho")
    L2 = check_leg_length(L) ** 2
    return np.array(
        [
            (px - rx) ** 2 + py * py + pz * pz - L2,
            px * px + (py - ry) ** 2 + pz * pz - L2,
            px * px + py * py + (pz - rz) ** 2 - L2,
        ]
    )


def _leg_projections(px, py, pz, L):
    """sqrt(L^2 - p_j^2 - p_k^2) for each axis, with the rounding clamp."""
    L2 = L * L
    out = []
    for axis, rad in enumerate((L2 - py * py - pz * pz, L2 - px * px - pz * pz, L2 - px * px - py * py)):
        if rad < 0.0:
            if rad < -TAU_RAD * L2:
                raise OutsideReach(
                    f"point ({px:g}, {py:g}, {pz:g}) is outside the cylinder intersection "
                    f"(axis {'xyz'[axis]} radicand {rad:.3g})"
                )
            rad = 0.0
        out.append(math.sqrt(rad))
    return out


def leg_projections(p: Sequence[float], L: float = 1.0) -> np.ndarray:
    """Return the three IK square roots; raises OutsideReach outside C_L."""
    px, py, pz = _xyz(p, "p")
    return np.array(_leg_projections(px, py, pz, check_leg_length(L)))


def inverse_kinematics(p: Sequence[float], s: Branch | Sequence[int] | str = PPP, L: float = 1.0) -> IKResult:
    """Joint values reaching ``p`` on branch ``s``.

    ``rho_i = p_i + s_i * sqrt(L^2 - p_j^2 - p_k^2)``.  The returned flag tells
    whether the joint limits ``0 < rho_i <= 2L`` hold.
    """
    L = check_leg_length(L)
    s = _as_branch(s)
    px, py, pz = _xyz(p, "p")
    roots = _leg_projections(px, py, pz, L)
    rho = (px + s[0] * roots[0], py + s[1] * roots[1], pz + s[2] * roots[2])
    feasible = all(0.0 < r <= 2.0 * L for r in rho)
    return IKResult(np.array(rho), feasible)


def ik_all_feasible(p: Sequence[float], L: float = 1.0) -> list[tuple[Branch, np.ndarray]]:
    """All feasible IK branches of ``p`` in canonical PPP..MMM order."""
    L = check_leg_length(L)
    px, py, pz = _xyz(p, "p")
    try:
        roots = _leg_projections(px, py, pz, L)
    except OutsideReach:
        return []
    out = []
    for s in BRANCHES:
        rho = (px + s[0] * roots[0], py + s[1] * roots[1], pz + s[2] * roots[2])
        if all(0.0 < r <= 2.0 * L for r in rho):
            out.append((s, np.array(rho)))
    return out


def _as_branch(s) -> Branch:
    if isinstance(s, Branch):
        return s
    if isinstance(s, str):
        return Branch.from_label(s)
    vals = tuple(int(v) for v in s)
    if len(vals) != 3 or any(v not in (-1, 1) for v in vals):
        raise ValueError(f"branch indices must be three values in {{-1, +1}}, got {s!r}")
    return Branch(*vals)


def fk_quadratic(rho: Sequence[float], L: float = 1.0) -> FkQuadratic:
    L = check_leg_length(L)
    rx, ry, rz = _xyz(rho, "rho")
    if min(abs(rx), abs(ry), abs(rz)) <= TAU_ZERO * L:
        raise DegenerateJoint(f"joint vector ({rx:g}, {ry:g}, {rz:g}) has a zero component")
    A = (rx * ry) ** 2 + (rx * rz) ** 2 + (ry * rz) ** 2
    B = (rx * ry * rz) ** 2
    C = (rx * rx / 4.0 + ry * ry / 4.0 + rz * rz / 4.0 - L * L) * B
    return FkQuadratic(A, B, C, -B / (2.0 * A))


def _fk_point(rho, t):
    return np.array([r / 2.0 + t / r for r in rho])


def _fk_root(q: FkQuadratic, m: int) -> float:
    disc = q.discriminant
    if disc < 0.0:
        disc = 0.0
    sq = math.sqrt(disc)
    # root of larger magnitude directly, the other through Vieta to avoid cancellation
    big = (-q.B - sq) / (2.0 * q.A)
    if m < 0:
        return big
    denom = -q.B - sq
    return 2.0 * q.C / denom


def direct_kinematics(rho: Sequence[float], m: int, L: float = 1.0) -> np.ndarray:
    """TCP position for joint values ``rho`` in assembly mode ``m``.

    ``m = -1`` selects the root on the origin side of the plane through the
    joint centres (the mode of the zero posture).
    """
    if m not in (-1, 1):
        raise ValueError(f"assembly mode must be -1 or +1, got {m!r}")
    q = fk_quadratic(rho, L)
    if q.relative_discriminant < -TAU_DISC:
        raise NoAssembly(f"joint vector {tuple(rho)} is outside the reachable jointspace")
    return _fk_point(_xyz(rho, "rho"), _fk_root(q, m))


def fk_solutions(rho: Sequence[float], L: float = 1.0) -> list[FkSolution]:
    """Zero, one (flat posture) or two direct-kinematics solutions."""
    q = fk_quadratic(rho, L)
    d = q.relative_discriminant
    r = _xyz(rho, "rho")
    if d < -TAU_DISC:
        return []
    if d <= TAU_DISC:
        return [FkSolution(None, _fk_point(r, q.t0))]
    return [FkSolution(m, _fk_point(r, _fk_root(q, m))) for m in (-1, 1)]


def branch_indices(p: Sequence[float], rho: Sequence[float], L: float = 1.0) -> Branch:
    """Configuration indices ``s_i = sgn(rho_i - p_i)`` of a posture."""
    L = check_leg_length(L)
    diffs = as_vector(rho, "rho") - as_vector(p, "p")
    bad = [("xyz"[i]) for i, d in enumerate(diffs) if abs(d) <= TAU_ZERO * L]
    if bad:
        raise SerialBoundary(f"leg {','.join(bad)} orthogonal to its axis; branch index undefined")
    return Branch(*(1 if d > 0 else -1 for d in diffs))


def mode_expression(p: Sequence[float], rho: Sequence[float]) -> float:
    """``p_x rho_y rho_z + rho_x p_y rho_z + rho_x rho_y p_z - rho_x rho_y rho_z``.

    This is both the assembly-mode discriminant and the numerator of
    ``det(J^-1)``.
    """
    px, py, pz = _xyz(p, "p")
    rx, ry, rz = _xyz(rho, "rho")
    return px * ry * rz + rx * py * rz + rx * ry * pz - rx * ry * rz


def assembly_mode(p: Sequence[float], rho: Sequence[float]) -> int:
    value = mode_expression(p, rho)
    scale = abs(float(np.prod(as_vector(rho, "rho"))))
    if abs(value) <= TAU_FLAT * scale:
        raise FlatBoundary("TCP lies in the plane of the joint centres; assembly mode undefined")
    return 1 if value > 0 else -1


def region_codes(points: np.ndarray, L: float = 1.0) -> np.ndarray:
    """Vectorised workspace classification; returns indices into ``REGION_CODES``."""
    L = check_leg_length(L)
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    x2, y2, z2 = x * x, y * y, z * z
    L2 = L * L
    band = TAU_REGION * L2
    cyl = np.maximum(np.maximum(x2 + y2, x2 + z2), y2 + z2) - L2
    sph = x2 + y2 + z2 - L2
    positive = (x > 0) & (y > 0) & (z > 0)

    out = np.full(cyl.shape, 0, dtype=np.int8)  # OUTSIDE_WORKSPACE
    in_c = cyl <= band
    out[in_c & (sph < -band)] = 1  # SPHERE_S
    out[in_c & (np.abs(sph) <= band)] = 3  # BOUNDARY_SPHERE
    beyond = in_c & (sph > band) & positive
    out[beyond & (np.abs(cyl) <= band)] = 4  # BOUNDARY_CYLINDER
    out[beyond & (cyl < -band)] = 2  # SOLID_G
    return out


def region_membership(p: Sequence[float], L: float = 1.0) -> Region:
    """Classify ``p`` against the workspace ``W_L = S_L + G_L``."""
    return REGION_CODES[int(region_codes(as_vector(p, "p"), L))]


def jointspace_expression(rho, L: float = 1.0):
    """``(sum rho^2 - 4L^2) * (sum rho^-2)``; at most 1 inside the reachable jointspace.

    Accepts a single joint vector or an ``(..., 3)`` array.
    """
    L = check_leg_length(L)
    r = np.asarray(rho, dtype=float)
    sq = r * r
    with np.errstate(divide="ignore"):
        val = (sq.sum(axis=-1) - 4.0 * L * L) * (1.0 / sq).sum(axis=-1)
    return float(val) if np.ndim(val) == 0 else val


def jointspace_residual(rho, L: float = 1.0):
    """Boundary residual ``(sum rho^2 - 4L^2 - 1 / sum rho^-2) / L^2``.

    Zero exactly where :func:`jointspace_expression` equals 1, but without its
    ``sum rho^-2`` amplification, so it stays well scaled when a joint value
    tends to zero near the boundary edges.
    """
    L = check_leg_length(L)
    r = np.asarray(rho, dtype=float)
    sq = r * r
    with np.errstate(divide="ignore"):
        val = (sq.sum(axis=-1) - 4.0 * L * L - 1.0 / (1.0 / sq).sum(axis=-1)) / (L * L)
    return float(val) if np.ndim(val) == 0 else val


def jointspace_membership(rho: Sequence[float], L: float = 1.0) -> JointRegion:
    L = check_leg_length(L)
    r = as_vector(rho, "rho")
    if not all(0.0 < v <= 2.0 * L for v in r):
        return JointRegion.OUTSIDE_LIMITS
    g = jointspace_expression(r, L)
    if g < 1.0 - TAU_JOINT:
        return JointRegion.INTERIOR
    if g <= 1.0 + TAU_JOINT:
        return JointRegion.BOUNDARY
    return JointRegion.OUTSIDE_REACHABLE
