"""Determinant and conditioning sweeps along the bisector and in planar sections."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from orthoglide.errors import OrthoglideError, SerialDegenerate
from orthoglide.kinematics import (
    PPP,
    Branch,
    Region,
    check_leg_length,
    ik_all_feasible,
    inverse_kinematics,
    mode_expression,
    region_membership,
)
from orthoglide.singularity import (
    PARALLEL_TOL,
    det_inverse_jacobian,
    flat_residual,
    inverse_condition_number,
    inverse_jacobian,
)

SWEEP_MARGIN = 1e-6  # kept away from the bisector end points, times L
LIMIT_STEP = 1e-6  # backward step used to pick the sign of an unbounded det(J)


@dataclass(frozen=True)
class SweepRecord:
    """Jacobian measures of one posture.  ``point`` is the Cartesian TCP."""

    point: tuple[float, float, float]
    branch: str | None
    det_j: float | None
    det_jinv: float | None
    cond_inv: float | None
    region: Region

    @property
    def c(self) -> float:
        return self.point[0]

    @property
    def is_regular(self) -> bool:
        return self.det_j is not None and math.isfinite(self.det_j) and self.det_j != 0.0


def jacobian_measures(p, rho, L: float = 1.0, branch: Branch | None = None, sweep_dir=None):
    """``(det J, det J^-1, cond(J)^-1)`` of a posture.

    At a serial singularity ``det J`` is 0 and ``det J^-1`` is inf.  At a
    parallel singularity ``det J`` is +/-inf; with ``branch`` and ``sweep_dir``
    its sign is the one-sided limit approached along ``sweep_dir``.
    """
    try:
        M = inverse_jacobian(p, rho, L)
        det_jinv = det_inverse_jacobian(p, rho, L)
    except SerialDegenerate:
        return 0.0, math.inf, 0.0
    cond = inverse_condition_number(M)
    if abs(mode_expression(p, rho)) <= PARALLEL_TOL * L**3:
        sign = math.copysign(1.0, det_jinv)
        if sweep_dir is not None and branch is not None:
            back = np.asarray(p) - LIMIT_STEP * L * np.asarray(sweep_dir)
            try:
                r_back = inverse_kinematics(back, branch, L).joints
                sign = math.copysign(1.0, det_inverse_jacobian(back, r_back, L))
            except OrthoglideError:
                pass
        return math.copysign(math.inf, sign), det_jinv, cond
    return 1.0 / det_jinv, det_jinv, cond


def bisector_records(c_values, L: float = 1.0) -> list[SweepRecord]:
    """One record per feasible IK branch at each ``p = c (1, 1, 1)``."""
    L = check_leg_length(L)
    e = np.ones(3) / math.sqrt(3.0)
    out = []
    for c in c_values:
        p = np.array([c, c, c], dtype=float)
        region = region_membership(p, L)
        for s, rho in ik_all_feasible(p, L):
            dj, dji, cond = jacobian_measures(p, rho, L, s, sweep_dir=e)
            out.append(SweepRecord(tuple(p), s.label, dj, dji, cond, region))
    return out


def sweep_bisector(n: int, L: float = 1.0) -> list[SweepRecord]:
    """Sweep ``c`` from just past the negative sphere crossing to just before
    the cylinder crossing of the first-octant bisector."""
    L = check_leg_length(L)
    if n < 2:
        raise ValueError("sweep needs at least two samples")
    lo = -L / math.sqrt(3.0) + SWEEP_MARGIN * L
    hi = L / math.sqrt(2.0) - SWEEP_MARGIN * L
    return bisector_records(np.linspace(lo, hi, n), L)


def section_cond(z: float, n: int, L: float = 1.0) -> list[SweepRecord]:
    """Inverse condition number over an ``n x n`` grid of the plane ``p_z = z``.

    Rows follow ``y``, columns ``x``, both spanning ``[-L, L]``.  Cells outside
    the open workspace carry ``None`` measures.
    """
    L = check_leg_length(L)
    if not abs(z) < L:
        raise ValueError("section height must satisfy |z| < L")
    if n < 1:
        raise ValueError("grid size must be positive")
    xs = np.linspace(-L, L, n)
    out = []
    for y in xs:
        for x in xs:
            p = (float(x), float(y), float(z))
            region = region_membership(p, L)
            measures = (None, None, None)
            if region in (Region.SPHERE_S, Region.SOLID_G):
                rho, feasible = inverse_kinematics(p, PPP, L)
                if feasible:
                    measures = jacobian_measures(p, rho, L)
            out.append(SweepRecord(p, PPP.label, *measures, region))
    return out


def _plane_direction(alpha):
    # unit vector in the plane p_x = p_y; signed r = sqrt(2) p_x
    return np.array([math.cos(alpha) / math.sqrt(2.0), math.cos(alpha) / math.sqrt(2.0), math.sin(alpha)])


def flat_section_radius(alpha: float, L: float = 1.0) -> float:
    """Distance from the origin to the flat surface along direction ``alpha``
    of the plane ``p_x = p_y`` (``0 < alpha < pi/2``)."""
    L = check_leg_length(L)
    e = _plane_direction(alpha)
    return brentq(lambda s: flat_residual(s * e, L), 0.0, L, xtol=1e-15 * L, rtol=1e-15)


def bisector_section(n: int = 361, L: float = 1.0, eps: float = 1e-4) -> dict[str, np.ndarray]:
    """Boundary curves of the cross-section ``p_x = p_y`` in ``(r, p_z)``, with
    signed ``r = sqrt(2) p_x``.  Returns ``{curve: (k, 2) array}``."""
    L = check_leg_length(L)
    curves = {}
    alphas = np.linspace(0.0, 2.0 * math.pi, n)
    curves["sphere"] = np.stack([L * np.cos(alphas), L * np.sin(alphas)], axis=1)

    ws = []
    for a in alphas:
        e = _plane_direction(a)
        if np.any(e < 0):
            k = 1.0
        else:
            k = max(math.hypot(e[0], e[1]), math.hypot(e[0], e[2]), math.hypot(e[1], e[2]))
        node = L * e / k
        ws.append((math.sqrt(2.0) * node[0], node[2]))
    curves["workspace"] = np.array(ws)

    flat = []
    for a in np.linspace(eps, math.pi / 2.0 - eps, n):
        s = flat_section_radius(a, L)
        node = s * _plane_direction(a)
        flat.append((math.sqrt(2.0) * node[0], node[2]))
    curves["flat"] = np.array(flat)
    return curves
