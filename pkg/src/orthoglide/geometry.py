"""Workspace, jointspace and singularity-surface meshes; workspace volumes.

All three meshes are structured grids over the two direction angles
``(phi, theta)`` with the unit direction::

    e = (cos(phi) cos(theta), cos(phi) sin(theta), sin(phi))

``phi`` is the outer (row) index and ``theta`` the inner (column) index.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from orthoglide.errors import NoBoundary
from orthoglide.kinematics import check_leg_length, region_codes
from orthoglide.sampling import block_ranges, uniform_block
from orthoglide.singularity import flat_residual

DEFAULT_STEP = math.pi / 180.0
DEFAULT_EPS = 1e-4

MC_MIN_SAMPLES = 10_000
MC_BLOCK = 1 << 20


@dataclass(frozen=True)
class MeshSpec:
    dphi: float = DEFAULT_STEP
    dtheta: float = DEFAULT_STEP
    eps: float = DEFAULT_EPS
    L: float = 1.0

    def __post_init__(self):
        if not (self.dphi > 0 and self.dtheta > 0):
            raise ValueError("grid steps must be positive")
        if not (0 < self.eps < math.pi / 4):
            raise ValueError("eps must lie in (0, pi/4)")
        check_leg_length(self.L)


@dataclass
class SurfaceGrid:
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    kind: str
    spec: MeshSpec = field(default_factory=MeshSpec)

    @property
    def shape(self) -> tuple[int, int]:
        return self.X.shape

    def nodes(self) -> np.ndarray:
        """Row-major ``(rows * cols, 3)`` array of node coordinates."""
        return np.stack([self.X.ravel(), self.Y.ravel(), self.Z.ravel()], axis=1)

    def interpolate(self, phi: float, theta: float) -> np.ndarray:
        """Bilinear interpolation of the node coordinates at ``(phi, theta)``."""
        out = []
        for arr in (self.X, self.Y, self.Z):
            f = RegularGridInterpolator((self.phi, self.theta), arr, method="linear")
            out.append(float(f([[phi, theta]])[0]))
        return np.array(out)


def angle_range(start: float, stop: float, step: float) -> np.ndarray:
    """``start, start+step, ...`` up to ``stop``; ``stop`` itself is always included."""
    count = int(math.floor((stop - start) / step + 1e-9))
    vals = start + step * np.arange(count + 1)
    if stop - vals[-1] > 1e-9 * max(1.0, abs(stop)):
        vals = np.append(vals, stop)
    else:
        vals[-1] = stop
    return vals


def direction(phi, theta):
    """Unit direction components for angles ``phi`` (elevation) and ``theta`` (azimuth)."""
    c = np.cos(phi)
    return c * np.cos(theta), c * np.sin(theta), np.sin(phi)


def _angle_grid(phi, theta):
    return np.meshgrid(phi, theta, indexing="ij")


def workspace_boundary_point(e, L: float = 1.0) -> np.ndarray:
    """Where the ray along unit direction ``e`` leaves the workspace.

    Any negative component puts the ray through the sphere part (radius L);
    otherwise it exits through the cylinder intersection at ``L / k`` with
    ``k = max(sqrt(ex^2 + ey^2), sqrt(ex^2 + ez^2), sqrt(ey^2 + ez^2))``.
    Accepts ``(..., 3)`` arrays.
    """
    e = np.asarray(e, dtype=float)
    ex, ey, ez = e[..., 0], e[..., 1], e[..., 2]
    k = np.maximum.reduce(
        [np.sqrt(ex**2 + ey**2), np.sqrt(ex**2 + ez**2), np.sqrt(ey**2 + ez**2)]
    )
    k = np.where((ex < 0) | (ey < 0) | (ez < 0), 1.0, k)
    return e * (L / k)[..., None]


def workspace_mesh(spec: MeshSpec = MeshSpec()) -> SurfaceGrid:
    """Boundary of the workspace: the sphere of radius L, replaced in the
    first octant by the outer surface of the three-cylinder intersection."""
    phi = angle_range(0.0, 2.0 * math.pi, spec.dphi)
    theta = angle_range(-math.pi / 2.0, math.pi / 2.0, spec.dtheta)
    e = np.stack(direction(*_angle_grid(phi, theta)), axis=-1)
    nodes = workspace_boundary_point(e, spec.L)
    return SurfaceGrid(nodes[..., 0], nodes[..., 1], nodes[..., 2], phi, theta, "workspace", spec)


def _open_octant_angles(spec):
    lo, hi = spec.eps, math.pi / 2.0 - spec.eps
    return angle_range(lo, hi, spec.dphi), angle_range(lo, hi, spec.dtheta)


def _jointspace_radius(ex, ey, ez, L):
    F = 1.0 / ex**2 + 1.0 / ey**2 + 1.0 / ez**2
    return 2.0 * L * np.sqrt(F / (F - 1.0))


def jointspace_boundary_point(e, L: float = 1.0) -> np.ndarray:
    """Joint vector ``t e`` on the jointspace boundary, ``t = 2L sqrt(F / (F - 1))``
    with ``F = sum(1 / e_i^2)``.  ``e`` must have strictly positive components."""
    e = np.asarray(e, dtype=float)
    t = _jointspace_radius(e[..., 0], e[..., 1], e[..., 2], L)
    return e * np.asarray(t)[..., None]


def flat_surface_point(e, L: float = 1.0) -> np.ndarray:
    """Double-root FK image of the jointspace boundary point along ``e``."""
    e = np.asarray(e, dtype=float)
    ex, ey, ez = e[..., 0], e[..., 1], e[..., 2]
    t = _jointspace_radius(ex, ey, ez, L)
    t0 = -((ex * ey * ez) ** 2) / (2.0 * (ex**2 * ey**2 + ex**2 * ez**2 + ey**2 * ez**2))
    return (e / 2.0 + np.asarray(t0)[..., None] / e) * np.asarray(t)[..., None]


def _octant_grid(spec, fn, kind):
    phi, theta = _open_octant_angles(spec)
    e = np.stack(direction(*_angle_grid(phi, theta)), axis=-1)
    nodes = fn(e, spec.L)
    return SurfaceGrid(nodes[..., 0], nodes[..., 1], nodes[..., 2], phi, theta, kind, spec)


def jointspace_mesh(spec: MeshSpec = MeshSpec()) -> SurfaceGrid:
    """Boundary of the feasible jointspace, where the FK discriminant vanishes."""
    return _octant_grid(spec, jointspace_boundary_point, "jointspace")


def flat_singularity_mesh(spec: MeshSpec = MeshSpec()) -> SurfaceGrid:
    """Flat (parallel) singularity surface, node by node the double-root FK
    solution of the corresponding jointspace-boundary node."""
    return _octant_grid(spec, flat_surface_point, "singularity")


def boundary_rho_x(rho_y: float, rho_z: float, L: float = 1.0) -> list[float]:
    """Positive ``rho_x`` putting ``(rho_x, rho_y, rho_z)`` on the jointspace boundary.

    Solves ``D S^2 + D E S + E = 0`` for ``S = rho_x^2`` with
    ``D = rho_y^-2 + rho_z^-2`` and ``E = rho_y^2 + rho_z^2 - 4 L^2``.
    """
    L = check_leg_length(L)
    if not (rho_y > 0 and rho_z > 0):
        raise ValueError("rho_y and rho_z must be positive")
    D = 1.0 / rho_y**2 + 1.0 / rho_z**2
    E = rho_y**2 + rho_z**2 - 4.0 * L * L
    a, b, c = D, D * E, E
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise NoBoundary(f"no boundary point for rho_y={rho_y:g}, rho_z={rho_z:g}")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    roots = {q / a}
    if q != 0.0:
        roots.add(c / q)
    positive = sorted(math.sqrt(S) for S in roots if S > 0.0)
    if not positive:
        raise NoBoundary(f"no positive boundary root for rho_y={rho_y:g}, rho_z={rho_z:g}")
    return positive


class CharacteristicPoints(NamedTuple):
    p1: np.ndarray  # sphere crossing, negative side
    p2: np.ndarray  # flat singularity surface
    p3: np.ndarray  # sphere crossing, first octant
    p4: np.ndarray  # cylinder-intersection boundary


def characteristic_points(L: float = 1.0) -> CharacteristicPoints:
    """Crossings of the first-octant bisector ``p = c (1, 1, 1)``."""
    L = check_leg_length(L)
    e = np.ones(3)
    return CharacteristicPoints(
        -L / math.sqrt(3.0) * e,
        L / math.sqrt(6.0) * e,
        L / math.sqrt(3.0) * e,
        L / math.sqrt(2.0) * e,
    )


# ---------------------------------------------------------------- volumes

REGIONS = ("C", "S", "G", "W", "Free")


def normalize_region(region: str) -> str:
    for r in REGIONS:
        if region.strip().lower() == r.lower():
            return r
    raise ValueError(f"unknown region {region!r}; expected one of {', '.join(REGIONS)}")


@dataclass(frozen=True)
class VolumeReport:
    region: str
    value: float
    method: str  # "closed-form" or "monte-carlo"
    L: float = 1.0
    n: int | None = None
    seed: int | None = None
    stderr: float | None = None

    @property
    def sphere_fraction(self) -> float:
        return self.value / sphere_volume(self.L)


def sphere_volume(L: float = 1.0) -> float:
    return 4.0 * math.pi / 3.0 * L**3


def volume_closed_form(region: str, L: float = 1.0) -> VolumeReport:
    L = check_leg_length(L)
    region = normalize_region(region)
    r2 = math.sqrt(2.0)
    factors = {
        "C": 8.0 * (2.0 - r2),
        "S": 4.0 * math.pi / 3.0,
        "G": 2.0 - r2 - math.pi / 6.0,
        "W": 2.0 + 7.0 * math.pi / 6.0 - r2,
    }
    if region not in factors:
        raise ValueError(f"no closed-form volume for region {region}")
    return VolumeReport(region, factors[region] * L**3, "closed-form", L)


def _count_hits(region, seed, start, count, L):
    u = uniform_block(seed, start, count)
    if region in ("G", "Free"):
        pts = u * L
    else:
        pts = (2.0 * u - 1.0) * L
    if region == "C":
        x2, y2, z2 = (pts * pts).T
        L2 = L * L
        return int(np.count_nonzero((x2 + y2 <= L2) & (x2 + z2 <= L2) & (y2 + z2 <= L2)))
    codes = region_codes(pts, L)
    if region == "S":
        return int(np.count_nonzero(codes == 1))
    if region == "G":
        return int(np.count_nonzero(codes == 2))
    if region == "W":
        return int(np.count_nonzero(codes != 0))
    # Free: count the first-octant cap between the flat surface and the sphere
    inside = pts[codes == 1]
    return int(np.count_nonzero(flat_residual(inside, L) > 0.0))


def volume_monte_carlo(
    region: str,
    n: int = 1_000_000,
    seed: int = 1,
    L: float = 1.0,
    workers: int = 1,
    block: int = MC_BLOCK,
) -> VolumeReport:
    """Rejection-sampling volume estimate with a binomial standard error.

    C, S and W are sampled in ``[-L, L]^3``; G in ``[0, L]^3``.  For the
    singularity-free region the first-octant cap beyond the flat surface is
    sampled in ``[0, L]^3`` and subtracted from the sphere volume.  Hit counts
    are integers summed per block, so the result does not depend on
    ``workers`` or ``block``.
    """
    L = check_leg_length(L)
    region = normalize_region(region)
    n = int(n)
    if n < MC_MIN_SAMPLES:
        raise ValueError(f"need at least {MC_MIN_SAMPLES} samples, got {n}")

    tasks = list(block_ranges(n, block))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda sc: _count_hits(region, seed, sc[0], sc[1], L), tasks))
    else:
        hits = sum(_count_hits(region, seed, s, c, L) for s, c in tasks)

    box = L**3 if region in ("G", "Free") else 8.0 * L**3
    f = hits / n
    stderr = box * math.sqrt(f * (1.0 - f) / n)
    value = box * f
    if region == "Free":
        value = sphere_volume(L) - value
    return VolumeReport(region, value, "monte-carlo", L, n, int(seed), stderr)
