"""Text serialisation: OBJ and CSV meshes, sweep/section CSV, volume reports.

Numbers are printed with 9 significant digits, ``.`` as decimal separator and
``\\n`` line endings, so identical inputs always give byte-identical files.
"""

from __future__ import annotations

import contextlib
import math
import sys
from typing import Iterable, TextIO

from orthoglide.geometry import SurfaceGrid, VolumeReport
from orthoglide.sweeps import SweepRecord


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"  # no negative zero
    return f"{x:.9g}"


def fmt_vec(v) -> str:
    return ",".join(fmt(c) for c in v)


@contextlib.contextmanager
def open_output(path, default: TextIO | None = None):
    """Yield a text stream for ``path``; ``None`` or ``-`` means ``default`` (stdout)."""
    if path is None or str(path) == "-":
        yield sys.stdout if default is None else default
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yield fh


def write_obj(grid: SurfaceGrid, fh: TextIO) -> None:
    rows, cols = grid.shape
    for x, y, z in grid.nodes():
        fh.write(f"v {fmt(x)} {fmt(y)} {fmt(z)}\n")
    for i in range(rows - 1):
        for j in range(cols - 1):
            a = i * cols + j + 1
            b = a + 1
            c = a + cols + 1
            d = a + cols
            fh.write(f"f {a} {b} {c} {d}\n")


def write_grid_csv(grid: SurfaceGrid, fh: TextIO) -> None:
    fh.write("i,j,phi,theta,x,y,z\n")
    rows, cols = grid.shape
    for i in range(rows):
        for j in range(cols):
            fh.write(
                f"{i},{j},{fmt(grid.phi[i])},{fmt(grid.theta[j])},"
                f"{fmt(grid.X[i, j])},{fmt(grid.Y[i, j])},{fmt(grid.Z[i, j])}\n"
            )


SWEEP_HEADER = "c,branch,detJ,detJinv,cond_inv,region"
SECTION_HEADER = "x,y,z,detJ,detJinv,cond_inv,region"


def write_sweep_csv(records: Iterable[SweepRecord], fh: TextIO) -> None:
    fh.write(SWEEP_HEADER + "\n")
    for r in records:
        fh.write(f"{fmt(r.c)},{r.branch},{fmt(r.det_j)},{fmt(r.det_jinv)},{fmt(r.cond_inv)},{r.region}\n")


def write_section_csv(records: Iterable[SweepRecord], fh: TextIO) -> None:
    fh.write(SECTION_HEADER + "\n")
    for r in records:
        x, y, z = r.point
        fh.write(
            f"{fmt(x)},{fmt(y)},{fmt(z)},{fmt(r.det_j)},{fmt(r.det_jinv)},{fmt(r.cond_inv)},{r.region}\n"
        )


def write_curves_csv(curves: dict, fh: TextIO) -> None:
    fh.write("curve,r,z\n")
    for name, pts in curves.items():
        for r, z in pts:
            fh.write(f"{name},{fmt(r)},{fmt(z)}\n")


def format_volume_report(report: VolumeReport) -> str:
    if report.method == "monte-carlo":
        line = (
            f"region={report.region} method=mc n={report.n} seed={report.seed} "
            f"value={fmt(report.value)} stderr={fmt(report.stderr)}"
        )
    else:
        line = f"region={report.region} method=closed value={fmt(report.value)}"
    if report.region == "Free":
        line += f" sphere_fraction={fmt(report.sphere_fraction)}"
    return line
