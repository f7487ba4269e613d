import io
import math

import numpy as np
import pytest

from orthoglide import MeshSpec, Region, flat_residual, volume_closed_form, volume_monte_carlo, workspace_mesh
from orthoglide.serialize import (
    SWEEP_HEADER,
    fmt,
    format_volume_report,
    write_curves_csv,
    write_grid_csv,
    write_obj,
    write_sweep_csv,
)
from orthoglide.sweeps import (
    bisector_records,
    bisector_section,
    flat_section_radius,
    jacobian_measures,
    section_cond,
    sweep_bisector,
)

FLAT_C = 1 / math.sqrt(6)


def flat_residual_rz(rz):
    r, z = rz.T
    x = r / math.sqrt(2)
    return flat_residual(np.stack([x, x, z], axis=1))


# ---------------------------------------------------------------- sweeps


def test_origin_record():
    [r] = bisector_records([0.0])
    assert r.branch == "PPP"
    assert r.det_j == pytest.approx(1.0) and r.cond_inv == pytest.approx(1.0)
    assert r.region is Region.SPHERE_S


def test_flat_point_record():
    [r] = bisector_records([FLAT_C])
    assert abs(r.det_jinv) < 1e-9
    assert math.isinf(r.det_j)
    assert r.cond_inv < 1e-6


def test_flat_sentinel_sign_is_one_sided_limit():
    [r] = bisector_records([FLAT_C])
    [before] = bisector_records([FLAT_C - 1e-4])
    assert math.copysign(1, r.det_j) == math.copysign(1, before.det_j)


def test_solid_g_has_eight_branches():
    recs = bisector_records([0.65])
    assert len(recs) == 8
    assert {r.region for r in recs} == {Region.SOLID_G}
    assert [r.branch for r in recs] == ["PPP", "PPM", "PMP", "PMM", "MPP", "MPM", "MMP", "MMM"]


def test_sweep_reciprocal_and_range():
    recs = sweep_bisector(401)
    assert recs[0].c == pytest.approx(-1 / math.sqrt(3) + 1e-6)
    assert recs[-1].c == pytest.approx(1 / math.sqrt(2) - 1e-6)
    for r in recs:
        assert 0.0 <= r.cond_inv <= 1.0
        if r.is_regular:
            assert abs(r.det_j * r.det_jinv - 1) <= 1e-9


def test_sweep_rejects_tiny_n():
    with pytest.raises(ValueError):
        sweep_bisector(1)


def test_serial_measures():
    p = np.array([0.1, 0.9, math.sqrt(0.19)])
    assert jacobian_measures(p, (0.1, 0.9 + math.sqrt(0.98), math.sqrt(0.19) + math.sqrt(0.18))) == (0.0, math.inf, 0.0)


def test_section_center_is_isotropic():
    recs = section_cond(0.0, 21)
    assert len(recs) == 441
    centre = recs[220]
    assert centre.point == (0.0, 0.0, 0.0)
    assert centre.cond_inv == pytest.approx(1.0)
    corner = recs[0]
    assert corner.cond_inv is None


def test_cond_falls_towards_flat_surface():
    cs = np.linspace(0.0, FLAT_C, 41)
    vals = [bisector_records([c])[0].cond_inv for c in cs]
    assert vals[0] == pytest.approx(1.0)
    assert vals[-1] < 1e-6
    assert np.all(np.diff(vals) < 0)


def test_section_cond_in_unit_interval():
    for r in section_cond(0.3, 31):
        if r.cond_inv is not None:
            assert 0.0 <= r.cond_inv <= 1.0
            assert r.region in (Region.SPHERE_S, Region.SOLID_G)


def test_section_rejects_bad_height():
    with pytest.raises(ValueError):
        section_cond(1.0, 5)


def test_bisector_section_flat_crossing():
    # bisector direction in the (r, z) plane, r = sqrt(2) p_x
    alpha = math.atan2(1.0, math.sqrt(2))
    r = flat_section_radius(alpha) * math.cos(alpha)
    assert r == pytest.approx(math.sqrt(2) / math.sqrt(6), abs=1e-9)
    assert r == pytest.approx(0.5774, abs=1e-4)
    curves = bisector_section(91)
    assert np.all(np.abs(flat_residual_rz(curves["flat"])) < 1e-9)
    assert set(curves) == {"sphere", "workspace", "flat"}
    np.testing.assert_allclose(np.hypot(*curves["sphere"].T), 1.0)


# ---------------------------------------------------------------- serialization


@pytest.mark.parametrize(
    "x, s",
    [(0.0, "0"), (-0.0, "0"), (1.0, "1"), (1 / 3, "0.333333333"), (math.inf, "inf"), (-math.inf, "-inf"),
     (math.nan, "nan"), (None, ""), (True, "true"), (1e-20, "1e-20")],
)
def test_fmt(x, s):
    assert fmt(x) == s


def test_obj_layout():
    g = workspace_mesh(MeshSpec(dphi=math.pi, dtheta=math.pi / 2))
    buf = io.StringIO()
    write_obj(g, buf)
    lines = buf.getvalue().splitlines()
    rows, cols = g.shape
    assert (rows, cols) == (3, 3)
    assert sum(l.startswith("v ") for l in lines) == 9
    faces = [l for l in lines if l.startswith("f ")]
    assert faces[0] == "f 1 2 5 4"
    assert len(faces) == (rows - 1) * (cols - 1)


def test_grid_csv_header_and_rows():
    g = workspace_mesh(MeshSpec(dphi=math.pi, dtheta=math.pi / 2))
    buf = io.StringIO()
    write_grid_csv(g, buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "i,j,phi,theta,x,y,z"
    assert len(lines) == 1 + 9 + 1  # trailing newline


def test_sweep_csv_header():
    buf = io.StringIO()
    write_sweep_csv(bisector_records([0.0]), buf)
    assert buf.getvalue().splitlines() == [SWEEP_HEADER, "0,PPP,1,1,1,SphereS"]


def test_curves_csv():
    buf = io.StringIO()
    write_curves_csv({"a": [(0.5, 0.25)]}, buf)
    assert buf.getvalue() == "curve,r,z\na,0.5,0.25\n"


def test_volume_report_lines():
    assert format_volume_report(volume_closed_form("C")) == "region=C method=closed value=4.6862915"
    r = volume_monte_carlo("Free", n=10_000, seed=1)
    line = format_volume_report(r)
    assert line.startswith("region=Free method=mc n=10000 seed=1 value=")
    assert "stderr=" in line and "sphere_fraction=" in line
