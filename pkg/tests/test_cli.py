import io
import json
import math

import pytest

from orthoglide.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def fields(line):
    return dict(kv.split("=", 1) for kv in line.split())


def test_ik_zero_posture():
    code, out, _ = call("ik", "--point", "0,0,0", "--branch", "PPP")
    assert code == 0
    f = fields(out)
    assert f["joints"] == "1,1,1" and f["feasible"] == "true"


def test_ik_negative_coordinates_parse():
    code, out, _ = call("ik", "--point", "-0.5,0.4,0.3", "--all", "--json")
    assert code == 0
    [obj] = [json.loads(l) for l in out.splitlines()]
    assert obj["branch"] == "PPP"
    assert obj["joints"][0] == pytest.approx(0.3660254, abs=1e-7)


def test_ik_all_eight():
    code, out, _ = call("ik", "--point", "0.7,0.7,0.7", "--all")
    assert code == 0
    assert [fields(l)["branch"] for l in out.splitlines()] == ["PPP", "PPM", "PMP", "PMM", "MPP", "MPM", "MMP", "MMM"]


def test_ik_unreachable():
    code, out, err = call("ik", "--point", "1.1,0,0", "--all")
    assert code == 3 and out == ""
    assert err.startswith("ERROR UNREACHABLE:")


def test_ik_infeasible_branch():
    code, out, err = call("ik", "--point", "0,0,0", "--branch", "MMM")
    assert code == 3
    assert fields(out)["feasible"] == "false"
    assert err.startswith("ERROR INFEASIBLE:")


def test_fk_both_modes():
    code, out, _ = call("fk", "--joints", "0.3,0.3,0.3", "--mode", "both")
    assert code == 0
    lines = [fields(l) for l in out.splitlines()]
    assert [l["mode"] for l in lines] == ["-1", "1"]
    assert lines[1]["point"] == "0.659761854,0.659761854,0.659761854"


def test_fk_single_mode_and_flat():
    code, out, _ = call("fk", "--joints", "1,1,1", "--mode", "-1")
    assert code == 0 and fields(out)["point"] == "0,0,0"
    s = repr(math.sqrt(1.5))
    code, out, _ = call("fk", "--joints", f"{s},{s},{s}", "--mode", "both")
    assert code == 0
    f = fields(out)
    assert f["mode"] == "flat" and f["class"] == "ParallelFlat"
    code, out, _ = call("fk", "--joints", f"{s},{s},{s}", "--json")
    assert json.loads(out)["mode"] is None


def test_fk_no_assembly_and_degenerate():
    assert call("fk", "--joints", "2,2,2", "--mode", "1")[2].startswith("ERROR NO_ASSEMBLY:")
    code, _, err = call("fk", "--joints", "0,1,1")
    assert code == 3 and err.startswith("ERROR DEGENERATE_JOINT:")


def test_classify():
    code, out, _ = call("classify", "--point", "0,0,0", "--joints", "1,1,1")
    f = fields(out)
    assert code == 0 and f["class"] == "Regular" and f["cond_inv"] == "1" and f["det_j"] == "1"
    code, _, err = call("classify", "--point", "0,0,0", "--joints", "1,1,2")
    assert code == 3 and err.startswith("ERROR NOT_A_POSTURE:")


@pytest.mark.parametrize(
    "argv",
    [
        ["ik"],
        ["ik", "--point", "1,2"],
        ["ik", "--point", "0,0,0", "--branch", "PPX"],
        ["fk", "--joints", "1,1,1", "--mode", "0"],
        ["volume", "--region", "Q"],
        ["volume", "--region", "free", "--method", "closed"],
        ["volume", "--region", "W", "--method", "mc", "--samples", "10"],
        ["sweep", "--n", "1"],
        ["section", "--z", "1.5", "--n", "5"],
        ["ik", "--point", "0,0,0", "--leg-length", "-1"],
        ["nonsense"],
    ],
)
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert err.startswith("ERROR USAGE:")


def test_volume_closed_and_mc():
    code, out, _ = call("volume", "--region", "W", "--method", "closed")
    assert code == 0 and out == "region=W method=closed value=4.25097787\n"
    code, out, _ = call("volume", "--region", "free", "--method", "mc", "--samples", "20000", "--seed", "3")
    f = fields(out)
    assert f["region"] == "Free" and f["n"] == "20000" and f["seed"] == "3"
    assert 0.9 < float(f["sphere_fraction"]) < 1.0


def test_volume_workers_do_not_change_output():
    a = call("volume", "--region", "W", "--method", "mc", "--samples", "50000")[1]
    b = call("volume", "--region", "W", "--method", "mc", "--samples", "50000", "--workers", "3")[1]
    assert a == b


@pytest.mark.parametrize("surface", ["workspace", "jointspace", "singularity"])
def test_mesh_obj_deterministic(tmp_path, surface):
    paths = [tmp_path / f"{surface}{i}.obj" for i in range(2)]
    for p in paths:
        assert call("mesh", surface, "--dphi", "0.2", "--dtheta", "0.2", "--format", "obj", "--out", str(p))[0] == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    lines = a.decode().splitlines()
    assert lines[0].startswith("v ") and lines[-1].startswith("f ")
    assert b"\r" not in a


def test_mesh_csv(tmp_path):
    p = tmp_path / "w.csv"
    assert call("mesh", "workspace", "--format", "csv", "--out", str(p))[0] == 0
    lines = p.read_text().splitlines()
    assert lines[0] == "i,j,phi,theta,x,y,z"
    assert len(lines) == 1 + 361 * 181


def test_mesh_bad_path():
    code, _, err = call("mesh", "workspace", "--format", "obj", "--out", "/nonexistent/dir/x.obj")
    assert code == 4 and err.startswith("ERROR IO:")


def test_sweep_csv(tmp_path):
    p = tmp_path / "s.csv"
    assert call("sweep", "--n", "50", "--out", str(p))[0] == 0
    lines = p.read_text().splitlines()
    assert lines[0] == "c,branch,detJ,detJinv,cond_inv,region"
    assert len(lines) > 50


def test_sweep_stdout_deterministic():
    assert call("sweep", "--n", "30")[1] == call("sweep", "--n", "30")[1]


def test_section_outputs():
    code, out, _ = call("section", "--z", "0", "--n", "5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x,y,z,detJ,detJinv,cond_inv,region"
    assert "0,0,0,1,1,1,SphereS" in lines
    assert lines[1].endswith(",,,OutsideWorkspace")
    code, out, _ = call("section", "--z", "-0.5", "--n", "5")
    assert code == 0
    code, out, _ = call("section", "--plane", "bisector", "--n", "19")
    assert code == 0 and out.splitlines()[0] == "curve,r,z"


def test_leg_length_scales_output():
    _, a, _ = call("ik", "--point", "0,0,0")
    _, b, _ = call("ik", "--point", "0,0,0", "--leg-length", "2")
    assert fields(a)["joints"] == "1,1,1" and fields(b)["joints"] == "2,2,2"
