import contextlib
import io
import json
import sys

import numpy as np
import pytest

from henon_lane_emden.cli import REGION_CODES, main, region_bounds, region_grid
from henon_lane_emden.power import membership_Q
from henon_lane_emden.regions import ExponentPair, Membership, WeightPair, membership_E

from conftest import GOLDEN

sys.path.insert(0, str(GOLDEN))
from cases import CASES, argv, fixture_name  # noqa: E402


def run(args):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(args)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def test_classify_homogeneous_anchor():
    code, out, _ = run(["classify", "--n", "3", "--p", "2", "--q", "2", "--a", "-2", "--b", "-2"])
    assert code == 0
    d = json.loads(out)
    assert d["in_E"] == "Inside" and d["regime"] == "Homogeneous"


def test_classify_fixed_point_in_Q():
    code, out, _ = run(["classify", "--n", "5", "--p", "3", "--q", "3", "--a", "-0.5", "--b", "-0.5"])
    assert code == 0 and json.loads(out)["in_Q"] == "Inside"


@pytest.mark.parametrize(
    "args, flag",
    [
        (["classify", "--n", "3", "--p", "0.5", "--q", "2", "--a", "0", "--b", "0"], "--p"),
        (["classify", "--n", "2", "--p", "2", "--q", "2", "--a", "0", "--b", "0"], "--n"),
        (["power", "--n", "3", "--p", "2", "--q", "x", "--a", "0", "--b", "0"], "--q"),
        (["region", "--n", "3", "--p", "2", "--q", "2", "--grid", "0"], "--grid"),
    ],
)
def test_usage_errors(args, flag):
    code, out, err = run(args)
    assert code == 2
    assert flag in err
    assert out == ""


def test_power_anchor():
    code, out, _ = run(["power", "--n", "5", "--p", "3", "--q", "3", "--a", "-0.5", "--b", "-0.5"])
    assert json.loads(out) == {"alpha": -1.5, "beta": -1.5, "lambda1": 2.25, "lambda2": 2.25, "positive": True}


def test_power_family_evaluation():
    code, out, _ = run(["power", "--n", "3", "--p", "2", "--q", "2", "--a", "-2", "--b", "-2", "--alpha", "-0.5"])
    assert code == 0
    assert json.loads(out)["solution"]["lambda1"] == 0.25


def test_kelvin():
    code, out, _ = run(["kelvin", "--n", "5", "--p", "3", "--q", "3", "--a", "-2", "--b", "-2"])
    d = json.loads(out)
    assert code == 0
    assert d["image"] == {"a": 1, "b": 1}
    assert d["fixed_point"] == {"a": -0.5, "b": -0.5}


def test_computational_error_is_single_line_json():
    code, out, _ = run(["solve", "--n", "3", "--p", "2", "--q", "2", "--a", "0", "--b", "0"])
    assert code == 1
    assert out.count("\n") == 1
    d = json.loads(out)
    assert set(d) == {"error", "detail"} and d["error"] == "NotInScope"


def test_solve_and_verify_roundtrip(tmp_path):
    csv = tmp_path / "prof.csv"
    code, out, _ = run(["solve", "--method", "shooting", "--n", "3", "--p", "3", "--q", "3",
                        "--a", "0", "--b", "0", "--grid", "512", "--out", str(csv)])
    assert code == 0
    summary = json.loads(out)
    assert summary["boundary_defect"] < 1e-8
    assert summary["gamma"][0] == pytest.approx(18.9475, rel=1e-5)
    assert csv.read_text().startswith("r,u,v\n")
    code, out, _ = run(["verify", "--n", "3", "--p", "3", "--q", "3", "--a", "0", "--b", "0",
                        "--profile", str(csv), "--mass-radius", "0.5"])
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and d["nodes"] == 513
    assert d["mass"]["U_R"] > 0


def test_solve_rayleigh_anchor():
    code, out, _ = run(["solve", "--method", "rayleigh", "--n", "3", "--p", "2", "--q", "2",
                        "--a", "0", "--b", "0", "--grid", "2048"])
    assert code == 0
    assert json.loads(out)["m_value"] == pytest.approx(np.pi**4, rel=1e-2)


def test_verify_missing_file(tmp_path):
    code, out, _ = run(["verify", "--n", "3", "--p", "3", "--q", "3", "--a", "0", "--b", "0",
                        "--profile", str(tmp_path / "none.csv")])
    assert code == 1 and json.loads(out)["error"] == "HLEError"


def test_config_defaults_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\neps = 0.5\nn = 5\n")
    base = ["--config", str(cfg), "classify", "--p", "3", "--q", "3", "--a", "-2", "--b", "-1.6"]
    code, out, _ = run(base)
    assert code == 0
    d = json.loads(out)
    assert d["boundary_tolerance"] == 0.5
    assert d["in_Q"] == "Boundary"
    code, out, _ = run(base + ["--eps", "1e-12"])
    assert json.loads(out)["in_Q"] == "Inside"


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign\n")
    code, _, err = run(["--config", str(cfg), "classify", "--n", "3", "--p", "2", "--q", "2", "--a", "0", "--b", "0"])
    assert code == 2 and "--config" in err


def test_region_help_documents_codes():
    _, out, _ = run(["region", "--help"])
    for k in ("0 = outside", "1 = in E", "2 = in Q", "3 = on the boundary"):
        assert k in out


def test_region_parallelogram():
    e = ExponentPair(5, 3, 3)
    A, B, code = region_grid(e, 200)
    q = code == REGION_CODES["Q"]
    # corners near X, X', V, V'
    for corner in ((-5, 4), (4, -5), (-2, -2), (1, 1)):
        d = np.hypot(A[q] - corner[0], B[q] - corner[1])
        assert d.min() < 0.1
    assert np.all(A[q] + B[q] > -4.0)


def test_region_spot_check():
    rng = np.random.default_rng(3)
    for n, p, q in ((5, 3, 3), (4, 1.5, 1.8), (3, 2, 2)):
        e = ExponentPair(n, p, q)
        A, B, code = region_grid(e, 100)
        for i in rng.choice(code.size, code.size // 100, replace=False):
            w = WeightPair(A[i], B[i])
            inE = membership_E(e, w, 1e-9).in_E
            inQ = membership_Q(e, w, 1e-9)
            if Membership.BOUNDARY in (inE, inQ):
                expected = REGION_CODES["boundary"]
            elif inQ is Membership.INSIDE:
                expected = REGION_CODES["Q"]
            elif inE is Membership.INSIDE:
                expected = REGION_CODES["E_only"]
            else:
                expected = REGION_CODES["outside"]
            assert code[i] == expected


def test_region_bounds_cover_vertices():
    a0, a1, b0, b1 = region_bounds(ExponentPair(5, 3, 3))
    assert a0 < -5 and a1 > 4 and b0 < -5 and b1 > 4


def test_region_writes_file(tmp_path):
    path = tmp_path / "grid.csv"
    code, out, _ = run(["region", "--n", "5", "--p", "3", "--q", "3", "--grid", "10", "--out", str(path)])
    assert code == 0
    assert json.loads(out)["cells"] == 100
    assert path.read_text().count("\n") == 101


@pytest.mark.parametrize("case", sorted(CASES))
@pytest.mark.parametrize("command", ["classify", "power", "region"])
def test_golden(command, case):
    code, out, _ = run(argv(command, case))
    assert code == 0
    expected = (GOLDEN / fixture_name(command, case)).read_bytes()
    assert out.encode() == expected
