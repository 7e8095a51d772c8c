import json
import subprocess
import sys

import pytest

from polarcert.cli import main, run, to_jsonable
from fractions import Fraction


def test_certify_h54(capsys):
    code, rep = run(["certify", "h54"])
    assert code == 0
    assert rep["result"]["final_equation"] == "24*x15 == 36 : infeasible"
    assert rep["version"] and rep["schema"] == 1
    assert rep["config"]["command"] == "certify"
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] is True


def test_srg_verify():
    code, rep = run(["srg", "verify", "--family", "H", "--d", "6", "--q", "2"])
    assert code == 0
    assert (rep["result"]["n"], rep["result"]["k"]) == (693, 180)


def test_search_elliptic_unsat():
    code, rep = run(["search", "ovoid", "--family", "Qminus", "--d", "6", "--q", "2"])
    assert code == 0
    assert rep["result"]["status"] == "unsat" and rep["result"]["nodes"] > 0


def test_search_timeout_exit_code():
    code, rep = run(["search", "ovoid", "--family", "H", "--d", "6", "--q", "2", "--budget-nodes", "10"])
    assert code == 1 and rep["result"]["status"] == "timeout"


def test_reports_are_byte_stable(capsys):
    run(["search", "ovoid", "--family", "H", "--d", "4", "--q", "2"])
    a = capsys.readouterr().out
    run(["search", "ovoid", "--family", "H", "--d", "4", "--q", "2"])
    b = capsys.readouterr().out
    assert a == b and "elapsed_s" not in a


def test_global_flags_either_side(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["--format", "text", "space", "--family", "W", "--d", "4", "--q", "2"]) == 0
    assert main(["space", "--family", "W", "--d", "4", "--q", "2", "--format", "text", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("polarcert") and "W(3,2)" in text


def test_bounds_and_rationals():
    code, rep = run(["certify", "bounds", "--family", "parabolic", "--qmax", "3"])
    assert code == 0
    assert rep["result"]["thresholds"] == {"2": "7/2", "3": "6/1"}
    assert to_jsonable({"x": Fraction(3, 2)}) == {"x": "3/2"}


def test_orbit_system():
    code, rep = run(["certify", "orbit-system"])
    assert code == 0
    funcs = rep["result"]["functionals"]
    assert funcs and all(v == ["3/2", "3/2"] for v in funcs.values())


def test_error_is_structured():
    code, rep = run(["search", "job", "--family", "W", "--d", "4", "--q", "2"])
    assert code == 1 and "checkpoint" in rep["error"]


def test_bad_flag_exits_nonzero():
    with pytest.raises(SystemExit) as e:
        main(["srg", "verify", "--bogus"])
    assert e.value.code != 0


def test_regress_subset(capsys):
    code, rep = run(["regress", "--skip-long", "--criteria", "3,9"])
    assert code == 0
    assert rep["result"]["h54_exhaustive"] == "skipped"
    assert "criterion  3 [PASS]" in capsys.readouterr().err


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "polarcert", "--format", "text", "group", "appendix"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "order: 144" in p.stdout
