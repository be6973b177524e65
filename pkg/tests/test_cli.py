import json
import subprocess
import sys

import pytest

from finsler_toolkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    assert code == 0, err
    return json.loads(out)


def test_rootsys_info(capsys):
    info = run_json(capsys, "rootsys", "info", "--type", "B2")
    assert info["rank"] == 2 and info["roots"] == 8
    assert info["cartan_matrix"] == [[2, -1], [-2, 2]] or info["cartan_matrix"] == [[2, -2], [-1, 2]]


def test_weyl_commands(capsys):
    out = run_json(capsys, "weyl", "enumerate", "--type", "A2")
    assert len(out["elements"]) == 6 and out["longest"] == "s1 s2 s1"
    out = run_json(capsys, "weyl", "bruhat", "--type", "A2", "--u", "s2", "--w", "s1 s2")
    assert out["u_leq_w"] and not out["w_leq_u"]


def test_thickening_commands(capsys):
    out = run_json(capsys, "thickening", "classify", "--type", "A2", "--words", "e,s1,s2")
    assert out["balanced"] and out["ideal"]
    out = run_json(capsys, "thickening", "complement", "--type", "A2", "--words", "e,s2")
    assert out["complement"] == ["e", "s1", "s2", "s1 s2"]
    out = run_json(capsys, "thickening", "balanced", "--type", "B2")
    assert out["count"] == 2
    out = run_json(capsys, "thickening", "metric", "--type", "A2", "--seed", "1")
    assert out["balanced"] and out["thickening"] == ["e", "s1", "s2"]


def test_polytope_commands(capsys):
    out = run_json(capsys, "polytope", "cube-check", "--type", "A3")
    assert out["passed"] and out["f_vector"] == [8, 12, 6, 1]
    out = run_json(capsys, "polytope", "ball", "--type", "A2")
    assert len(out["vertices"]) == 6
    out = run_json(capsys, "polytope", "dual", "--type", "A2")
    assert len(out["vertices"]) == 6


def test_finsler_commands(capsys):
    out = run_json(capsys, "finsler", "dist", "--type", "A2", "--x", "0,0,0", "--y", "1,0,-1")
    assert out["distance"] == pytest.approx(2.0) and out["witnesses"] == ["e"]
    out = run_json(capsys, "finsler", "diamond", "--type", "A2", "--x", "0,0,0",
                   "--y", "2,0,-2", "--z", "1,0,-1")
    assert out["in_diamond"]
    out = run_json(capsys, "finsler", "horolimit", "--type", "A2", "--seed", "0",
                   "--samples", "200", "--kmax", "15")
    assert out["first_below"] is not None
    out = run_json(capsys, "finsler", "coords", "--type", "A2", "--x", "2/3,-1/3,-1/3",
                   "--kmax", "1000")
    assert out["converges"] and out["limit"] == ["inf", 0.0]


def test_symspace_commands(capsys):
    out = run_json(capsys, "symspace", "cartan", "--matrix", "2,0;0,0.5")
    assert out["delta"] == pytest.approx([0.6931471805599453, -0.6931471805599453])
    out = run_json(capsys, "symspace", "flaglimit", "--matrix", "7.389,0,0;0,2.718,0;0,0,0.04979",
                   "--power", "20")
    assert out["forward"]["dims"] == [1, 2]
    out = run_json(capsys, "symspace", "pos", "--flag", "0,0,1;0,1,0;1,0,0", "--ref", "1,0,0;0,1,0;0,0,1")
    assert out["representative"] == "s1 s2 s1"
    out = run_json(capsys, "symspace", "limitset", "--radius", "6")
    assert len(out["flags"]) == 6


def test_examples(capsys):
    out = run_json(capsys, "example", "a2-balanced")
    assert out["thickenings"] == [["e", "s1", "s2"]]
    out = run_json(capsys, "example", "psl3-domain", "--seed", "0", "--count", "200")
    assert out["disagreements"] == 0


def test_json_output_is_deterministic(capsys):
    argv = ["--format", "json", "finsler", "horolimit", "--type", "B2", "--seed", "5",
            "--samples", "100", "--kmax", "5"]
    assert run(capsys, *argv) == run(capsys, *argv)
    argv = ["--format", "json", "symspace", "limitset", "--radius", "5"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_table_output(capsys):
    code, out, _ = run(capsys, "polytope", "cube-check", "--type", "A2")
    assert code == 0 and "passed: True" in out


def test_exit_codes(capsys):
    code, _, err = run(capsys, "rootsys", "info", "--type", "E8")
    assert code == 1 and "rootsys." in err
    code, _, err = run(capsys, "thickening", "metric", "--type", "A2")
    assert code == 2
    code, _, err = run(capsys, "thickening", "balanced", "--type", "D4")
    assert code == 2 and "seed" in err
    code, _, err = run(capsys, "finsler", "dist", "--type", "A2", "--x", "0,0", "--y", "1,0,-1")
    assert code == 2
    code, _, err = run(capsys, "symspace", "cartan", "--matrix", "1,2;2,4")
    assert code == 1 and "singular" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "finsler_toolkit", "example", "a2-balanced"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "s1" in proc.stdout
