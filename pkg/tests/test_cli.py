import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from matroidlab.cli import main
from matroidlab.formats import load_matroid, load_yaml

FIX = Path(__file__).parent / "fixtures"
MATROID_FIXTURES = ["u13", "k4", "k4_two_sum", "c5", "k4_hybrid", "k4_minor"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def field(out, key):
    return next(line.split(": ", 1)[1] for line in out.splitlines() if line.startswith(f"{key}: "))


@pytest.mark.parametrize("name", MATROID_FIXTURES)
def test_decompose_then_glue_is_identity(tmp_path, capsys, name):
    src = FIX / f"{name}.yaml"
    deco = tmp_path / "deco.yaml"
    glued = tmp_path / "glued.yaml"
    code, out, _ = run(capsys, "decompose", "--input", src, "--output", deco)
    assert code == 0, out
    code, out, _ = run(capsys, "glue", "--input", deco, "--output", glued)
    assert code == 0 and field(out, "equal-to-source") == "yes"
    assert load_matroid(glued) == load_matroid(src)


def test_check_axioms_accepts_and_rejects(capsys):
    assert run(capsys, "check-axioms", "--input", FIX / "k4.yaml")[0] == 0
    code, out, _ = run(capsys, "check-axioms", "--input", FIX / "not_a_matroid.yaml")
    assert code == 1 and field(out, "status") == "fail"


def test_hybrid_fixture_reports_hybrid_lines(capsys):
    code, out, _ = run(capsys, "check-axioms", "--input", FIX / "k4_hybrid.yaml")
    assert code == 0
    assert field(out, "with-cocircuits-hybrid-ok") == "pass"
    assert field(out, "with-cocircuits-reconstruction") == "pass"


def test_dualize_twice_returns_input(tmp_path, capsys):
    once, twice = tmp_path / "d1.yaml", tmp_path / "d2.yaml"
    assert run(capsys, "dualize", "--input", FIX / "k4_two_sum.yaml", "--output", once)[0] == 0
    assert run(capsys, "dualize", "--input", once, "--output", twice)[0] == 0
    assert load_matroid(twice) == load_matroid(FIX / "k4_two_sum.yaml")


def test_minorize_output_is_a_matroid(tmp_path, capsys):
    dst = tmp_path / "minor.yaml"
    code, out, _ = run(capsys, "minorize", "--input", FIX / "k4_minor.yaml", "--output", dst)
    assert code == 0
    m = load_matroid(dst)
    assert "01" not in m.ground and "23" not in m.ground and len(m.elements) == 4


def test_torso_and_precircuit(capsys):
    assert run(capsys, "torso", "--input", FIX / "k4_two_sum.yaml")[0] == 0
    code, out, _ = run(capsys, "precircuit", "--input", FIX / "k4_two_sum.yaml")
    assert code == 0 and field(out, "psi-circuits") == "22"


def test_ray_commands(capsys):
    code, out, _ = run(capsys, "ray-validate", "--input", FIX / "ray_q.yaml")
    assert code == 0 and field(out, "nice") == "yes"
    code, out, _ = run(capsys, "ray-equiv", "--input", FIX / "q_equiv.yaml")
    assert code == 0
    code, out, _ = run(capsys, "ray-member", "--input", FIX / "q_member.yaml", "--phi", FIX / "phi0.yaml")
    assert code == 0


def test_q_report_and_w_verify(capsys):
    code, out, _ = run(capsys, "q-report", "--phi", FIX / "phi_mod3.yaml", "--depth", 4)
    assert code == 0 and field(out, "summary-match") == "yes"
    code, out, _ = run(capsys, "w-verify", "--depth", 3, "--tau", FIX / "tau.yaml")
    assert code == 0 and field(out, "w3-shape") == "ok" and field(out, "remark-holds") == "yes"


def test_reserved_label_is_input_error(capsys):
    code, out, err = run(capsys, "check-axioms", "--input", FIX / "reserved_label.yaml")
    assert code == 2 and err.startswith("error:") and out == ""


def test_missing_file_and_bad_yaml(tmp_path, capsys):
    assert run(capsys, "dualize", "--input", tmp_path / "nope.yaml")[0] == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("elements: [a, b\ncircuits: []\n")
    code, _, err = run(capsys, "dualize", "--input", bad)
    assert code == 2 and "line" in err


def test_cap_exceeded_is_reported(tmp_path, capsys):
    big = tmp_path / "big.yaml"
    big.write_text("elements: [" + ", ".join(f"e{i}" for i in range(13)) + "]\ncircuits: []\n")
    code, _, err = run(capsys, "dualize", "--input", big)
    assert code == 2 and "cap" in err


def test_unknown_flag_exits_two(capsys):
    assert run(capsys, "dualize", "--bogus")[0] == 2


def test_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.yaml", tmp_path / "b.yaml"
    run(capsys, "decompose", "--input", FIX / "k4_two_sum.yaml", "--output", a)
    run(capsys, "decompose", "--input", FIX / "k4_two_sum.yaml", "--output", b)
    assert a.read_bytes() == b.read_bytes()
    assert load_yaml(a)["nodes"]


def test_console_script_is_deterministic():
    exe = shutil.which("matroidlab")
    cmd = [exe] if exe else [sys.executable, "-m", "matroidlab.cli"]
    args = cmd + ["decompose", "--input", str(FIX / "k4_two_sum.yaml")]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args, capture_output=True, check=True).stdout
    assert first == second and b"status: ok" in first
