import json
import subprocess
import sys

import jsonschema
import pytest

from knotspec.cli import main
from knotspec.schemas import SCHEMAS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, command, *argv):
    code, out, _ = run(capsys, command, *argv, "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMAS[command])
    return code, data


def test_e1_examples(capsys):
    code, out, _ = run(capsys, "e1", "--p", "3", "--q", "3")
    assert code == 0 and "free rank: 1" in out
    code, out, _ = run(capsys, "e1", "--p", "0", "--q", "1")
    assert code == 0 and "= 0" in out
    code, data = run_json(capsys, "e1", "--p", "5", "--q", "5")
    assert code == 0 and data["free_rank"] == 6


def test_e1_rejects_bad_range(capsys):
    code, _, err = run(capsys, "e1", "--p", "4", "--q", "3")
    assert code == 2 and "error" in err


def test_d1_low_degrees(capsys):
    code, out, _ = run(capsys, "d1", "--p", "2")
    assert code == 0 and "isomorphism" in out and "-x(1,2)" in out
    code, out, _ = run(capsys, "d1", "--p", "3")
    assert code == 0 and "zero map" in out
    for p in ("1", "2", "3"):
        code, data = run_json(capsys, "d1", "--p", p)
        assert code == 0
    assert data["status"] == "zero"


def test_d1_oracle_agrees(capsys):
    code, out, err = run(capsys, "d1", "--p", "5", "--oracle")
    assert code == 0 and "oracle: agree (12 generators)" in out
    assert "[DISAGREE]" not in out
    assert "oracle run" in err and "s" in err
    code, data = run_json(capsys, "d1", "--p", "5", "--oracle")
    assert data["oracle"] == {"agree": True, "checked": 12}
    assert all(item["oracle_agrees"] for item in data["images"])
    assert data["d1_matrix_rank"] == 4


def test_d1_jobs_do_not_change_output(capsys):
    _, serial, _ = run(capsys, "d1", "--p", "5", "--format", "json")
    _, parallel, _ = run(capsys, "d1", "--p", "5", "--format", "json", "--jobs", "3")
    assert serial == parallel


def test_outputs_are_deterministic(capsys):
    for argv in (["e2", "--p", "5"], ["dsep", "--p", "5"], ["trees", "--degree", "3"], ["e1", "--p", "4", "--q", "5"]):
        first = run(capsys, *argv, "--format", "json")[1]
        assert first == run(capsys, *argv, "--format", "json")[1]


def test_e2(capsys):
    code, out, _ = run(capsys, "e2", "--p", "3")
    assert code == 0 and out.startswith("E2_{3,3} = Z\n")
    for p in ("0", "1", "2"):
        code, data = run_json(capsys, "e2", "--p", p)
        assert code == 0 and data["e2"] == "0"
    for p in ("4", "5"):
        code, data = run_json(capsys, "e2", "--p", p)
        c = data["certificates"]
        assert code == 0 and c["image_equals_stu2_span"] and c["image_in_stu2_span"] and c["stu2_span_in_image"]
        assert data["e2_invariant_factors"] == []


def test_e2_without_certificate(capsys):
    code, data = run_json(capsys, "e2", "--p", "4", "--no-certificate")
    assert code == 0 and "image_equals_stu2_span" not in data["certificates"]


def test_trees(capsys):
    code, out, _ = run(capsys, "trees", "--degree", "2", "--modulo", "as,ihx")
    assert code == 0 and out.startswith("T_2 modulo AS, IHX = Z\n")
    code, data = run_json(capsys, "trees", "--degree", "3", "--modulo", "as,ihx,stu2")
    assert code == 0 and data["group"] == "Z"
    code, data = run_json(capsys, "trees", "--degree", "2", "--modulo", "ihx")
    assert data["free_rank"] == 2 and len(data["generators"]) == 2


def test_trees_bad_modulo(capsys):
    code, _, err = run(capsys, "trees", "--degree", "2", "--modulo", "as,foo")
    assert code == 2 and "foo" in err


def test_dsep(capsys):
    code, data = run_json(capsys, "dsep", "--p", "4")
    assert code == 0 and [g["term"] for g in data["generators"]] == ["[x(1,3),[x(1,3),x(2,3)]]", "[x(2,3),[x(1,3),x(2,3)]]"]
    code, out, _ = run(capsys, "dsep", "--p", "4", "--format", "dot")
    assert code == 0 and out.count("graph D") == 2


def test_dot_outputs(capsys):
    code, out, _ = run(capsys, "trees", "--degree", "2", "--format", "dot")
    assert code == 0 and out.startswith("graph T0 {") and "rank=same" in out
    code, out, _ = run(capsys, "export-dot", "--term", "[x13,x23]")
    assert code == 0 and out.startswith("graph T {")
    code, out, _ = run(capsys, "export-dot", "--term", "[x13,[x13,x23]]")
    assert code == 0 and out.startswith("graph D {")
    code, out, _ = run(capsys, "e2", "--p", "4", "--format", "dot")
    assert code == 0 and "graph M0" in out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "e1.json"
    code, out, _ = run(capsys, "e1", "--p", "3", "--q", "4", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(path.read_text()), SCHEMAS["e1"])


def test_feasibility_guard(capsys):
    code, _, err = run(capsys, "d1", "--p", "9")
    assert code == 2 and "--force" in err
    code, _, err = run(capsys, "trees", "--degree", "8")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["d1"],
        ["e2", "--p", "-1"],
        ["dsep", "--p", "3"],
        ["export-dot"],
        ["export-dot", "--term", "[x13,x23"],
        ["verify", "--format", "dot"],
        ["d1", "--p", "2", "--format", "dot"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["e1", "--p", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2


def test_bad_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("KNOTSPEC_JOBS", "many")
    assert run(capsys, "d1", "--p", "4")[0] == 2


def test_verify_paper_fixed_points_reports_the_sign(capsys):
    # the literal d1(y1) = x12 check fails (the sign is -x12), so the suite exits 1
    code, out, _ = run(capsys, "verify", "--suite", "paper-fixed-points")
    assert code == 1
    assert "FAIL criterion 1a" in out
    assert out.count("PASS") == 5
    code, data = run_json(capsys, "verify", "--suite", "paper-fixed-points")
    assert code == 1 and data["passed"] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "knotspec", "e1", "--p", "3", "--q", "3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "free rank: 1" in proc.stdout
