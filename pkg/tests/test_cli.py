import json
import subprocess
import sys

import pytest

from cambrian.cli import BAD_INPUT, VERIFY_FAILED, build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_group_report(capsys):
    code, out, _ = run(capsys, "group", "--type", "B2")
    assert code == 0 and "order: 8" in out
    code, out, _ = run(capsys, "group", "--type", "I2(5)")
    assert "order: 10" in out
    code, out, _ = run(capsys, "group", "--type", "A3", "--export", "json")
    data = json.loads(out)
    assert data["order"] == 24 and data["longest_element_length"] == 6


def test_group_dot(capsys):
    code, out, _ = run(capsys, "group", "--type", "A3", "--export", "dot")
    assert code == 0
    assert out.startswith("digraph")
    assert out.count("[label=") == 24
    assert out.count("->") == 36


def test_group_from_matrix_file(capsys, tmp_path):
    path = tmp_path / "h3.txt"
    path.write_text("1 5 2\n5 1 3\n2 3 1\n")
    code, out, _ = run(capsys, "group", "--matrix", str(path))
    assert code == 0 and "order: 120" in out
    path.write_text("[[1, 3], [3, 1]]")
    code, out, _ = run(capsys, "group", "--matrix", str(path))
    assert "order: 6" in out


def test_bad_input_exit_codes(capsys, tmp_path):
    assert run(capsys, "group", "--type", "Z9")[0] == BAD_INPUT
    assert run(capsys, "group")[0] == BAD_INPUT
    path = tmp_path / "affine.txt"
    path.write_text("1 3 3\n3 1 3\n3 3 1\n")
    code, _, err = run(capsys, "group", "--matrix", str(path))
    assert code == BAD_INPUT and "infinite" in err
    assert run(capsys, "cambrian", "--type", "A3", "--c", "s1s1s2")[0] == BAD_INPUT
    assert run(capsys, "cambrian", "--type", "A3")[0] == BAD_INPUT
    assert run(capsys, "fan", "--type", "B2", "--export", "svg")[0] == BAD_INPUT
    assert run(capsys, "tamari", "--n", "3", "--barring", "dd")[0] == BAD_INPUT
    assert run(capsys, "sortable", "--type", "A2", "--c", "s1s2", "--element", "s5")[0] == BAD_INPUT


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CAMBRIAN_MAX_ORDER", "10")
    assert run(capsys, "cambrian", "--type", "A3", "--c", "s1s2s3")[0] == BAD_INPUT


def test_cambrian(capsys):
    code, out, _ = run(capsys, "cambrian", "--type", "B2", "--c", "s1s2")
    assert code == 0 and "elements: 6" in out
    code, out, _ = run(capsys, "cambrian", "--type", "A3", "--c", "s1s2s3", "--verify")
    assert code == 0 and "elements: 14" in out and "FAIL" not in out
    code, out, _ = run(capsys, "cambrian", "--type", "H3", "--c", "s1s2s3")
    assert "elements: 32" in out
    code, out, _ = run(capsys, "cambrian", "--type", "A3", "--c", "1>2,3>2", "--export", "json")
    assert len(json.loads(out)["elements"]) == 14


def test_congruence_from_permutations(capsys):
    code, out, _ = run(capsys, "congruence", "--type", "A3", "--edges", "1324<3124,1243<1423")
    assert code == 0 and out.startswith("classes: 14")
    code, out, _ = run(capsys, "congruence", "--type", "A3", "--c", "s1s2s3", "--export", "json")
    assert len(json.loads(out)["classes"]) == 14
    code, out, _ = run(capsys, "congruence", "--type", "A2", "--edges", "e<s1", "--export", "dot")
    assert "style=dashed" in out


def test_congruence_rejects_non_cover(capsys):
    assert run(capsys, "congruence", "--type", "A3", "--edges", "e<s1s2")[0] == BAD_INPUT


def test_sortable(capsys):
    code, out, _ = run(capsys, "sortable", "--type", "B2", "--c", "s1s2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "6 s1s2-sortable elements"
    assert "s1s2|s1s2" in lines
    code, out, _ = run(capsys, "sortable", "--type", "B2", "--c", "s1s2", "--element", "s2s1")
    assert "sortable: False" in out and "s2|s1" in out
    code, out, _ = run(capsys, "sortable", "--type", "B2", "--c", "s1s2", "--element", "s2",
                       "--export", "json")
    data = json.loads(out)
    assert data["c_vectors"] == {"s1": [1.0, 0.0], "s2": [0.0, -1.0]}
    code, out, _ = run(capsys, "sortable", "--type", "A3", "--c", "s1s2s3", "--export", "dot")
    assert out.count("->") == 13


def test_fan(capsys, tmp_path):
    target = tmp_path / "fan.svg"
    code, _, _ = run(capsys, "fan", "--type", "A3", "--c", "s1s2s3", "--out", str(target))
    assert code == 0
    assert target.read_text().count('class="cell"') == 14
    code, out, _ = run(capsys, "fan", "--type", "B2", "--c", "s1s2", "--export", "json")
    assert len(json.loads(out)["cones"]) == 6
    code, out, _ = run(capsys, "fan", "--type", "A3", "--export", "svg")
    assert out.count('class="cell"') == 24


def test_tamari(capsys):
    code, out, _ = run(capsys, "tamari", "--n", "3", "--barring", "ddud", "--export", "dot")
    assert code == 0 and out.count("[label=") == 14 and out.count("->") == 21
    code, out, _ = run(capsys, "tamari", "--n", "3", "--barring", "ddud", "--verify")
    assert code == 0 and "coxeter element: s1s3s2" in out and "FAIL" not in out
    code, out, _ = run(capsys, "tamari", "--n", "6", "--perm", "3246175", "--export", "json")
    assert json.loads(out)["eta"]["diagonals"] == [[0, 5], [1, 4], [1, 5], [2, 4], [5, 7], [5, 8]]
    code, out, _ = run(capsys, "tamari", "--n", "3", "--perm", "2413", "--export", "svg")
    assert out.count('class="diagonal"') == 3


def test_verify_single_type(capsys):
    code, out, _ = run(capsys, "verify", "--type", "B2", "--samples", "200")
    assert code == 0
    assert out.splitlines()[-1].endswith("checks passed")
    assert "FAIL" not in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    import cambrian.verify as verify

    def broken(*args, **kwargs):
        return [verify.Check("always fails", False, "witness 42")]

    monkeypatch.setattr("cambrian.cli.run_suite", broken)
    code, out, err = run(capsys, "verify", "--all")
    assert code == VERIFY_FAILED
    assert "witness 42" in err


def test_help_lists_every_command():
    text = build_parser().format_help()
    for cmd in ("group", "congruence", "cambrian", "sortable", "fan", "tamari", "verify"):
        assert cmd in text


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "cambrian.cli", "group", "--type", "A3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "order: 24" in proc.stdout


@pytest.mark.parametrize("cmd", ["group", "cambrian", "fan", "tamari", "verify"])
def test_subcommand_help(cmd, capsys):
    with pytest.raises(SystemExit) as info:
        main([cmd, "--help"])
    assert info.value.code == 0
