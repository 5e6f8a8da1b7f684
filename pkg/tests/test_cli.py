"""CLI behaviour: the exit-code table and output determinism are part of
the contract."""

import json

import pytest

from pzlkit.cli import main

SLITHER = "corpus/slitherlink.rule"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_ok(capsys):
    code, out, _ = run(capsys, "check", SLITHER)
    assert code == 0
    assert "ok" in out


def test_check_reports_warnings(capsys):
    code, out, _ = run(capsys, "check", "corpus/hitori.rule")
    assert code == 0
    assert "unmaskable-family" in out


def test_check_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.rule"
    bad.write_text('puzzle "x"\ndomain C = {}\n')
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "empty-domain" in err


def test_check_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "check", "no/such/file.rule")
    assert code == 2


def test_count_slitherlink(capsys):
    code, out, _ = run(capsys, "count", SLITHER, "--size", "2x2", "--engine", "exhaustive")
    assert code == 0
    assert out.splitlines()[0] == "13"


def test_count_requirement_violation_exit_3(capsys):
    code, _, err = run(capsys, "count", "corpus/sudoku.rule", "--size", "3x3")
    assert code == 3


def test_gen_writes_files_and_is_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a"
    code, stdout1, _ = run(
        capsys, "gen", SLITHER, "--size", "3x3", "--seed", "5", "--limit", "2",
        "--out", str(out1),
    )
    assert code == 0
    out2 = tmp_path / "b"
    code, stdout2, _ = run(
        capsys, "gen", SLITHER, "--size", "3x3", "--seed", "5", "--limit", "2",
        "--out", str(out2),
    )
    assert code == 0
    a = (out1 / "board-0000.json").read_bytes()
    b = (out2 / "board-0000.json").read_bytes()
    assert a == b
    doc = json.loads(a)
    assert doc["rule"] == "slitherlink"
    assert doc["m"] == 3 and doc["n"] == 3


def test_gen_infeasible_exit_3(tmp_path, capsys):
    bad = tmp_path / "never.rule"
    bad.write_text('puzzle "never"\nconstraint 1 == 2\n')
    code, _, err = run(capsys, "gen", str(bad), "--size", "2x2", "--limit", "1")
    assert code == 3


def test_problem_and_render(tmp_path, capsys):
    out = tmp_path / "p.json"
    code, _, _ = run(
        capsys, "problem", SLITHER, "--size", "2x2", "--seed", "2",
        "--engine", "exhaustive", "--out", str(out),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert "presented" in doc and doc["certificate"]["count"] == 1
    code, rendered, _ = run(capsys, "render", str(out))
    assert code == 0
    assert "+" in rendered


def test_problem_sukoro_not_unique_exit_1(capsys):
    code, _, err = run(
        capsys, "problem", "corpus/sukoro.rule", "--size", "2x2",
        "--engine", "exhaustive",
    )
    assert code == 1


def test_corpus_verify_positional(capsys):
    code, out, _ = run(
        capsys, "corpus-verify", "sudoku", "--size", "4x4", "--count", "5",
        "--seed", "7",
    )
    assert code == 0
    assert out.count("board") == 5
    assert "5/5 oracle passes" in out


def test_corpus_verify_unknown_entry_exit_2(capsys):
    code, _, err = run(capsys, "corpus-verify", "nosuch")
    assert code == 2


def test_corpus_verify_default_dims(capsys):
    code, out, _ = run(capsys, "corpus-verify", "shikaku", "--count", "2")
    assert code == 0
    assert "2/2 oracle passes" in out


def test_stdout_byte_identical_across_runs(capsys):
    args = ("count", SLITHER, "--size", "2x2")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_render_unknown_rule_needs_flag(tmp_path, capsys):
    doc = {"rule": "mystery", "m": 1, "n": 1, "families": {}, "assignment": {}}
    path = tmp_path / "b.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "render", str(path))
    assert code == 2
    assert "--rule" in err
