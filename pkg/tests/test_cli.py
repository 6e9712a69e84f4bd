import json
import subprocess
import sys

import pytest

from conftest import CORPUS
from tpc.cli import CliConfig, main

GOLDEN = CORPUS / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_ok(capsys):
    assert run(capsys, "check", str(CORPUS / "tiny.tpc")) == (0, "", "")


def test_check_reports_renaming_condition(capsys):
    code, out, err = run(capsys, "check", str(CORPUS / "addsemigroup_clash.tpc"))
    assert code == 1 and out == ""
    assert err.startswith(f"{CORPUS / 'addsemigroup_clash.tpc'}:6:17: error[RenamingConditionViolated]")
    assert "(renaming condition)" in err


def test_check_reports_parse_errors_with_location(capsys, tmp_path):
    f = tmp_path / "bad.tpc"
    f.write_text("A := Theory { U : type }\nB := extend A by { e : }\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 1 and f"{f}:2:24: error[ParseError] (grammar)" in err


def test_flatten_monoid_matches_golden(capsys):
    code, out, _ = run(capsys, "flatten", str(CORPUS / "tiny.tpc"), "--target", "Monoid")
    assert code == 0 and out == (GOLDEN / "monoid.txt").read_text()


def test_flatten_empty_and_view(capsys):
    assert run(capsys, "flatten", str(CORPUS / "tiny.tpc"), "--target", "Empty") == (0, "", "")
    code, _, err = run(capsys, "flatten", str(CORPUS / "section6.tpc"), "--target", "Flip")
    assert code == 1 and "error[SpecificationError]" in err
    code, _, err = run(capsys, "flatten", str(CORPUS / "section6.tpc"), "--target", "Nope")
    assert code == 1 and "error[UnknownDefinition]" in err


def test_graph_dot_for_section6(capsys):
    code, out, _ = run(capsys, "graph", str(CORPUS / "section6.tpc"), "--format", "dot")
    assert code == 0 and out.startswith("digraph theories {")
    assert '"Carrier" -> "Magma" [style=solid' in out
    assert '"Magma" -> "Magma" [style=dashed' in out


def test_graph_of_empty_module(capsys, tmp_path):
    f = tmp_path / "empty.tpc"
    f.write_text("-- nothing here\n")
    code, out, _ = run(capsys, "graph", str(f))
    assert code == 0 and out == "digraph theories {\n  node [shape=box];\n}\n"


def read_adjacency(path):
    lines = path.read_text().splitlines()
    return {tuple(line.split()) for line in lines if line and not line.startswith("#")}


def test_graph_text_matches_the_golden_adjacency(capsys):
    code, out, _ = run(capsys, "graph", str(CORPUS / "tiny.tpc"), "--format", "text")
    assert code == 0
    edges = {tuple(line.split()[1:5:]) for line in out.splitlines() if line.startswith("edge ")}
    got = {(s, t, k) for s, arrow, t, k in edges}
    assert got == read_adjacency(GOLDEN / "tiny_adjacency.txt")


def test_dump_is_deterministic_and_records_embeddings(capsys, tmp_path):
    f = str(CORPUS / "tiny.tpc")
    _, a, _ = run(capsys, "dump", f)
    _, b, _ = run(capsys, "dump", f)
    assert a == b
    data = json.loads(a)
    monoid = next(d for d in data["definitions"] if d["name"] == "Monoid")
    assert monoid["type"] == {"tag": "Emb", "source": "Magma", "target": "Monoid"}
    assert monoid["embedding"]["assignment"] == {"*": "`*`", "U": "U"}


def test_dump_of_one_definition(capsys, tmp_path):
    f = tmp_path / "one.tpc"
    f.write_text("C := Theory { U : type }\n")
    _, out, _ = run(capsys, "dump", str(f))
    assert len(json.loads(out)["definitions"]) == 1


def test_output_file(capsys, tmp_path):
    out = tmp_path / "m.txt"
    code, stdout, _ = run(capsys, "flatten", str(CORPUS / "tiny.tpc"), "--target", "Monoid", "-o", str(out))
    assert code == 0 and stdout == "" and out.read_text() == (GOLDEN / "monoid.txt").read_text()


def test_collation_is_fixed(capsys, monkeypatch):
    monkeypatch.setenv("TPC_COLLATION", "locale")
    code, _, err = run(capsys, "check", str(CORPUS / "tiny.tpc"))
    assert code == 1 and "TPC_COLLATION" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "none.tpc"))
    assert code == 1 and "cannot read input" in err


def test_internal_errors_exit_2(capsys, monkeypatch):
    import tpc.cli as cli

    def boom(text):
        raise AssertionError("invariant")

    monkeypatch.setattr(cli, "cmd_check", boom)
    code, _, err = run(capsys, "check", str(CORPUS / "tiny.tpc"))
    assert code == 2 and "internal error" in err


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig("flatten", "x.tpc")
    with pytest.raises(ValueError):
        CliConfig("graph", "x.tpc", format="svg")


def test_console_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "tpc.cli", "flatten", str(CORPUS / "addsemigroup.tpc"), "--target", "AddSemigroup"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and r.stdout == (GOLDEN / "addsemigroup.txt").read_text()
