"""Command line behaviour: outputs, exit codes, text/json parity."""

import json

import pytest

from annote_kb.cli import main

IMPLICIT_LINE = 'annotation(n_imp, _, ["pertinent"], doc_A).\n'
TWO_HOLE_LINES = (
    'annotation(n_cap, _, ["pertinent"], doc_A).\n'
    'annotation(n_cap, "souligner", [], doc_A).\n'
)
FIND_TERMS = ["désinformation", "protection du patrimoine", "pertinent"]


@pytest.fixture()
def kb_path(tmp_path, desk_text):
    path = tmp_path / "kb.facts"
    path.write_text(desk_text, encoding="utf-8")
    return str(path)


@pytest.fixture()
def kb_with_implicit(tmp_path, desk_text):
    path = tmp_path / "kb_imp.facts"
    path.write_text(desk_text + IMPLICIT_LINE + TWO_HOLE_LINES, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- classify


def test_classify_text(kb_path, capsys):
    code, out, _ = run(capsys, "classify", "--kb", kb_path)
    assert code == 0
    lines = out.splitlines()
    assert "note_211\texplicit" in lines
    assert lines[-1] == "7 objects: 7 explicit, 0 implicit"


def test_classify_reports_implicit(kb_with_implicit, capsys):
    code, out, _ = run(capsys, "classify", "--kb", kb_with_implicit)
    assert code == 0
    lines = out.splitlines()
    assert "n_imp\timplicit" in lines
    assert lines[-1] == "9 objects: 7 explicit, 2 implicit"


def test_classify_json(kb_path, capsys):
    code, out, _ = run(capsys, "classify", "--kb", kb_path, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "classify"
    assert payload["explicit"] == 7 and payload["implicit"] == 0
    assert {"id": "note_211", "state": "explicit"} in payload["objects"]


# ---------------------------------------------------------------- explicate


def test_explicate_text(kb_with_implicit, capsys):
    code, out, _ = run(capsys, "explicate", "--kb", kb_with_implicit, "n_imp")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "2 candidates for n_imp"
    assert lines[1] == '1. (ordonner, ["pertinent"]) [support: note_56007]'
    assert lines[2] == '2. (souligner, ["pertinent"]) [support: note_211]'


def test_explicate_json(kb_with_implicit, capsys):
    code, out, _ = run(
        capsys, "explicate", "--kb", kb_with_implicit, "n_imp", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["already_explicit"] is False
    first = payload["candidates"][0]
    assert first["pairs"] == [
        {"attribute": "ordonner", "values": [{"term": "pertinent", "rank": None}]}
    ]
    assert first["support"] == [["note_56007"]]


def test_explicate_already_explicit(kb_path, capsys):
    code, out, _ = run(capsys, "explicate", "--kb", kb_path, "note_211")
    assert code == 0
    assert out.splitlines() == ["note_211 is already explicit"]


def test_explicate_unknown_id(kb_path, capsys):
    code, _, err = run(capsys, "explicate", "--kb", kb_path, "nope")
    assert code == 1
    assert "unknown object id: nope" in err


def test_explicate_no_candidates(tmp_path, desk_text, capsys):
    path = tmp_path / "kb.facts"
    path.write_text(desk_text + 'annotation(n_bad, _, ["zzz"], doc_A).\n')
    code, _, err = run(capsys, "explicate", "--kb", str(path), "n_bad")
    assert code == 4
    assert "no candidates for pair 0 of n_bad" in err


def test_explicate_cap_truncates(kb_with_implicit, capsys):
    code, out, _ = run(capsys, "explicate", "--kb", kb_with_implicit, "n_cap")
    assert code == 0
    assert out.splitlines()[0] == "4 candidates for n_cap"
    code, out, _ = run(
        capsys, "explicate", "--kb", kb_with_implicit, "n_cap", "--cap", "3"
    )
    assert code == 0
    assert out.splitlines()[0] == "3 candidates for n_cap"


def test_cap_must_be_positive(kb_path, capsys):
    code, _, err = run(capsys, "explicate", "--kb", kb_path, "n_imp", "--cap", "0")
    assert code == 1
    assert "--cap must be at least 1" in err


# ---------------------------------------------------------------- query


CLASSIC = '("auteur", ["Alain Juillet"]) ET ("mots-clés", ["désinformation"])'


def test_query_text(kb_path, capsys):
    code, out, _ = run(capsys, "query", "--kb", kb_path, CLASSIC)
    assert code == 0
    assert out.splitlines() == [
        'query: ("auteur", ["alain juillet"]) ET ("mots-clés", ["désinformation"])',
        "3 results",
        "note_008",
        "note_211",
        "note_702",
    ]


def test_query_json_matches_text(kb_path, capsys):
    code, out, _ = run(capsys, "query", "--kb", kb_path, CLASSIC, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["results"] == ["note_008", "note_211", "note_702"]


def test_query_syntax_error_points_at_offset(kb_path, capsys):
    code, _, err = run(capsys, "query", "--kb", kb_path, '("a", [])')
    assert code == 1
    assert "syntax error: expected a quoted term" in err
    assert "\n  " + " " * 7 + "^" in err


def test_query_rejects_constrained_criterion(kb_path, capsys):
    code, _, err = run(capsys, "query", "--kb", kb_path, '(["pertinent"])')
    assert code == 1
    assert "rewrite" in err


# ---------------------------------------------------------------- find


def test_find_text(kb_path, capsys):
    code, out, _ = run(capsys, "find", "--kb", kb_path, *FIND_TERMS)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == (
        'rewrite: ("mots-clés", ["désinformation"])'
        ' ET ("mots-clés", ["protection du patrimoine"])'
        ' ET (("ordonner", ["pertinent"]) OU ("souligner", ["pertinent"]))'
    )
    assert lines[1] == "1 results"
    assert lines[2] == "note_211"


def test_find_json(kb_path, capsys):
    code, out, _ = run(
        capsys, "find", "--kb", kb_path, *FIND_TERMS, "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["results"] == ["note_211"]
    assert payload["unresolved"] == []


def test_find_stored_form(kb_path, capsys):
    code, out, _ = run(
        capsys, "find", "--kb", kb_path, *FIND_TERMS, "--show-paper-form"
    )
    assert code == 0
    stored = next(l for l in out.splitlines() if l.startswith("stored form: "))
    assert '("ordonner", [("pauvre", 0), ("faible", 1)' in stored
    assert '"protection du patrimoine"]' in stored


def test_find_strict_unresolved(kb_path, capsys):
    code, out, _ = run(capsys, "find", "--kb", kb_path, "désinformation", "zzz")
    assert code == 3
    lines = out.splitlines()
    assert "unresolved: zzz" in lines
    assert "0 results" in lines


def test_find_lenient_unresolved(kb_path, capsys):
    code, out, err = run(
        capsys, "find", "--kb", kb_path, "--lenient", "désinformation", "zzz"
    )
    assert code == 0
    assert "dropping unresolved terms: zzz" in err
    assert out.splitlines()[-3:] == ["note_008", "note_211", "note_702"]


def test_find_nothing_resolves(kb_path, capsys):
    code, _, err = run(capsys, "find", "--kb", kb_path, "zzz", "yyy")
    assert code == 3
    assert "unresolved: zzz, yyy" in err


# ---------------------------------------------------------------- chain


def test_chain(kb_path, capsys):
    code, out, _ = run(capsys, "chain", "--kb", kb_path, "rev_001")
    assert code == 0
    assert out.splitlines() == ["rev_001", "note_91007", "doc_A"]


def test_chain_unknown_id(kb_path, capsys):
    code, _, err = run(capsys, "chain", "--kb", kb_path, "nope")
    assert code == 1
    assert "nope" in err


# ---------------------------------------------------------------- export, stats


def test_export_text_is_canonical(kb_path, desk_canonical, capsys):
    code, out, _ = run(capsys, "export", "--kb", kb_path)
    assert code == 0
    assert out == desk_canonical


def test_export_json_wraps_facts(kb_path, desk_canonical, capsys):
    code, out, _ = run(capsys, "export", "--kb", kb_path, "--format", "json")
    assert code == 0
    assert json.loads(out)["facts"] == desk_canonical


def test_stats(kb_path, capsys):
    code, out, _ = run(capsys, "stats", "--kb", kb_path, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["objects"] == 7
    assert payload["explicit"] == 7 and payload["implicit"] == 0
    assert payload["documents"] == {"primary": 5, "secondary": 1, "tertiary": 7}
    assert payload["annotators"] == 2
    assert payload["attributes"] == 5
    assert payload["terms"] == 16
    code, out, _ = run(capsys, "stats", "--kb", kb_path)
    assert "objects: 7 (7 explicit, 0 implicit)" in out.splitlines()


# ---------------------------------------------------------------- ingest


def test_ingest_creates_canonical_kb(tmp_path, desk_text, desk_canonical, capsys):
    source = tmp_path / "input.facts"
    source.write_text(desk_text, encoding="utf-8")
    target = tmp_path / "fresh.facts"
    code, out, _ = run(capsys, "ingest", "--kb", str(target), str(source))
    assert code == 0
    assert out.splitlines()[0] == "7 objects loaded, 0 rejected"
    assert target.read_text(encoding="utf-8") == desk_canonical


def test_ingest_merges_and_reports_duplicates(tmp_path, desk_text, capsys):
    source = tmp_path / "input.facts"
    source.write_text(desk_text, encoding="utf-8")
    target = tmp_path / "kb.facts"
    target.write_text(desk_text, encoding="utf-8")
    code, out, _ = run(capsys, "ingest", "--kb", str(target), str(source))
    assert code == 2
    lines = out.splitlines()
    # 7 duplicate objects plus 2 re-declared annotators
    assert lines[0] == "0 objects loaded, 9 rejected"
    assert sum("already present" in line for line in lines[1:]) == 7
    assert sum("already declared" in line for line in lines[1:]) == 2


def test_ingest_partial(tmp_path, desk_text, capsys):
    source = tmp_path / "input.facts"
    source.write_text(desk_text + "annotation(broken.\n", encoding="utf-8")
    target = tmp_path / "kb.facts"
    code, out, _ = run(capsys, "ingest", "--kb", str(target), str(source))
    assert code == 2
    assert out.splitlines()[0] == "7 objects loaded, 1 rejected"
    assert target.exists()


def test_ingest_missing_input(tmp_path, capsys):
    code, _, err = run(capsys, "ingest", "--kb", str(tmp_path / "kb"), "nope.facts")
    assert code == 1
    assert "cannot read input" in err


# ---------------------------------------------------------------- plumbing


def test_missing_kb_flag_is_usage_error(capsys):
    assert main(["classify"]) == 1
    capsys.readouterr()


def test_unknown_command_is_usage_error(capsys):
    assert main(["frobnicate", "--kb", "x"]) == 1
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_missing_kb_file(tmp_path, capsys):
    code, _, err = run(capsys, "classify", "--kb", str(tmp_path / "absent.facts"))
    assert code == 1
    assert "cannot read kb" in err


def test_kb_diagnostics_become_warnings(tmp_path, desk_text, capsys):
    path = tmp_path / "kb.facts"
    path.write_text(desk_text + "mystery(x).\n", encoding="utf-8")
    code, _, err = run(capsys, "classify", "--kb", str(path))
    assert code == 0
    assert "warning" in err and "unknown clause" in err
