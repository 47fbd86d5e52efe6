import json
import subprocess
import sys

import pytest

from reltrace.cli import main, run
from reltrace.io import InvariantReport

from gen import FIXTURES, fixture_path

ROTATED_TRIANGLE = {
    "name": "rotation",
    "tier": "simplicial",
    "simplicial": {
        "vertices": ["p", "q", "r"],
        "simplices": [["p"], ["q"], ["r"], ["p", "q"], ["q", "r"], ["p", "r"]],
        "vertex_map": {"p": "q", "q": "r", "r": "p"},
    },
    "assertions": {"B_closed_smooth_manifold": True},
}

NON_UNIQUE = {
    "name": "zero boundary 3-cell",
    "tier": "cw",
    "cw": {
        "generators": [{"name": "a"}, {"name": "b"}],
        "cells": {"2": [{"name": "T", "relator": [["a", 1], ["b", 1], ["a", -1], ["b", -1]]}],
                  "3": [{"name": "E", "boundary": {"T": [[0, []]]}}]},
        "map": {"phi": {"a": [["a", 1]], "b": [["b", 1]]},
                "cell_images": {"T": "derive", "E": "derive"}},
    },
}


def write(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_all_on_torus(capsys):
    code, out, _ = cli(capsys, "all", fixture_path("ex52_torus.json"), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["shadows"]["B0"]["representatives"] == ["1", "a", "a^2", "b", "ab", "a^2b"]
    assert data["nielsen"]["relative"] == 6
    assert all(c["passed"] for c in data["consistency"])


def test_check_reports_face_closure(tmp_path, capsys):
    doc = {"tier": "simplicial",
           "simplicial": {"vertices": ["u", "v"], "simplices": [["u"], ["u", "v"]]}}
    code, _, err = cli(capsys, "check", write(tmp_path, doc))
    assert code == 1
    assert "[complexes] error: face-closure violated" in err


def test_lefschetz_of_identity_on_circle_with_arc(capsys):
    code, out, _ = cli(capsys, "lefschetz", fixture_path("circle_arc_identity.json"),
                       "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert (data["lefschetz"]["A"], data["lefschetz"]["B"]) == ({"A0": 1}, {"B0": -1})


def test_deformable_exit_codes(tmp_path, capsys):
    code, out, _ = cli(capsys, "deformable", fixture_path("circle_deg3.json"), "--format", "json")
    assert code == 0 and json.loads(out)["verdict"]["conclusion"] == "not-deformable"
    code, out, _ = cli(capsys, "deformable", write(tmp_path, ROTATED_TRIANGLE), "--format", "json")
    data = json.loads(out)
    assert code == 3
    assert data["verdict"]["conclusion"] == "trace-zero-but-hypotheses-unverified"
    assert data["reidemeister"]["zero"] is True


def test_non_unique_top_cell_is_a_failure(tmp_path, capsys):
    code, out, err = cli(capsys, "reidemeister", write(tmp_path, NON_UNIQUE), "--format", "json")
    assert code == 2
    assert json.loads(out)["failure"]["kind"] == "non-unique"
    assert err.startswith("[covers] error: non-unique")


def test_invalid_documents(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli(capsys, "check", str(bad))[0] == 1
    assert cli(capsys, "check", fixture_path("ex52_torus.json"), "--tier", "simplicial")[0] == 1
    assert cli(capsys, "check", str(tmp_path / "missing.json"))[0] == 1


@pytest.mark.parametrize("name", FIXTURES)
def test_output_is_deterministic(name):
    first = run("all", fixture_path(name))[1].to_json()
    second = run("all", fixture_path(name))[1].to_json()
    assert first == second


def _leaves(value, path=()):
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value):
        for i, v in enumerate(value):
            yield from _leaves(v, path + (i,))
    else:
        yield path, value


@pytest.mark.parametrize("name", FIXTURES)
def test_text_and_json_carry_the_same_data(name, capsys):
    _, js, _ = cli(capsys, "all", fixture_path(name), "--format", "json")
    _, text, _ = cli(capsys, "all", fixture_path(name), "--format", "text")
    data = json.loads(js)
    assert InvariantReport(data).to_text() == text
    lines = text.splitlines()
    for path, value in _leaves(data):
        key = path[-1]
        if isinstance(key, str):
            rendered = InvariantReport({key: value}).to_text().strip()
            assert any(line.strip() == rendered for line in lines), rendered


def test_report_round_trips():
    report = run("all", fixture_path("ex51_solidtorus.json"))[1]
    again = InvariantReport.from_json(report.to_json())
    assert again.data == report.data and again.to_json() == report.to_json()


def test_timings_are_opt_in():
    assert "timings_seconds" not in run("all", fixture_path("circle_deg3.json"))[1].data
    data = run("all", fixture_path("circle_deg3.json"), timings=True)[1].data
    assert data["timings_seconds"]["total"] >= 0


def test_explicit_tree(capsys):
    path = fixture_path("circle_arc_identity.json")
    code, out, _ = cli(capsys, "all", path, "--tree", "x-y,x-z", "--format", "json")
    other = json.loads(cli(capsys, "all", path, "--tree", "x-y,y-z", "--format", "json")[1])
    data = json.loads(out)
    assert code == 0
    assert data["lefschetz"] == other["lefschetz"]
    assert data["nielsen"] == other["nielsen"]
    assert cli(capsys, "all", path, "--tree", "x-q")[0] == 1


def test_bounded_conjugacy_is_labeled_experimental():
    data = run("all", fixture_path("circle_arc_identity.json"), bounded=2)[1].data
    assert data["experimental_bounded_conjugacy"]["authoritative"] is False


def test_no_crosscheck_flag():
    data = run("lefschetz", fixture_path("ex52_torus.json"), crosscheck=False)[1].data
    assert data["lefschetz"]["homology_crosscheck"] is False
    assert data["lefschetz"]["B"] == {"B0": 9}


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "reltrace.cli", "nielsen",
                          fixture_path("ex51_solidtorus.json"), "--format", "json"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["nielsen"]["relative"] == 4
