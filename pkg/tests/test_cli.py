import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gigdigraph.cli import main, parse_labeling_text, read_rational
from gigdigraph.errors import InputError

from conftest import FIG1_ROWS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def fig1_file(tmp_path):
    p = tmp_path / "fig1.csv"
    p.write_text("\n".join(",".join(map(str, r)) for r in FIG1_ROWS) + "\n")
    return p


def test_build_dot_marks_sinks(capsys, fig1_file):
    code, out, _ = run(capsys, "build", "--labels", str(fig1_file), "--format", "dot")
    assert code == 0
    assert out.startswith("digraph GIG {")
    sink_lines = [l for l in out.splitlines() if "sink=true" in l]
    assert sorted(l.split('"')[1] for l in sink_lines) == ["1,2", "3,1", "3,3"]
    assert all("doublecircle" in l for l in sink_lines)
    assert out.count("->") == 6
    assert '"2,1" -> "2,2";' in out


def test_build_json_round_trip(capsys, fig1_file, tmp_path):
    doc = run_json(capsys, "build", "--labels", str(fig1_file))
    assert doc["labels"] == FIG1_ROWS
    assert doc["sinks"] == [[1, 2], [3, 1], [3, 3]]
    assert sorted(c["size"] for c in doc["components"]) == [1, 3, 5]
    again = tmp_path / "again.json"
    again.write_text(json.dumps(doc))
    assert run_json(capsys, "build", "--labels", str(again)) == doc


def test_labeling_text_variants():
    crlf = "﻿2,9,5\r\n4,7,3\r\n6,1,8\r\n"
    assert parse_labeling_text(crlf.lstrip("﻿")).rows() == FIG1_ROWS
    with pytest.raises(InputError, match="line 2, column 3"):
        parse_labeling_text("1,2,3\n4,5,x\n")
    with pytest.raises(InputError, match="line 2"):
        parse_labeling_text("1,2\n3\n")
    with pytest.raises(InputError, match="empty"):
        parse_labeling_text("\n\n")


def test_build_bom_file(capsys, tmp_path):
    p = tmp_path / "bom.csv"
    p.write_bytes("﻿2,9,5\r\n4,7,3\r\n6,1,8\r\n".encode("utf-8"))
    assert run_json(capsys, "build", "--labels", str(p))["labels"] == FIG1_ROWS


@pytest.mark.parametrize("content, needle", [
    ("1,2\n2,3\n", "duplicates"),
    ("1,2\n3,9\n", "outside"),
    ("1,2\n3,a\n", "column 2"),
])
def test_build_bad_labeling(capsys, tmp_path, content, needle):
    p = tmp_path / "bad.csv"
    p.write_text(content)
    code, out, err = run(capsys, "build", "--labels", str(p))
    assert code == 2 and out == "" and needle in err


def test_build_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "build", "--labels", str(tmp_path / "nope.csv"))
    assert code == 2 and "cannot read" in err


def test_path_prob(capsys):
    doc = run_json(capsys, "path-prob", "--dims", "3x3", "--path", "2,1 2,2 1,2")
    assert doc == {"num": "1", "den": "28"}
    doc = run_json(capsys, "path-prob", "--dims", "5x5",
                   "--path", "4,1 4,2 4,3 4,4 3,4 2,4 1,4")
    assert read_rational(doc) == Fraction(1, 982800)


def test_path_prob_errors(capsys):
    assert run(capsys, "path-prob", "--dims", "3x3", "--path", "1,1 2,2")[0] == 2
    assert run(capsys, "path-prob", "--dims", "3x3", "--path", "3,3 3,4")[0] == 2
    assert run(capsys, "path-prob", "--dims", "3by3", "--path", "1,1")[0] == 2


def test_sinks_vertices(capsys):
    doc = run_json(capsys, "sinks", "--dims", "3x4", "--vertices", "2,2 3,3")
    assert read_rational(doc["probability"]) == Fraction(9, 140)
    assert "warning" not in doc
    doc = run_json(capsys, "sinks", "--dims", "3x3", "--vertices", "1,1 1,2")
    assert read_rational(doc["probability"]) == 0
    assert "neighbours" in doc["warning"]


def test_sinks_moments(capsys):
    doc = run_json(capsys, "sinks", "--dims", "6x6", "--moments")
    assert read_rational(doc["expected"]) == Fraction(128, 15)
    assert read_rational(doc["variance_closed"]) == Fraction(3454, 1575)
    assert doc["variance_closed"] == doc["variance_by_pairs"]
    doc = run_json(capsys, "sinks", "--dims", "3x3", "--moments")
    assert read_rational(doc["expected"]) == Fraction(38, 15)
    assert "domain" in doc["variance_closed"]
    code, out, err = run(capsys, "sinks", "--dims", "2x5", "--moments")
    assert code == 3 and "m >= 3" in err


def test_bounds(capsys):
    doc = run_json(capsys, "bounds", "--dims", "1x1")
    assert read_rational(doc["component_size_bound"]) == Fraction(4, 3)
    doc = run_json(capsys, "bounds", "--dims", "5x5", "--connect", "4,1 1,4", "--series-eps", "1e-6")
    conn = doc["connectivity"]
    assert conn["path_count"] == 20 and conn["shortest_length"] == 6
    assert read_rational(conn["count_times_min"]) <= read_rational(conn["sum_over_paths"])
    series = doc["series"]
    assert read_rational(series["tail_bound"]) <= Fraction(1, 10**6)
    assert read_rational(series["certified_upper"]) == (
        read_rational(series["truncated_value"]) + read_rational(series["tail_bound"]))


def test_bounds_errors(capsys):
    assert run(capsys, "bounds", "--dims", "3x3", "--series-eps", "0")[0] == 2
    assert run(capsys, "bounds", "--dims", "3x3", "--series-eps", "tiny")[0] == 2
    assert run(capsys, "bounds", "--dims", "3x3", "--connect", "1,1")[0] == 2
    code, _, err = run(capsys, "bounds", "--dims", "9x9", "--connect", "1,1 9,9", "--path-cap", "100")
    assert code == 4 and "cap of 100" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--dims", "2x3")
    assert code == 0
    assert out.rstrip().endswith("PASS")
    doc = run_json(capsys, "verify", "--dims", "2x2", "--json")
    assert doc["passed"] and doc["checks"]
    code, _, err = run(capsys, "verify", "--dims", "4x4")
    assert code == 4 and "Monte Carlo" in err


def test_enumerate(capsys):
    doc = run_json(capsys, "enumerate", "--dims", "2x2", "--events", "sinks:1,1 2,2")
    assert doc["labelings"] == "24"
    assert read_rational(doc["expected_sinks"]) == Fraction(4, 3)
    assert read_rational(doc["events"]["sinks:1,1 2,2"]["probability"]) == Fraction(1, 6)
    assert sum(read_rational(p) for p in doc["sink_count_pmf"].values()) == 1


def test_enumerate_errors(capsys):
    assert run(capsys, "enumerate", "--dims", "2x2", "--events", "sinks:3,3")[0] == 2
    assert run(capsys, "enumerate", "--dims", "2x2", "--events", "blob:1,1")[0] == 2
    assert run(capsys, "enumerate", "--dims", "2x2", "--events", "connect:1,1")[0] == 2
    assert run(capsys, "enumerate", "--dims", "2x5")[0] == 4


def test_simulate(capsys):
    argv = ["simulate", "--dims", "3x3", "--trials", "2000", "--seed", "3",
            "--events", "path:2,1 2,2 1,2", "--events", "connect:3,1 1,3"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0
    doc = json.loads(first[1])
    assert doc["trials"] == 2000
    assert set(doc["event_frequencies"]) == {"path:2,1 2,2 1,2", "connect:3,1 1,3"}


@pytest.mark.parametrize("argv", [
    ["--trials", "0"], ["--trials", "10", "--seed", "-1"], ["--trials", "10", "--shards", "0"],
])
def test_simulate_errors(capsys, argv):
    assert run(capsys, "simulate", "--dims", "3x3", *argv)[0] == 2


def test_read_rational_rejects_zero():
    with pytest.raises(InputError):
        read_rational({"num": "1", "den": "0"})


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gigdigraph", "sinks", "--dims", "3x3",
                          "--vertices", "2,2"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["probability"] == {"num": "1", "den": "5"}
