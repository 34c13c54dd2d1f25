import json

import pytest

from latkit.cli import _split_labels, main
from latkit.core import FiniteLattice
from latkit.generators import boolean, chain


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    return code, report, captured.err


@pytest.fixture
def m3_file(tmp_path, m3):
    path = tmp_path / "m3.json"
    path.write_text(m3.to_json() + "\n")
    return str(path)


# -- check ------------------------------------------------------------------


def test_check_co_chain(capsys):
    code, report, err = run(capsys, "check", "--gen", "co-chain:4")
    assert code == 0
    assert report["command"] == "check"
    row = report["results"]["co-chain:4"]
    assert row["size"] == 11
    assert row["atomistic"] is True
    assert row["biatomic"] is True
    assert row["jsd"] is True
    assert row["lower-bounded"] is False
    assert row["unsolved_problems"] == 0
    assert "s" in err  # timings live on stderr only


def test_check_jsd_witness(capsys, m3_file):
    code, report, _ = run(capsys, "check", "--file", m3_file, "--props", "jsd")
    assert code == 0
    row = report["results"][m3_file]
    assert row["jsd"] is False
    witness = row["jsd_witness"]
    assert set(witness) == {"x", "y", "z"}
    assert "atomistic" not in row


def test_check_problem_rows(capsys, m3_file):
    code, report, _ = run(capsys, "check", "--file", m3_file, "--props", "problems")
    row = report["results"][m3_file]
    assert code == 0
    assert row["unsolved_problems"] == 0
    for pr in row["problems"]:
        assert pr["solved"] is True
        assert len(pr["solution"]) == 2


def test_check_unknown_prop(capsys):
    code, report, _ = run(capsys, "check", "--gen", "chain:2", "--props", "magic")
    assert code == 2
    assert report["error"]["type"] == "InputError"


def test_check_enum_names(capsys):
    code, report, _ = run(capsys, "check", "--gen", "enum:3", "--props", "atomistic")
    assert code == 0
    assert list(report["results"]) == ["enum:3:0"]


def test_reports_are_deterministic(capsys):
    _, first, _ = run(capsys, "check", "--gen", "boolean:3")
    _, second, _ = run(capsys, "check", "--gen", "boolean:3")
    assert first == second
    code = main(["check", "--gen", "boolean:3"])
    out_a = capsys.readouterr().out
    main(["check", "--gen", "boolean:3"])
    out_b = capsys.readouterr().out
    assert code == 0 and out_a == out_b


def test_seed_recorded(capsys):
    _, report, _ = run(capsys, "check", "--gen", "chain:2", "--seed", "7")
    assert report["inputs"]["seed"] == 7
    _, report, _ = run(capsys, "check", "--gen", "chain:2")
    assert report["inputs"]["seed"] == 0


# -- lattice sources -----------------------------------------------------------


def test_source_must_be_unique(capsys, m3_file):
    code, report, _ = run(capsys, "check", "--gen", "chain:2", "--file", m3_file)
    assert code == 2
    code, report, _ = run(capsys, "check")
    assert code == 2


def test_bad_generator_specs(capsys):
    for spec in ["nope:3", "boolean", "boolean:x", "chain:0", "boolean:99"]:
        code, report, _ = run(capsys, "check", "--gen", spec)
        assert code == 2, spec
        assert report["error"]["type"] == "InputError"


def test_missing_file(capsys):
    code, report, _ = run(capsys, "check", "--file", "/does/not/exist.json")
    assert code == 2


def test_subsemi_source(capsys, tmp_path):
    path = tmp_path / "chain2.json"
    path.write_text(chain(2).to_json())
    code, report, _ = run(capsys, "check", "--gen", f"subsemi:{path}")
    assert code == 0
    assert report["results"][f"subsemi:{path}"]["size"] == 4


def test_co_points_file_source(capsys, tmp_path):
    cfg = {
        "points": [
            {"label": "a", "x": 0, "y": 0},
            {"label": "b", "x": 4, "y": 0},
            {"label": "c", "x": 0, "y": 4},
        ]
    }
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps(cfg))
    code, report, _ = run(capsys, "check", "--gen", f"co-points:{path}")
    assert code == 0
    assert report["results"][f"co-points:{path}"]["size"] == 8


# -- build ----------------------------------------------------------------------


def test_build_completion(capsys):
    code, report, _ = run(
        capsys, "build", "--gen", "chain:3", "--op", "biatomic-completion"
    )
    assert code == 0
    results = report["results"]
    assert results["input_size"] == 3
    assert results["output_size"] == 5
    assert results["doubled"] == 1
    # the result is a diamond: atomistic and biatomic, but not jsd
    assert results["output"] == {"atomistic": True, "biatomic": True, "jsd": False}
    assert all(results["embedding_preserves"].values())
    assert results["lattice"]["elements"] == ["0", "1", "2", "p(2)", "q(2)"]


def test_build_one_atom(capsys):
    code, report, _ = run(
        capsys,
        "build", "--gen", "boolean:2", "--op", "one-atom",
        "--apex", "{0,1}",
        "--subsemilattice", "{},{0},{1},{0,1}",
    )
    assert code == 0
    results = report["results"]
    assert results["new_atom"] == "p*"
    assert results["output_size"] == 7
    assert results["jsd_preserving"] is True
    assert all(results["checks"].values())


def test_build_one_atom_non_jsd_pair(capsys):
    code, report, _ = run(
        capsys,
        "build", "--gen", "boolean:2", "--op", "one-atom",
        "--apex", "{0,1}",
        "--subsemilattice", "{},{0,1}",
    )
    assert code == 0
    results = report["results"]
    assert results["output_size"] == 5
    assert results["jsd_preserving"] is False
    assert results["jsd_witness"][0] == "maximal_outside_not_in_m"
    assert results["output"]["jsd"] is False


def test_build_one_atom_requires_arguments(capsys):
    code, report, _ = run(capsys, "build", "--gen", "boolean:2", "--op", "one-atom")
    assert code == 2


def test_build_precondition_exit_code(capsys):
    code, report, _ = run(
        capsys,
        "build", "--gen", "boolean:2", "--op", "one-atom",
        "--apex", "{0}",
        "--subsemilattice", "{},{0},{1},{0,1}",
    )
    assert code == 3
    assert report["error"]["type"] == "BadApex"
    code, report, _ = run(
        capsys,
        "build", "--gen", "boolean:3", "--op", "one-atom",
        "--apex", "{0,1}",
        "--subsemilattice", "{},{0,2},{1,2},{0,1},{0,1,2}",
    )
    assert code == 3
    assert report["error"]["type"] == "NotMeetClosed"


def test_build_unknown_label(capsys):
    code, report, _ = run(
        capsys,
        "build", "--gen", "boolean:2", "--op", "one-atom",
        "--apex", "nope",
        "--subsemilattice", "{},{0,1}",
    )
    assert code == 2


def test_build_needs_single_lattice(capsys):
    code, report, _ = run(
        capsys, "build", "--gen", "enum:4", "--op", "biatomic-completion"
    )
    assert code == 2


def test_build_out_and_trace_files(capsys, tmp_path):
    out = tmp_path / "result.json"
    trace = tmp_path / "steps.jsonl"
    code, report, _ = run(
        capsys,
        "build", "--gen", "boolean:3", "--op", "biatomize",
        "--out", str(out), "--trace", str(trace),
    )
    assert code == 0
    results = report["results"]
    assert results["out"] == str(out)
    assert results["trace"] == str(trace)
    assert "lattice" not in results
    written = FiniteLattice.from_json(out.read_text())
    assert written == boolean(3)  # already biatomic: identity
    assert trace.read_text() == ""
    assert results["steps"] == 0


def test_build_biatomize_with_steps(capsys, tmp_path):
    from latkit.geometry import PointConfiguration, RationalPoint, co_points

    cfg = PointConfiguration(
        ["a", "b", "c", "m"],
        [RationalPoint.of(0, 3), RationalPoint.of(-3, -3),
         RationalPoint.of(3, -3), RationalPoint.of(0, -1)],
    )
    src = tmp_path / "in.json"
    src.write_text(co_points(cfg).to_json())
    trace = tmp_path / "steps.jsonl"
    code, report, _ = run(
        capsys,
        "build", "--file", str(src), "--op", "biatomize", "--trace", str(trace),
    )
    assert code == 0
    results = report["results"]
    assert results["steps"] == 3
    assert results["output_size"] == 68
    assert results["output"]["jsd"] is True
    rows = [json.loads(line) for line in trace.read_text().splitlines()]
    assert len(rows) == 3
    for row in rows:
        assert set(row) == {"problem", "decomposition", "apex", "new_atom", "checks"}
        assert all(row["checks"].values())


def test_build_biatomize_inline_trace(capsys, tmp_path):
    from latkit.geometry import PointConfiguration, RationalPoint, co_points

    cfg = PointConfiguration(
        ["a", "b", "c", "m"],
        [RationalPoint.of(0, 3), RationalPoint.of(-3, -3),
         RationalPoint.of(3, -3), RationalPoint.of(0, -1)],
    )
    src = tmp_path / "in.json"
    src.write_text(co_points(cfg).to_json())
    code, report, _ = run(capsys, "build", "--file", str(src), "--op", "biatomize")
    assert code == 0
    assert len(report["results"]["trace_rows"]) == 3


def test_build_rejects_bad_base(capsys, m3_file):
    code, report, _ = run(capsys, "build", "--file", m3_file, "--op", "biatomize")
    assert code == 3
    assert report["error"]["type"] == "PreconditionFailed"


# -- eval -----------------------------------------------------------------------


def test_eval_theta_on_five_point_lattice(capsys):
    code, report, _ = run(
        capsys, "eval", "--gen", "co-points:paper5", "--qid", "builtin:theta"
    )
    assert code == 1
    row = report["results"]["co-points:paper5"]
    assert row["holds"] is False
    assert row["counterexample"] == {
        "a": "{a}", "b": "{b}", "c": "{c}", "u": "{u}", "v": "{v}",
    }
    assert report["qid"].startswith("a,b,c,u,v |")


def test_eval_theta_on_boolean(capsys):
    code, report, _ = run(capsys, "eval", "--gen", "boolean:3", "--qid", "builtin:theta")
    assert code == 0
    assert report["results"]["boolean:3"]["holds"] is True


def test_eval_sd_join_over_enumeration(capsys):
    code, report, _ = run(capsys, "eval", "--gen", "enum:5", "--qid", "builtin:sd-join")
    assert code == 1  # the five-element modular diamond fails
    failing = [k for k, row in report["results"].items() if not row["holds"]]
    assert failing
    code, _, _ = run(capsys, "eval", "--gen", "enum:4", "--qid", "builtin:sd-join")
    assert code == 0


def test_eval_qid_from_file(capsys, tmp_path):
    path = tmp_path / "comm.qid"
    path.write_text("x,y | => x v y = y v x")
    code, report, _ = run(capsys, "eval", "--gen", "chain:2", "--qid", f"file:{path}")
    assert code == 0

    bad = tmp_path / "bad.qid"
    bad.write_text("x | => x v y = x")
    code, report, _ = run(capsys, "eval", "--gen", "chain:2", "--qid", f"file:{bad}")
    assert code == 2
    assert "not declared" in report["error"]["message"]


def test_eval_bad_qid_specs(capsys):
    code, report, _ = run(capsys, "eval", "--gen", "chain:2", "--qid", "builtin:nope")
    assert code == 2
    code, report, _ = run(capsys, "eval", "--gen", "chain:2", "--qid", "theta")
    assert code == 2


# -- corpus -----------------------------------------------------------------------


def test_corpus_completion(capsys):
    code, report, _ = run(capsys, "corpus", "--suite", "completion", "--max", "5")
    assert code == 0
    assert report["results"]["lattices_checked"] == 10
    assert "violation" not in report["results"]


def test_corpus_extension_jsd(capsys):
    code, report, _ = run(capsys, "corpus", "--suite", "extension-jsd", "--max", "5")
    assert code == 0
    assert report["results"]["lattices_checked"] == 3
    assert report["results"]["pairs_checked"] == 4


def test_corpus_theta_bi(capsys):
    code, report, _ = run(capsys, "corpus", "--suite", "theta-bi", "--max", "5")
    assert code == 0
    assert report["results"]["biatomic_checked"] == 3


def test_corpus_max_bounds(capsys):
    code, report, _ = run(capsys, "corpus", "--suite", "completion", "--max", "8")
    assert code == 2
    code, report, _ = run(capsys, "corpus", "--suite", "completion", "--max", "0")
    assert code == 2


# -- helpers ----------------------------------------------------------------------


def test_split_labels():
    assert _split_labels("{},{0},{1},{0,1}") == ["{}", "{0}", "{1}", "{0,1}"]
    assert _split_labels("a, b ,c") == ["a", "b", "c"]
    assert _split_labels("{a,b,c},[x,y],plain") == ["{a,b,c}", "[x,y]", "plain"]
    assert _split_labels("") == []


def test_error_report_shape(capsys):
    code, report, _ = run(capsys, "check", "--gen", "boolean")
    assert code == 2
    assert set(report) == {"command", "error", "inputs", "version"}
    assert set(report["error"]) == {"type", "message"}
