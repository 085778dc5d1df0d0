import json

import pytest

from rubyeval.cli import main
from rubyeval.harness.corpus import load_corpus
from rubyeval.harness.report import read_records_csv
from conftest import BROKEN_TRANSLATION, CODE1, CODE1_RENAMED, CODE2, CSHARP_CONSTRUCTOR


@pytest.fixture
def corpus_file(write_jsonl):
    return write_jsonl("corpus.jsonl", [
        {"id": "a", "reference": CODE1, "candidate": CODE2, "semantic_raw": 2},
        {"id": "b", "reference": CSHARP_CONSTRUCTOR, "candidate": BROKEN_TRANSLATION, "semantic_raw": 1},
        {"id": "c", "reference": CODE1, "candidate": CODE1, "semantic_raw": 4},
        {"id": "d", "reference": CODE1, "candidate": CODE1_RENAMED, "semantic_raw": 3},
        "not json",
    ])


def test_score_prints_record_and_every_mode(tmp_path, capsys):
    """Scoring one pair prints the record and BLEU under each token mode"""
    ref, cand = tmp_path / "ref.cs", tmp_path / "cand.cs"
    ref.write_text(CSHARP_CONSTRUCTOR, encoding="utf-8")
    cand.write_text(BROKEN_TRANSLATION, encoding="utf-8")
    assert main(["score", "--reference", str(ref), "--candidate", str(cand),
                 "--mode", "character", "--norm", "reference-length"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ruby_level"] == "STS"
    assert out["sts"] == pytest.approx(0.952, abs=1e-3)
    assert set(out["bleu_by_mode"]) == {"lexical", "whitespace", "character"}


def test_corpus_writes_reports_and_reports_bad_lines(corpus_file, tmp_path, capsys):
    """Corpus scoring writes both reports and lists rejected lines"""
    out, summary = tmp_path / "scores.csv", tmp_path / "summary.json"
    assert main(["corpus", "--in", str(corpus_file), "--out", str(out), "--summary", str(summary)]) == 0
    captured = capsys.readouterr()
    assert "line 5" in captured.err
    assert "scored 4 pairs" in captured.out
    assert [r.pair_id for r in read_records_csv(out)] == ["a", "b", "c", "d"]
    assert json.loads(summary.read_text())["ruby_levels"] == {"GRS": 3, "STS": 1, "TRS": 0}


def test_corpus_output_is_byte_identical_across_runs(corpus_file, tmp_path):
    """Reports do not depend on the worker count"""
    outputs = []
    for run, workers in enumerate(["1", "3"]):
        out, summary = tmp_path / f"s{run}.csv", tmp_path / f"s{run}.json"
        assert main(["corpus", "--in", str(corpus_file), "--out", str(out), "--summary", str(summary),
                     "--workers", workers]) == 0
        outputs.append((out.read_bytes(), summary.read_bytes()))
    assert outputs[0] == outputs[1]


def test_compare_two_reports(corpus_file, tmp_path, capsys):
    """Comparing a report with its own rerun finds nothing"""
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["corpus", "--in", str(corpus_file), "--out", str(a)])
    main(["corpus", "--in", str(corpus_file), "--out", str(b)])
    capsys.readouterr()
    assert main(["compare", "--a", str(a), "--b", str(b), "--metric", "ruby"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["t"] == 0.0 and out["p_two_sided"] == 1.0
    assert out["significant"] is False


def test_compare_mismatched_reports_exit_two(tmp_path):
    """Reports over different ids are a validation failure"""
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    header = "id,bleu,sts,trs,grs,ruby,ruby_level,semantic\n"
    a.write_text(header + "x,0.1,0.1,,,0.1,STS,\ny,0.2,0.2,,,0.2,STS,\n", encoding="utf-8")
    b.write_text(header + "x,0.1,0.1,,,0.1,STS,\nz,0.2,0.2,,,0.2,STS,\n", encoding="utf-8")
    assert main(["compare", "--a", str(a), "--b", str(b)]) == 2


def test_compare_degenerate_difference_prints_standard_json(tmp_path, capsys):
    """An infinite t statistic comes out as null, not as a non-standard token"""
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    header = "id,bleu,sts,trs,grs,ruby,ruby_level,semantic\n"
    a.write_text(header + "x,0.75,0.75,,,0.75,STS,\ny,0.5,0.5,,,0.5,STS,\n", encoding="utf-8")
    b.write_text(header + "x,0.5,0.5,,,0.5,STS,\ny,0.25,0.25,,,0.25,STS,\n", encoding="utf-8")
    assert main(["compare", "--a", str(a), "--b", str(b)]) == 0
    text = capsys.readouterr().out
    assert "Infinity" not in text
    out = json.loads(text)
    assert out["t"] is None
    assert out["degenerate"] is True
    assert out["mean_diff"] == 0.25


def test_permute_writes_corpus(corpus_file, tmp_path, capsys):
    """Permuting keeps ids and drops human scores"""
    out = tmp_path / "permuted.jsonl"
    assert main(["permute", "--in", str(corpus_file), "--out", str(out), "--seed", "3"]) == 0
    pairs = load_corpus(out).pairs
    assert [p.id for p in pairs] == ["a", "b", "c", "d"]
    assert all(p.semantic_raw is None for p in pairs)
    assert "candidates" in capsys.readouterr().out


def test_ransac_over_scores(corpus_file, tmp_path, capsys):
    """Consensus runs over a scores file"""
    scores = tmp_path / "scores.csv"
    main(["corpus", "--in", str(corpus_file), "--out", str(scores)])
    capsys.readouterr()
    assert main(["ransac", "--in", str(scores), "--runs", "3", "--iterations", "50"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["runs"]) == 3
    assert out["inliers"] >= 2


def test_pdg_dump(tmp_path, capsys):
    """Dependence graph of a method as DOT, to stdout or a file"""
    src = tmp_path / "code1.java"
    src.write_text(CODE1, encoding="utf-8")
    assert main(["pdg-dump", "--file", str(src)]) == 0
    assert capsys.readouterr().out.startswith('digraph "code1" {')

    dot = tmp_path / "g.dot"
    assert main(["pdg-dump", "--file", str(src), "--out", str(dot)]) == 0
    assert "intSmall2" in dot.read_text()


def test_pdg_dump_quotes_dotted_graph_name(tmp_path, capsys):
    """A file name with dots still gives a valid DOT graph id"""
    src = tmp_path / "Query.Result.cs"
    src.write_text(CODE1, encoding="utf-8")
    assert main(["pdg-dump", "--file", str(src)]) == 0
    assert capsys.readouterr().out.startswith('digraph "Query.Result" {')


def test_pdg_dump_rejects_empty_body(tmp_path):
    """An empty body has no graph to dump"""
    src = tmp_path / "empty.java"
    src.write_text("void f() { }", encoding="utf-8")
    assert main(["pdg-dump", "--file", str(src)]) == 2


@pytest.mark.parametrize("argv, code", [
    (["corpus", "--in", "missing.jsonl", "--out", "x.csv"], 3),
    (["score", "--reference", "nope.cs", "--candidate", "nope.cs"], 3),
])
def test_io_failures_exit_three(argv, code, tmp_path, monkeypatch):
    """Missing input files exit with the I/O code"""
    monkeypatch.chdir(tmp_path)
    assert main(argv) == code


def test_undecodable_corpus_exits_two(tmp_path):
    """A corpus that is not UTF-8 is a validation failure"""
    path = tmp_path / "bad.jsonl"
    path.write_bytes(b"\xff\n")
    assert main(["corpus", "--in", str(path), "--out", str(tmp_path / "o.csv")]) == 2


def test_undecodable_source_exits_three(tmp_path):
    """A source file that cannot be decoded is an input failure"""
    ref, cand = tmp_path / "ref.cs", tmp_path / "cand.cs"
    ref.write_text(CSHARP_CONSTRUCTOR, encoding="utf-8")
    cand.write_bytes(b"\xff void")
    assert main(["score", "--reference", str(ref), "--candidate", str(cand)]) == 3


def test_unparseable_reference_exits_two(tmp_path):
    """A reference that does not parse is a validation failure"""
    ref, cand = tmp_path / "ref.cs", tmp_path / "cand.cs"
    ref.write_text(BROKEN_TRANSLATION, encoding="utf-8")
    cand.write_text(CSHARP_CONSTRUCTOR, encoding="utf-8")
    assert main(["score", "--reference", str(ref), "--candidate", str(cand)]) == 2


def test_corpus_without_valid_pairs_exits_two(write_jsonl, tmp_path):
    """A corpus with no usable line is a validation failure"""
    path = write_jsonl("bad.jsonl", ["{}", "nonsense"])
    assert main(["corpus", "--in", str(path), "--out", str(tmp_path / "o.csv")]) == 2


@pytest.mark.parametrize("argv", [[], ["score"], ["score", "--reference", "a", "--candidate", "b", "--max-n", "0"],
                                  ["frobnicate"]])
def test_usage_errors_exit_one(argv):
    """Bad command lines exit with the usage code"""
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1
