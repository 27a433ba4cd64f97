"""Pipeline units (parsers, ladder, classification) and live mini-runs."""

import json
from importlib import resources

import pytest

from oeislt import (
    CLASSES,
    PipelineOutcome,
    ladder_rungs,
    pipeline_run,
    read_bfile_sample,
    read_corpus,
    read_stripped,
    summarize,
)
from oeislt.client import EvalRecord, EvalResponse, GenResponse, ProveFailure, ProveResponse
from oeislt.pipeline import CorpusEntry, _format_one
from oeislt.cli import main as cli_main

DATA = resources.files("oeislt").joinpath("data")
CORPUS = str(DATA / "corpus20.jsonl")
STRIPPED = str(DATA / "stripped20.txt")


def test_read_corpus_bundled():
    entries = read_corpus(CORPUS)
    assert len(entries) == 20
    assert entries[0].tag == "A900001" and entries[0].offset == 0
    assert entries[18].offset == -1


def test_read_corpus_errors(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"tag": "A000001"}\n')
    with pytest.raises(ValueError):
        read_corpus(str(bad))
    empty = tmp_path / "empty.jsonl"
    empty.write_text("\n\n")
    with pytest.raises(ValueError):
        read_corpus(str(empty))


def test_read_stripped_bundled():
    table = read_stripped(STRIPPED)
    assert len(table) == 20
    assert table["A900004"] == [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048]


def test_read_stripped_skips_junk(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("# header\nnot-a-tag ,1,2,\nA000001 ,1,2,3,\n\n")
    assert read_stripped(str(f)) == {"A000001": [1, 2, 3]}


def test_read_bfile_sample(tmp_path):
    path = tmp_path / "b900001.txt"
    path.write_text("# b-file\n" + "".join(f"{n} {n * n}\n" for n in range(300)))
    pairs = read_bfile_sample(str(tmp_path), "A900001", k=100)
    assert len(pairs) == 100
    assert pairs[0] == (0, 0) and pairs[-1] == (299, 299 * 299)
    assert pairs == sorted(pairs)
    small = read_bfile_sample(str(tmp_path), "A900001", k=1000)
    assert len(small) == 300  # fewer lines than the sample size: take all
    assert read_bfile_sample(str(tmp_path), "A999999") == []


def test_ladder_rungs():
    assert ladder_rungs(250) == [100, 50, 25]
    assert ladder_rungs(100) == [100, 50, 25]
    assert ladder_rungs(60) == [60, 50, 25]
    assert ladder_rungs(40) == [40, 25]
    assert ladder_rungs(25) == [25]
    assert ladder_rungs(12) == [12]


# -- ladder classification against a scripted client ------------------------


def _ok(cls, **fields):
    return cls(status="ok", id=None, error=None, result={}, raw=b"", **fields)


def _err(cls, code):
    from oeislt.client import ErrorInfo

    return cls(status="error", id=None,
               error=ErrorInfo(code, code), result=None, raw=b"")


class ScriptedClient:
    """Succeeds gen/eval; prove succeeds only at or below a rung threshold."""

    def __init__(self, prove_limit, prove_failures=None):
        self.prove_limit = prove_limit
        self.prove_failures = prove_failures

    def gen(self, src, name, **kw):
        return _ok(GenResponse, lean=f"def {name} (n : ℕ) : ℤ :=\n  0\n",
                   handle="h" * 64, warnings=())

    def eval(self, handle=None, values=(), **kw):
        records = tuple(EvalRecord(n, v, None, True) for n, v in values)
        return _ok(EvalResponse, matches=True, first_mismatch=None, results=records)

    def prove(self, name, handle=None, values=(), **kw):
        if self.prove_failures is not None:
            return _ok(ProveResponse, proved=(), failed=tuple(self.prove_failures),
                       theorems="")
        if len(values) > self.prove_limit:
            return _err(ProveResponse, "deadline_exceeded")
        proved = tuple(n for n, _ in values)
        thms = "".join(f"theorem {name}_thm_{n} : {name} {n} = {v} := by decide\n"
                       for n, v in values)
        return _ok(ProveResponse, proved=proved, failed=(), theorems=thms)


def _entry(tag="A912345", offset=0, program="x"):
    return CorpusEntry(tag, offset, program)


def test_ladder_max(tmp_path):
    out = _format_one(ScriptedClient(200), _entry(), list(range(120)), None, str(tmp_path))
    assert out.classification == "formalized_max"
    assert out.proved == 100
    text = (tmp_path / out.file).read_text()
    assert text.count("theorem") == 100
    assert text.startswith("def A912345")


def test_ladder_partial_at_50(tmp_path):
    out = _format_one(ScriptedClient(50), _entry(), list(range(120)), None, str(tmp_path))
    assert out.classification == "formalized_partial"
    assert out.proved == 50
    assert (tmp_path / out.file).read_text().count("theorem") == 50


def test_ladder_partial_at_25(tmp_path):
    out = _format_one(ScriptedClient(25), _entry(), list(range(120)), None, str(tmp_path))
    assert out.classification == "formalized_partial"
    assert out.proved == 25


def test_ladder_all_rungs_exhausted(tmp_path):
    out = _format_one(ScriptedClient(0), _entry(), list(range(120)), None, str(tmp_path))
    assert out.classification == "timeout"
    assert out.file is None
    assert list(tmp_path.iterdir()) == []


def test_prove_value_mismatch_classifies_mismatch(tmp_path):
    scripted = ScriptedClient(200, prove_failures=[ProveFailure(3, "value_mismatch")])
    out = _format_one(scripted, _entry(), list(range(30)), None, str(tmp_path))
    assert out.classification == "mismatch"
    assert "value_mismatch" in out.detail


def test_negative_offset_skips_before_any_call(tmp_path):
    class Exploding:
        def __getattr__(self, name):
            raise AssertionError("no server call expected")

    out = _format_one(Exploding(), _entry(offset=-2), [1, 2, 3], None, str(tmp_path))
    assert out.classification == "negative_offset"


def test_missing_known_values_is_gen_failed(tmp_path):
    out = _format_one(ScriptedClient(200), _entry(), [], None, str(tmp_path))
    assert out.classification == "gen_failed"


def test_summarize_zero_and_rows():
    zero = PipelineOutcome(0, {c: 0 for c in CLASSES}, (), "out")
    text = summarize(zero)
    assert text.count("\n") == 7
    for line in text.splitlines():
        assert line.endswith(" 0")
    some = PipelineOutcome(
        5, {"formalized_max": 2, "formalized_partial": 1, "mismatch": 1,
            "timeout": 0, "negative_offset": 1, "gen_failed": 0}, (), "out")
    lines = summarize(some).splitlines()
    assert lines[0].endswith(" 5")
    assert lines[1].endswith(" 3")  # formalized = max + partial
    assert lines[2].endswith(" 2")
    assert lines[3].endswith(" 1")


# -- live runs ----------------------------------------------------------------


def test_pipeline_bundled_corpus_counts_and_determinism(endpoint, tmp_path):
    results = []
    for sub in ("r1", "r2"):
        out_dir = tmp_path / sub
        outcome = pipeline_run(CORPUS, STRIPPED, str(out_dir), endpoint, workers=2)
        files = {p.name: p.read_text() for p in sorted(out_dir.glob("*.lean"))}
        results.append((outcome.to_json(), files))
    doc = json.loads(results[0][0])
    assert doc["counts"] == {
        "formalized_max": 16, "formalized_partial": 0, "mismatch": 2,
        "timeout": 1, "negative_offset": 1, "gen_failed": 0,
    }
    assert doc["corpus_size"] == 20
    assert len(results[0][1]) == 16
    assert results[0] == results[1]
    by_tag = {s["tag"]: s for s in doc["sequences"]}
    assert by_tag["A900017"]["class"] == "mismatch"
    assert by_tag["A900019"]["class"] == "negative_offset"
    assert by_tag["A900020"]["class"] == "timeout"
    assert by_tag["A900005"]["proved"] == 12
    text = results[0][1]["A900004.lean"]
    assert text.startswith("@[OEIS := A900004, offset := 0, maxIndex := 11")
    assert text.count("theorem") == 12


def test_pipeline_bfile_values_participate(endpoint, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text('{"tag": "A912399", "offset": 0, "program": "x + 1"}\n')
    stripped = tmp_path / "s.txt"
    stripped.write_text("A912399 ,1,2,3,4,\n")
    bdir = tmp_path / "b"
    bdir.mkdir()

    (bdir / "b912399.txt").write_text("".join(f"{n} {n + 1}\n" for n in range(200)))
    out1 = pipeline_run(str(corpus), str(stripped), str(tmp_path / "ok"),
                        endpoint, bfile_dir=str(bdir))
    assert out1.sequences[0].classification == "formalized_max"

    # poison the final b-file value; the endpoint is always sampled
    lines = [f"{n} {n + 1}" for n in range(200)]
    lines[199] = "199 999"
    (bdir / "b912399.txt").write_text("\n".join(lines) + "\n")
    out2 = pipeline_run(str(corpus), str(stripped), str(tmp_path / "bad"),
                        endpoint, bfile_dir=str(bdir))
    assert out2.sequences[0].classification == "mismatch"
    assert "n=199" in out2.sequences[0].detail


def test_cli_main(endpoint, tmp_path, capsys):
    out = tmp_path / "cli"
    rc = cli_main(["--corpus", CORPUS, "--stripped", STRIPPED,
                   "--out", str(out), "--server", endpoint, "--workers", "2"])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "# sequences in corpus" in stdout
    assert (out / "outcomes.json").exists()
    assert rc == 0

    assert cli_main(["--corpus", "/nope.jsonl", "--stripped", STRIPPED,
                     "--out", str(out), "--server", endpoint]) == 2
    assert cli_main(["--corpus", CORPUS, "--stripped", STRIPPED,
                     "--out", str(out), "--server", endpoint, "--workers", "0"]) == 2
    assert cli_main(["--corpus", CORPUS, "--stripped", STRIPPED,
                     "--out", str(tmp_path / "x"), "--server", "tcp://127.0.0.1:1"]) == 2
