"""Autoformalization pipeline: gen, check values, prove, write Lean files.

Corpus lines are JSON objects {tag, offset, program}. Known values come
from an OEIS stripped file, extended by a deterministic 100-value sample
of the sequence's b-file when one is present. A program whose values all
agree is pushed through the prove ladder (100 or all known values, then
50, then 25) and written out as one Lean file per sequence.
"""

from __future__ import annotations

import json
import os
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .client import Client, EvalResponse

CLASSES = (
    "formalized_max",
    "formalized_partial",
    "mismatch",
    "timeout",
    "negative_offset",
    "gen_failed",
)
BFILE_SAMPLE = 100
_TAG_RE = re.compile(r"A[0-9]{6,7}\Z")
_EXHAUSTION = ("budget_exhausted", "deadline_exceeded", "budget_rejected")


@dataclass(frozen=True)
class CorpusEntry:
    tag: str
    offset: int
    program: str


@dataclass(frozen=True)
class SequenceOutcome:
    tag: str
    classification: str
    proved: int
    file: str | None
    detail: str


@dataclass(frozen=True)
class PipelineOutcome:
    corpus_size: int
    counts: dict[str, int]
    sequences: tuple[SequenceOutcome, ...]
    out_dir: str

    def to_json(self) -> str:
        doc = {
            "corpus_size": self.corpus_size,
            "counts": self.counts,
            "sequences": [
                {"tag": s.tag, "class": s.classification, "proved": s.proved,
                 "file": s.file, "detail": s.detail}
                for s in self.sequences
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_corpus(path: str) -> list[CorpusEntry]:
    entries = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                entries.append(CorpusEntry(obj["tag"], int(obj["offset"]),
                                           obj["program"]))
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"corpus line {line_no}: {exc}") from exc
    if not entries:
        raise ValueError("corpus is empty")
    return entries


def read_stripped(path: str) -> dict[str, list[int]]:
    """OEIS stripped format: `A000001 ,1,2,3,` with comment lines ignored."""
    table = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tag, _, rest = line.partition(" ")
            if not _TAG_RE.match(tag):
                continue
            values = [v for v in rest.strip().split(",") if v.strip()]
            table[tag] = [int(v) for v in values]
    return table


def read_bfile_sample(bfile_dir: str, tag: str, k: int = BFILE_SAMPLE) -> list[tuple[int, int]]:
    """Up to k evenly spaced (index, value) pairs from DIR/b<digits>.txt."""
    path = os.path.join(bfile_dir, "b" + tag[1:] + ".txt")
    if not os.path.exists(path):
        return []
    pairs = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            n_txt, _, v_txt = line.partition(" ")
            pairs.append((int(n_txt), int(v_txt)))
    if len(pairs) <= k:
        return pairs
    step = (len(pairs) - 1) / (k - 1)
    positions = sorted({round(i * step) for i in range(k)})
    return [pairs[p] for p in positions]


def ladder_rungs(available: int) -> list[int]:
    """Theorem counts to attempt, largest first: min(100, available), 50, 25."""
    first = min(100, available)
    rungs = [first]
    for r in (50, 25):
        if 0 < r < first:
            rungs.append(r)
    return rungs


def _exhausted_eval(rsp: EvalResponse) -> bool:
    """All disagreements are resource exhaustion, not wrong values."""
    bad = [rec for rec in rsp.results if not rec.match]
    return bool(bad) and all(rec.error in _EXHAUSTION for rec in bad)


def _format_one(client: Client, entry: CorpusEntry,
                known: list[int], bfile_dir: str | None, out_dir: str) -> SequenceOutcome:
    if entry.offset < 0:
        return SequenceOutcome(entry.tag, "negative_offset", 0, None,
                               f"offset {entry.offset}")
    if not known:
        return SequenceOutcome(entry.tag, "gen_failed", 0, None,
                               "no known values in the stripped file")

    max_index = entry.offset + len(known) - 1
    gen = client.gen(entry.program, name=entry.tag, tag=entry.tag,
                     offset=entry.offset, max_index=max_index)
    if not gen.success:
        return SequenceOutcome(entry.tag, "gen_failed", 0, None,
                               f"{gen.error.code}: {gen.error.message}")

    checks = {entry.offset + i: v for i, v in enumerate(known)}
    if bfile_dir:
        for n, v in read_bfile_sample(bfile_dir, entry.tag):
            checks.setdefault(n, v)
    ev = client.eval(handle=gen.handle, values=sorted(checks.items()))
    if not ev.success:
        cls = "timeout" if ev.error.code in _EXHAUSTION else "mismatch"
        return SequenceOutcome(entry.tag, cls, 0, None,
                               f"{ev.error.code}: {ev.error.message}")
    if not ev.matches:
        if _exhausted_eval(ev):
            return SequenceOutcome(entry.tag, "timeout", 0, None,
                                   "value checks exhausted the step budget")
        return SequenceOutcome(entry.tag, "mismatch", 0, None,
                               f"first mismatch at n={ev.first_mismatch}")

    rungs = ladder_rungs(len(known))
    for rung_no, count in enumerate(rungs):
        values = [(entry.offset + i, known[i]) for i in range(count)]
        pr = client.prove(name=entry.tag, handle=gen.handle,
                          values=values, offset=entry.offset)
        if not pr.success:
            if pr.error.code in _EXHAUSTION:
                continue
            return SequenceOutcome(entry.tag, "mismatch", 0, None,
                                   f"{pr.error.code}: {pr.error.message}")
        if not pr.failed and len(pr.proved) == count:
            cls = "formalized_max" if rung_no == 0 else "formalized_partial"
            fname = f"{entry.tag}.lean"
            with open(os.path.join(out_dir, fname), "w", encoding="utf-8") as f:
                f.write(gen.lean)
                f.write("\n")
                f.write(pr.theorems)
            return SequenceOutcome(entry.tag, cls, count, fname,
                                   f"proved {count} theorems on rung {rung_no + 1}")
        if not all(f.reason in _EXHAUSTION for f in pr.failed):
            reasons = sorted({f.reason for f in pr.failed})
            return SequenceOutcome(entry.tag, "mismatch", 0, None,
                                   f"prove failed: {', '.join(reasons)}")
    return SequenceOutcome(entry.tag, "timeout", 0, None,
                           "every prove ladder rung exhausted its budget")


def pipeline_run(corpus_path: str, stripped_path: str, out_dir: str,
                 server: str, bfile_dir: str | None = None,
                 workers: int = 1) -> PipelineOutcome:
    entries = read_corpus(corpus_path)
    stripped = read_stripped(stripped_path)
    os.makedirs(out_dir, exist_ok=True)

    local = threading.local()
    clients: list[Client] = []
    clients_lock = threading.Lock()

    def work(entry: CorpusEntry) -> SequenceOutcome:
        if not hasattr(local, "client"):
            local.client = Client(server)
            with clients_lock:
                clients.append(local.client)
        return _format_one(local.client, entry, stripped.get(entry.tag, []),
                           bfile_dir, out_dir)

    try:
        if workers <= 1:
            outcomes = [work(e) for e in entries]
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                outcomes = list(ex.map(work, entries))
    finally:
        for c in clients:
            c.close()

    counts = {cls: 0 for cls in CLASSES}
    for o in outcomes:
        counts[o.classification] += 1
    return PipelineOutcome(len(entries), counts, tuple(outcomes), out_dir)


_ROWS = (
    ("in corpus", None),
    ("formalized into lean", ("formalized_max", "formalized_partial")),
    ("with max theorems proved", ("formalized_max",)),
    ("with some (less than max) theorems proved", ("formalized_partial",)),
    ("with values disagreeing (skipped)", ("mismatch",)),
    ("timed out checking values (skipped)", ("timeout",)),
    ("with negative offset (skipped)", ("negative_offset",)),
    ("with gen failures (skipped)", ("gen_failed",)),
)


def summarize(outcome: PipelineOutcome) -> str:
    """Fixed-width summary table, one row per outcome class."""
    width = max(len(label) for label, _ in _ROWS) + 4
    lines = []
    for label, classes in _ROWS:
        value = outcome.corpus_size if classes is None else sum(
            outcome.counts[c] for c in classes
        )
        lines.append(f"# sequences {label} ".ljust(width + 12, ".") + f" {value}")
    return "\n".join(lines)
