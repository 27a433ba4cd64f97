"""OEIS data ingestion and the definition registry.

Handles the two bulk formats (the `stripped` file of leading values
and per-sequence b-files), deterministic value sampling, and a
union-find registry of generated definitions grouped into equivalence
classes for the JSON info export.

Sequence indexing convention: a SequenceEntry's values list position k
corresponds to index offset + k.  The stripped format carries no
offsets, so entries parsed from it default to offset 0; callers with
better metadata override it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .dsl import Expr

TAG_RE = re.compile(r"A[0-9]{6,7}\Z")

_STRIPPED_LINE_RE = re.compile(r"(A[0-9]{6,7})\s+,(.*),\s*\Z")


class EmptyInput(Exception):
    pass


class MalformedLine(Exception):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class EmptyPairs(Exception):
    pass


class DuplicateName(Exception):
    pass


class UnknownName(Exception):
    pass


@dataclass(frozen=True, slots=True)
class SequenceEntry:
    tag: str
    offset: int
    values: tuple[int, ...]

    def pairs(self) -> list[tuple[int, int]]:
        """(index, value) with index = offset + position."""
        return [(self.offset + k, v) for k, v in enumerate(self.values)]


@dataclass(frozen=True, slots=True)
class StrippedFile:
    entries: dict[str, SequenceEntry]
    warnings: tuple[str, ...]


def parse_stripped(stream) -> StrippedFile:
    """Parse OEIS `stripped` lines: `<tag> ,v1,v2,...,vk,`.

    `#` comment lines are skipped; malformed lines become warnings,
    never errors.  Raises EmptyInput when no line parsed.
    """
    entries: dict[str, SequenceEntry] = {}
    warnings: list[str] = []
    if isinstance(stream, str):
        stream = stream.splitlines()
    for line_no, raw in enumerate(stream, 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _STRIPPED_LINE_RE.match(line.strip())
        if not m:
            warnings.append(f"line {line_no}: malformed stripped line")
            continue
        tag, body = m.group(1), m.group(2)
        try:
            values = tuple(int(v) for v in body.split(","))
        except ValueError:
            warnings.append(f"line {line_no}: non-integer value")
            continue
        if not values:
            warnings.append(f"line {line_no}: no values")
            continue
        if tag in entries:
            warnings.append(f"line {line_no}: duplicate tag {tag}, keeping first")
            continue
        entries[tag] = SequenceEntry(tag, 0, values)
    if not entries:
        raise EmptyInput("no valid stripped lines")
    return StrippedFile(entries, tuple(warnings))


def render_stripped(entries: dict[str, SequenceEntry]) -> str:
    """Inverse of parse_stripped for test fixtures."""
    lines = []
    for tag in sorted(entries):
        vals = ",".join(str(v) for v in entries[tag].values)
        lines.append(f"{tag} ,{vals},")
    return "\n".join(lines) + "\n"


def parse_bfile(stream) -> tuple[list[tuple[int, int]], list[str]]:
    """Parse b-file lines `<index> <value>`; returns (pairs, warnings).

    Comments and blanks are skipped.  A malformed data line is fatal
    (MalformedLine); non-consecutive indices only warn (IndexGap).
    """
    pairs: list[tuple[int, int]] = []
    warnings: list[str] = []
    if isinstance(stream, str):
        stream = stream.splitlines()
    prev_index: int | None = None
    for line_no, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(line_no, f"expected `index value`, got {line!r}")
        try:
            index, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(line_no, f"non-integer field in {line!r}") from None
        if prev_index is not None and index != prev_index + 1:
            warnings.append(f"IndexGap: line {line_no}: {prev_index} -> {index}")
        pairs.append((index, value))
        prev_index = index
    return pairs, warnings


def sample_values(pairs: list[tuple[int, int]], k: int = 100) -> list[tuple[int, int]]:
    """Deterministic evenly spaced sample of at most k pairs.

    Positions are round(j*(L-1)/(k-1)) for j = 0..k-1 (half-up, exact
    integer arithmetic), deduplicated and order-preserving, so the
    first and last pairs always appear when L >= 2.
    """
    if not pairs:
        raise EmptyPairs("cannot sample an empty pair list")
    if k <= 0:
        raise ValueError("k must be positive")
    L = len(pairs)
    if L <= k or k == 1:
        return list(pairs) if L <= k else [pairs[0]]
    out: list[tuple[int, int]] = []
    last_pos = -1
    for j in range(k):
        pos = (2 * j * (L - 1) + (k - 1)) // (2 * (k - 1))
        if pos != last_pos:
            out.append(pairs[pos])
            last_pos = pos
    return out


@dataclass(frozen=True, slots=True)
class DefinitionRecord:
    name: str
    tag: str
    source: Expr | None
    lean: object  # LeanSource
    offset: int = 0
    max_index: int | None = None
    proved_indices: frozenset[int] = frozenset()


@dataclass(frozen=True, slots=True)
class EquivalenceRecord:
    left: str
    right: str


class Registry:
    """Definition store with union-find equivalence classes.

    Single-writer: concurrent mutation must be serialized externally.
    """

    def __init__(self):
        self._defs: dict[str, DefinitionRecord] = {}
        self._parent: dict[str, str] = {}
        self._rank: dict[str, int] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def get(self, name: str) -> DefinitionRecord | None:
        return self._defs.get(name)

    def register(self, defn: DefinitionRecord) -> None:
        if defn.name in self._defs:
            raise DuplicateName(defn.name)
        self._defs[defn.name] = defn
        self._parent[defn.name] = defn.name
        self._rank[defn.name] = 0

    def add_proved(self, name: str, indices) -> None:
        rec = self._defs.get(name)
        if rec is None:
            raise UnknownName(name)
        merged = rec.proved_indices | frozenset(indices)
        self._defs[name] = DefinitionRecord(
            rec.name, rec.tag, rec.source, rec.lean, rec.offset, rec.max_index, merged
        )

    def _find(self, name: str) -> str:
        root = name
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[name] != root:  # path compression
            self._parent[name], name = root, self._parent[name]
        return root

    def register_equivalence(self, rec: EquivalenceRecord) -> None:
        for name in (rec.left, rec.right):
            if name not in self._defs:
                raise UnknownName(name)
        ra, rb = self._find(rec.left), self._find(rec.right)
        if ra == rb:
            return
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1

    def class_count(self) -> int:
        return sum(1 for n in self._defs if self._find(n) == n)

    def equivalence_class(self, name: str) -> str:
        """Stable class id: the lexicographically least member name."""
        if name not in self._defs:
            raise UnknownName(name)
        root = self._find(name)
        return min(n for n in self._defs if self._find(n) == root)

    def export_info_json(self) -> list[dict]:
        """Info document: one record per definition, sorted by tag, name."""
        out = []
        for name in self._defs:
            rec = self._defs[name]
            proved = sorted(rec.proved_indices)
            out.append(
                {
                    "tag": rec.tag,
                    "name": rec.name,
                    "offset": rec.offset,
                    "computable": True,
                    "proved_count": len(proved),
                    "equivalence_class": self.equivalence_class(name),
                    "theorem_names": [f"{name}_thm_{i}" for i in proved],
                }
            )
        out.sort(key=lambda r: (r["tag"], r["name"]))
        return out
