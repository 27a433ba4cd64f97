"""OEIS file ingestion, sampling, and the definition registry."""

import math
import os

import pytest

from testutil import DATA_DIR
from seqlean.oeis import (
    DefinitionRecord,
    DuplicateName,
    EmptyInput,
    EquivalenceRecord,
    MalformedLine,
    Registry,
    SequenceEntry,
    UnknownName,
    parse_bfile,
    parse_stripped,
    render_stripped,
    sample_values,
)

STRIPPED = """\
# OEIS stripped file header
A000079 ,1,2,4,8,16,32,
A000142 ,1,1,2,6,24,120,
not a data line
A000079 ,1,2,4,
A000217 ,0,1,3,6,10,
A999999 ,,
"""


def test_parse_stripped():
    parsed = parse_stripped(STRIPPED)
    assert set(parsed.entries) == {"A000079", "A000142", "A000217"}
    assert parsed.entries["A000079"] == SequenceEntry("A000079", 0, (1, 2, 4, 8, 16, 32))
    assert len(parsed.warnings) == 3
    assert any("duplicate" in w for w in parsed.warnings)


def test_parse_stripped_empty_input():
    with pytest.raises(EmptyInput):
        parse_stripped("# comments only\n")
    with pytest.raises(EmptyInput):
        parse_stripped("")


def test_parse_stripped_accepts_negatives_and_big_values():
    parsed = parse_stripped("A000001 ,-1,0," + str(10 ** 40) + ",\n")
    assert parsed.entries["A000001"].values == (-1, 0, 10 ** 40)


def test_render_stripped_is_inverse():
    parsed = parse_stripped(STRIPPED)
    again = parse_stripped(render_stripped(parsed.entries))
    assert again.entries == parsed.entries
    assert not again.warnings


def test_parse_bfile():
    pairs, warnings = parse_bfile("# comment\n0 1\n1 2\n2 4\n\n")
    assert pairs == [(0, 1), (1, 2), (2, 4)]
    assert not warnings


def test_parse_bfile_gap_warns():
    pairs, warnings = parse_bfile("5 10\n7 14\n")
    assert pairs == [(5, 10), (7, 14)]
    assert len(warnings) == 1 and "IndexGap" in warnings[0]


def test_parse_bfile_malformed_is_fatal():
    with pytest.raises(MalformedLine) as exc:
        parse_bfile("0 1\n1 two\n")
    assert exc.value.line_no == 2
    with pytest.raises(MalformedLine):
        parse_bfile("0 1 extra\n")


def test_vendored_bfiles_parse_cleanly():
    for name, fn in (
        ("b000142.txt", math.factorial),
        ("b000079.txt", lambda n: 2 ** n),
        ("b000217.txt", lambda n: n * (n + 1) // 2),
    ):
        with open(os.path.join(DATA_DIR, name), encoding="utf-8") as f:
            pairs, warnings = parse_bfile(f)
        assert not warnings
        assert len(pairs) == 30
        assert all(v == fn(n) for n, v in pairs)


def test_sample_values_positions():
    pairs = [(i, i * i) for i in range(201)]
    assert [p[0] for p in sample_values(pairs, 3)] == [0, 100, 200]
    assert [p[0] for p in sample_values([(i, i) for i in range(10)], 4)] == [0, 3, 6, 9]


def test_sample_values_edges():
    pairs = [(i, i) for i in range(5)]
    assert sample_values(pairs, 100) == pairs  # k >= L keeps everything once
    assert sample_values(pairs, 1) == [(0, 0)]
    assert sample_values([(3, 9)], 10) == [(3, 9)]
    two = [(0, 5), (1, 7)]
    assert sample_values(two, 17) == two


def test_sample_values_includes_endpoints_and_dedups():
    pairs = [(i, i) for i in range(7)]
    out = sample_values(pairs, 5)
    assert out[0] == (0, 0) and out[-1] == (6, 6)
    assert len(out) == len(set(out))


def _record(name, tag="A000001", proved=()):
    return DefinitionRecord(name, tag, None, None, 0, None, frozenset(proved))


def test_registry_register_and_lookup():
    reg = Registry()
    reg.register(_record("F"))
    assert "F" in reg and reg.get("F").name == "F"
    with pytest.raises(DuplicateName):
        reg.register(_record("F"))
    with pytest.raises(UnknownName):
        reg.add_proved("G", 0)


def test_registry_add_proved():
    reg = Registry()
    reg.register(_record("F", proved=(0,)))
    reg.add_proved("F", [3])
    reg.add_proved("F", (3, 5))
    assert reg.get("F").proved_indices == frozenset({0, 3, 5})


def test_equivalence_classes_union_find():
    reg = Registry()
    for name in "ABCDEF":
        reg.register(_record(name))
    assert reg.class_count() == 6
    reg.register_equivalence(EquivalenceRecord("E", "B"))
    reg.register_equivalence(EquivalenceRecord("B", "D"))
    assert reg.class_count() == 4
    # transitivity through the union
    assert reg.equivalence_class("D") == reg.equivalence_class("E") == "B"
    reg.register_equivalence(EquivalenceRecord("A", "A"))
    assert reg.class_count() == 4
    with pytest.raises(UnknownName):
        reg.register_equivalence(EquivalenceRecord("A", "Z"))


def test_equivalence_class_id_is_lexicographic_min():
    reg = Registry()
    for name in ("Zeta", "Mid", "Alpha"):
        reg.register(_record(name))
    reg.register_equivalence(EquivalenceRecord("Zeta", "Mid"))
    assert reg.equivalence_class("Zeta") == "Mid"
    reg.register_equivalence(EquivalenceRecord("Mid", "Alpha"))
    assert reg.equivalence_class("Zeta") == "Alpha"
    assert reg.equivalence_class("Mid") == "Alpha"


def test_union_find_scales_with_chains():
    reg = Registry()
    names = [f"N{i:04d}" for i in range(500)]
    for name in names:
        reg.register(_record(name))
    for a, b in zip(names, names[1:]):
        reg.register_equivalence(EquivalenceRecord(a, b))
    assert reg.class_count() == 1
    assert all(reg.equivalence_class(n) == "N0000" for n in names[::50])


def test_export_info_json():
    reg = Registry()
    reg.register(DefinitionRecord("PowersOfTwo", "A000079", None, None, 0, 10, frozenset({0, 1})))
    reg.register(DefinitionRecord("Doubling", "A000079", None, None, 0, None, frozenset()))
    reg.register(DefinitionRecord("Fact", "A000142", None, None, 1, None, frozenset({4})))
    reg.register_equivalence(EquivalenceRecord("PowersOfTwo", "Doubling"))
    info = reg.export_info_json()
    assert [r["name"] for r in info] == ["Doubling", "PowersOfTwo", "Fact"]
    assert info[1] == {
        "tag": "A000079",
        "name": "PowersOfTwo",
        "offset": 0,
        "computable": True,
        "proved_count": 2,
        "equivalence_class": "Doubling",
        "theorem_names": ["PowersOfTwo_thm_0", "PowersOfTwo_thm_1"],
    }
    assert info[2]["offset"] == 1 and info[2]["theorem_names"] == ["Fact_thm_4"]
