"""Wire protocol framing, parsing, and integer encodings."""

import json
import socket
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqlean.protocol import (
    ERROR_CODES,
    MAX_LINE_BYTES,
    FramingError,
    LineReader,
    ProtocolError,
    Request,
    decode_int,
    encode_error,
    encode_index,
    encode_int,
    encode_ok,
    encode_request,
    parse_request,
    parse_response,
)


def test_request_roundtrip():
    line = encode_request("eval", {"src": "x + 1"}, "req-1")
    assert line.endswith(b"\n")
    assert parse_request(line) == Request("eval", {"src": "x + 1"}, "req-1")


def test_request_defaults():
    req = parse_request(b'{"cmd": "ready"}')
    assert req.cmd == "ready" and req.args == {} and req.id is None


@pytest.mark.parametrize(
    "raw,exc",
    [
        (b"not json", FramingError),
        (b"\xff\xfe", FramingError),
        (b"[1, 2]", ProtocolError),
        (b'"just a string"', ProtocolError),
        (b'{"cmd": ""}', ProtocolError),
        (b'{"args": {}}', ProtocolError),
        (b'{"cmd": 42}', ProtocolError),
        (b'{"cmd": "x", "id": 7}', ProtocolError),
        (b'{"cmd": "x", "args": []}', ProtocolError),
    ],
)
def test_parse_request_rejects(raw, exc):
    with pytest.raises(exc):
        parse_request(raw)


def test_response_encodings():
    ok = parse_response(encode_ok({"v": encode_int(2 ** 200)}, "a"))
    assert ok == {"id": "a", "status": "ok", "result": {"v": str(2 ** 200)}}
    err = parse_response(encode_error("bad_request", "nope"))
    assert err == {"status": "error", "error": {"code": "bad_request", "message": "nope"}}
    err = parse_response(encode_error("internal", "boom", "z"))
    assert err["id"] == "z"


def test_error_codes_are_closed_set():
    assert "bad_request" in ERROR_CODES
    assert "budget_rejected" in ERROR_CODES
    with pytest.raises(AssertionError):
        encode_error("made_up_code", "x")


def test_decode_int():
    assert decode_int(12) == 12
    assert decode_int("-" + "9" * 40) == -int("9" * 40)
    assert decode_int("007") == 7
    for bad in (True, False, 1.5, "1.5", "abc", "", None, [1], {}):
        with pytest.raises(ProtocolError):
            decode_int(bad)


def test_encode_int_always_string():
    assert encode_int(0) == "0"
    assert encode_int(-3) == "-3"
    assert encode_int(10 ** 50) == str(10 ** 50)


def test_encode_index_threshold():
    assert encode_index(2 ** 53) == 2 ** 53
    assert encode_index(-(2 ** 53)) == -(2 ** 53)
    assert encode_index(2 ** 53 + 1) == str(2 ** 53 + 1)
    assert encode_index(5) == 5


@settings(max_examples=100, deadline=None)
@given(
    cmd=st.text(min_size=1, max_size=20),
    rid=st.one_of(st.none(), st.text(max_size=10)),
    args=st.dictionaries(
        st.text(max_size=8),
        st.one_of(st.integers(), st.text(max_size=20), st.booleans(), st.none()),
        max_size=5,
    ),
)
def test_request_roundtrip_property(cmd, rid, args):
    line = encode_request(cmd, args, rid)
    req = parse_request(line)
    assert req.cmd == cmd and req.args == args and req.id == rid


def test_line_reader_frames():
    a, b = socket.socketpair()
    a.sendall(b"one\n\ntwo\ntail")
    a.shutdown(socket.SHUT_WR)
    reader = LineReader(b)
    assert reader.readline() == b"one"
    assert reader.readline() == b""
    assert reader.readline() == b"two"
    assert reader.readline() == b"tail"
    assert reader.readline() is None
    a.close()
    b.close()


def test_line_reader_caps_streamed_line():
    a, b = socket.socketpair()

    def flood():
        try:
            a.sendall(b"x" * (MAX_LINE_BYTES + 100) + b"\n")
        except OSError:
            pass

    t = threading.Thread(target=flood)
    t.start()
    reader = LineReader(b)
    with pytest.raises(FramingError):
        reader.readline()
    b.close()
    t.join()
    a.close()


def test_line_reader_caps_buffered_line():
    a, b = socket.socketpair()
    a.sendall(b"y" * 50 + b"\nok\n")
    reader = LineReader(b, max_len=10)
    with pytest.raises(FramingError):
        reader.readline()
    a.close()
    b.close()


def test_big_ints_survive_json_as_strings():
    # the reason results use decimal strings: double-precision JSON
    # numbers silently lose integer precision past 2^53
    big = 2 ** 63 + 1
    assert json.loads(json.dumps(big)) == big  # python keeps it, but
    assert float(big) != big  # any double-based peer would not
    line = encode_ok({"value": encode_int(big)})
    assert json.loads(line)["result"]["value"] == str(big)
