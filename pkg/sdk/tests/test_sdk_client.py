"""Client behavior against a live server plus pure encoding units."""

import json
import socket
import threading

import pytest

from oeislt import Client, ConnectionFailed, EvalResponse, ReadyResponse
from oeislt.client import _encode_values, _parse_endpoint

POWERS = "loop(\\(x,y).2 * x, x, 1)"


def test_parse_endpoint_forms():
    assert _parse_endpoint("tcp://h:12") == ("tcp", "h", 12)
    assert _parse_endpoint("h:12") == ("tcp", "h", 12)
    assert _parse_endpoint("unix:///a/b.sock") == ("unix", "/a/b.sock")
    with pytest.raises(ValueError):
        _parse_endpoint("tcp://nope")


def test_encode_values_stringifies_everything():
    assert _encode_values([(0, 1), (1, None), (2, 2 ** 100)]) == [
        [0, "1"], [1, None], [2, str(2 ** 100)],
    ]


def test_ready_typed(endpoint):
    with Client(endpoint) as c:
        r = c.ready()
    assert isinstance(r, ReadyResponse)
    assert r.success and r.ready
    assert "eval" in r.commands
    assert r.uptime_seconds >= 0
    assert r.error is None


def test_eval_listing_shape(endpoint):
    with Client(endpoint) as c:
        rsp = c.eval(src=POWERS, values=[(0, 1), (1, 2), (2, 4), (3, 8)])
    assert isinstance(rsp, EvalResponse)
    assert rsp.status == "ok"
    assert rsp.matches is True and rsp.first_mismatch is None
    assert [rec.value for rec in rsp.results] == [1, 2, 4, 8]
    assert all(isinstance(rec.value, int) for rec in rsp.results)


def test_gen_eval_prove_compile_flow(endpoint):
    with Client(endpoint) as c:
        gen = c.gen(POWERS, name="SdkPowers", tag="A000079", offset=0, max_index=10)
        assert gen.success and gen.handle and "def SdkPowers" in gen.lean
        ev = c.eval(handle=gen.handle, values=[(10, 1024), (90, 2 ** 90)])
        assert ev.matches is True
        pr = c.prove(name="SdkPowers", handle=gen.handle,
                     values=[(i, None) for i in range(5)])
        assert pr.proved == (0, 1, 2, 3, 4)
        assert pr.failed == ()
        assert pr.theorems.count("theorem") == 5
        comp = c.compile(gen.lean + "\n" + pr.theorems)
        assert comp.success and comp.ok and comp.checker == "structural"


def test_protocol_errors_are_responses_not_exceptions(endpoint):
    with Client(endpoint) as c:
        bad = c.gen(src="loop(x,1)", name="Broken")
        assert bad.status == "error"
        assert bad.error.code == "parse_error"
        assert bad.lean == "" and bad.handle == ""
        unknown = c.call("no_such_command")
        assert unknown.error.code == "unknown_command"
        mismatch = c.eval(src="x", values=[(0, 7)])
        assert mismatch.success and mismatch.matches is False
        assert mismatch.first_mismatch == 0


def test_prove_failure_records(endpoint):
    with Client(endpoint) as c:
        pr = c.prove(name="SdkId", src="x", offset=3,
                     values=[(1, 1), (3, 3), (4, 9)])
    assert pr.success
    assert pr.proved == (3,)
    reasons = {f.n: f.reason for f in pr.failed}
    assert reasons == {1: "below_offset", 4: "value_mismatch"}


def test_connection_refused_raises():
    c = Client("tcp://127.0.0.1:1", connect_timeout=0.5)
    with pytest.raises(ConnectionFailed):
        c.ready()


def test_reconnects_after_stale_socket(endpoint):
    with Client(endpoint) as c:
        assert c.ready().ready
        c._sock.close()  # simulate the connection dropping between requests
        assert c.ready().ready


def test_single_inflight_serialization(endpoint):
    with Client(endpoint) as c:
        errors = []

        def hammer(k):
            try:
                for i in range(25):
                    rsp = c.eval(src="x + 1", values=[(k * 100 + i, k * 100 + i + 1)])
                    assert rsp.matches is True, (k, i)
            except Exception as exc:  # surfaced after join
                errors.append(exc)

        threads = [threading.Thread(target=hammer, args=(k,)) for k in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert errors == []


def test_wire_fidelity_modulo_id(endpoint):
    """The SDK's bytes on the wire buy exactly the raw-socket response."""
    args = {"src": POWERS, "values": [[0, "1"], [1, "2"], [5, None]]}
    with Client(endpoint) as c:
        sdk_raw = c.eval(src=POWERS, values=[(0, 1), (1, 2), (5, None)]).raw
    sdk_obj = json.loads(sdk_raw)
    request = {"id": sdk_obj["id"], "cmd": "eval", "args": args}

    path = endpoint[len("unix://"):]
    s = socket.socket(socket.AF_UNIX)
    s.connect(path)
    s.sendall(json.dumps(request).encode() + b"\n")
    buf = b""
    while not buf.endswith(b"\n"):
        buf += s.recv(65536)
    s.close()
    assert buf.rstrip(b"\n") == sdk_raw
