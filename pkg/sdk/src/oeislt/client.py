"""Socket client for the seqlean tool server.

Speaks the server's JSON-lines protocol directly: one request object per
line, one response line per request, big integers as decimal strings.
Protocol-level failures come back as response objects with ``error`` set;
only connection problems raise.
"""

from __future__ import annotations

import json
import os
import socket
import threading
from dataclasses import dataclass

DEFAULT_ENDPOINT = "tcp://127.0.0.1:7227"
_MAX_LINE = 8 * 1024 * 1024


class ConnectionFailed(OSError):
    """Could not reach the server, or it hung up mid-request."""


def _parse_endpoint(text: str) -> tuple:
    if text.startswith("unix://"):
        return ("unix", text[len("unix://"):])
    if text.startswith("tcp://"):
        text = text[len("tcp://"):]
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"endpoint must be tcp://HOST:PORT or unix://PATH, got {text!r}")
    return ("tcp", host, int(port))


def _decode_int(v) -> int | None:
    if v is None:
        return None
    return int(v)


@dataclass(frozen=True)
class ErrorInfo:
    code: str
    message: str


@dataclass(frozen=True)
class Response:
    """Common shape of every reply; command classes add typed fields."""

    status: str
    id: str | None
    error: ErrorInfo | None
    result: dict | None
    raw: bytes

    @property
    def success(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class ReadyResponse(Response):
    ready: bool = False
    version: str = ""
    commands: tuple[str, ...] = ()
    uptime_seconds: float = 0.0


@dataclass(frozen=True)
class GenResponse(Response):
    lean: str = ""
    handle: str = ""
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class CompileResponse(Response):
    ok: bool = False
    checker: str = ""
    diagnostics: tuple[dict, ...] = ()


@dataclass(frozen=True)
class EvalRecord:
    n: int
    value: int | None
    error: str | None
    match: bool


@dataclass(frozen=True)
class EvalResponse(Response):
    matches: bool = False
    first_mismatch: int | None = None
    results: tuple[EvalRecord, ...] = ()


@dataclass(frozen=True)
class ProveFailure:
    n: int
    reason: str


@dataclass(frozen=True)
class ProveResponse(Response):
    proved: tuple[int, ...] = ()
    failed: tuple[ProveFailure, ...] = ()
    theorems: str = ""


def _typed(cls, obj: dict, raw: bytes, fields: dict) -> Response:
    err = obj.get("error")
    return cls(
        status=obj.get("status", "error"),
        id=obj.get("id"),
        error=ErrorInfo(err["code"], err["message"]) if err else None,
        result=obj.get("result"),
        raw=raw,
        **fields,
    )


def _ready_fields(r: dict) -> dict:
    return {
        "ready": bool(r.get("ready")),
        "version": r.get("version", ""),
        "commands": tuple(r.get("commands", ())),
        "uptime_seconds": float(r.get("uptime_seconds", 0.0)),
    }


def _gen_fields(r: dict) -> dict:
    return {
        "lean": r.get("lean", ""),
        "handle": r.get("handle", ""),
        "warnings": tuple(r.get("warnings", ())),
    }


def _compile_fields(r: dict) -> dict:
    return {
        "ok": bool(r.get("ok")),
        "checker": r.get("checker", ""),
        "diagnostics": tuple(r.get("diagnostics", ())),
    }


def _eval_fields(r: dict) -> dict:
    records = tuple(
        EvalRecord(rec["n"], _decode_int(rec.get("value")),
                   rec.get("error"), bool(rec.get("match")))
        for rec in r.get("results", ())
    )
    return {
        "matches": bool(r.get("matches")),
        "first_mismatch": r.get("first_mismatch"),
        "results": records,
    }


def _prove_fields(r: dict) -> dict:
    return {
        "proved": tuple(r.get("proved", ())),
        "failed": tuple(ProveFailure(f["n"], f["reason"]) for f in r.get("failed", ())),
        "theorems": r.get("theorems", ""),
    }


_SHAPES = {
    "ready": (ReadyResponse, _ready_fields),
    "gen": (GenResponse, _gen_fields),
    "compile": (CompileResponse, _compile_fields),
    "eval": (EvalResponse, _eval_fields),
    "prove": (ProveResponse, _prove_fields),
}


def _encode_values(values) -> list:
    out = []
    for n, v in values:
        out.append([int(n), None if v is None else str(v)])
    return out


class Client:
    """Persistent connection to one server; one request in flight at a time."""

    def __init__(self, endpoint: str | None = None, connect_timeout: float = 5.0,
                 read_timeout: float = 120.0):
        self.endpoint = _parse_endpoint(
            endpoint or os.environ.get("OEISLT_SERVER") or DEFAULT_ENDPOINT
        )
        self.connect_timeout = connect_timeout
        self.read_timeout = read_timeout
        self._lock = threading.Lock()
        self._sock: socket.socket | None = None
        self._buf = b""
        self._seq = 0

    # -- connection plumbing -------------------------------------------

    def _connect(self):
        if self.endpoint[0] == "unix":
            s = socket.socket(socket.AF_UNIX)
            addr = self.endpoint[1]
        else:
            s = socket.socket(socket.AF_INET)
            addr = (self.endpoint[1], self.endpoint[2])
        s.settimeout(self.connect_timeout)
        try:
            s.connect(addr)
        except OSError as exc:
            s.close()
            raise ConnectionFailed(f"cannot connect to {self.endpoint}: {exc}") from exc
        s.settimeout(self.read_timeout)
        self._sock = s
        self._buf = b""

    def _read_line(self) -> bytes:
        while b"\n" not in self._buf:
            if len(self._buf) > _MAX_LINE:
                raise ConnectionFailed("response line too long")
            chunk = self._sock.recv(65536)
            if not chunk:
                raise ConnectionFailed("server closed the connection")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line

    def close(self):
        with self._lock:
            if self._sock is not None:
                try:
                    self._sock.close()
                finally:
                    self._sock = None
                    self._buf = b""

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- request path ---------------------------------------------------

    def call(self, cmd: str, args: dict | None = None) -> Response:
        """Send one command; returns the matching typed response object."""
        with self._lock:
            self._seq += 1
            payload = json.dumps(
                {"id": f"sdk-{self._seq}", "cmd": cmd, "args": args or {}},
                separators=(",", ":"),
            ).encode() + b"\n"
            raw = self._roundtrip(payload)
        obj = json.loads(raw)
        cls, extract = _SHAPES.get(cmd, (Response, None))
        result = obj.get("result") or {}
        fields = extract(result) if extract and obj.get("status") == "ok" else (
            {} if extract is None else extract({})
        )
        return _typed(cls, obj, raw, fields)

    def _teardown(self):
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass
            self._sock = None
            self._buf = b""

    def _send_and_read(self, payload: bytes) -> bytes:
        try:
            self._sock.sendall(payload)
            return self._read_line()
        except TimeoutError:
            # the request may still be running server-side; the connection
            # state is unknowable, so drop it and never retry
            self._teardown()
            raise
        except ConnectionFailed:
            self._teardown()
            raise
        except OSError as exc:
            self._teardown()
            raise ConnectionFailed(str(exc)) from exc

    def _roundtrip(self, payload: bytes) -> bytes:
        fresh = self._sock is None
        if fresh:
            self._connect()
        try:
            return self._send_and_read(payload)
        except TimeoutError:
            raise
        except ConnectionFailed:
            if fresh:
                raise
            # a persistent connection went stale between requests; retry
            # the request once on a new socket
            self._connect()
            return self._send_and_read(payload)

    # -- the five commands ----------------------------------------------

    def ready(self) -> ReadyResponse:
        return self.call("ready")

    def gen(self, src: str, name: str, tag: str | None = None,
            offset: int | None = None, max_index: int | None = None,
            mode: str | None = None) -> GenResponse:
        args = {"src": src, "name": name}
        if tag is not None:
            args["tag"] = tag
        if offset is not None:
            args["offset"] = offset
        if max_index is not None:
            args["maxIndex"] = max_index
        if mode is not None:
            args["mode"] = mode
        return self.call("gen", args)

    def compile(self, lean: str, external: bool = False) -> CompileResponse:
        return self.call("compile", {"lean": lean, "external": external})

    def eval(self, src: str | None = None, handle: str | None = None,
             values=(), budget: dict | None = None) -> EvalResponse:
        args = {"values": _encode_values(values)}
        if src is not None:
            args["src"] = src
        if handle is not None:
            args["handle"] = handle
        if budget is not None:
            args["budget"] = budget
        return self.call("eval", args)

    def prove(self, name: str, src: str | None = None, handle: str | None = None,
              values=(), offset: int | None = None,
              tactic: str | None = None) -> ProveResponse:
        args = {"name": name, "values": _encode_values(values)}
        if src is not None:
            args["src"] = src
        if handle is not None:
            args["handle"] = handle
        if offset is not None:
            args["offset"] = offset
        if tactic is not None:
            args["tactic"] = tactic
        return self.call("prove", args)
