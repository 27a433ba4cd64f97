"""Wire protocol: newline-delimited JSON requests and responses.

One JSON object per line, UTF-8.  Requests are {"cmd": ..., "args":
{...}, "id"?: text}; responses are {"id"?: echoed, "status": "ok",
"result": {...}} or {"id"?: ..., "status": "error", "error": {"code":
..., "message": ...}}.  Integer values in results are always decimal
strings (sequence values routinely exceed 2^53); integer inputs may be
JSON numbers or decimal strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

MAX_LINE_BYTES = 8 * 1024 * 1024

E_BAD_REQUEST = "bad_request"
E_UNKNOWN_COMMAND = "unknown_command"
E_PARSE_ERROR = "parse_error"
E_INVALID_NAME = "invalid_name"
E_UNKNOWN_HANDLE = "unknown_handle"
E_VALUE_MISMATCH = "value_mismatch"
E_DEADLINE_EXCEEDED = "deadline_exceeded"
E_OVERLOADED = "overloaded"
E_TOOLCHAIN_UNAVAILABLE = "toolchain_unavailable"
E_INTERNAL = "internal"
E_BUDGET_REJECTED = "budget_rejected"

ERROR_CODES = frozenset({
    E_BAD_REQUEST, E_UNKNOWN_COMMAND, E_PARSE_ERROR, E_INVALID_NAME,
    E_UNKNOWN_HANDLE, E_VALUE_MISMATCH, E_DEADLINE_EXCEEDED, E_OVERLOADED,
    E_TOOLCHAIN_UNAVAILABLE, E_INTERNAL, E_BUDGET_REJECTED,
})


class ProtocolError(Exception):
    """Request-level failure mapped to an error response."""

    def __init__(self, code: str, message: str):
        assert code in ERROR_CODES, code
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}")


class FramingError(Exception):
    """Broken framing: respond once, then close the connection."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


@dataclass(frozen=True, slots=True)
class Request:
    cmd: str
    args: dict
    id: str | None = None


def encode_request(cmd: str, args: dict, id: str | None = None) -> bytes:
    obj: dict = {"cmd": cmd, "args": args}
    if id is not None:
        obj["id"] = id
    return json.dumps(obj, separators=(",", ":")).encode() + b"\n"


def encode_ok(result: dict, id: str | None = None) -> bytes:
    obj: dict = {}
    if id is not None:
        obj["id"] = id
    obj["status"] = "ok"
    obj["result"] = result
    return json.dumps(obj, separators=(",", ":")).encode() + b"\n"


def encode_error(code: str, message: str, id: str | None = None) -> bytes:
    assert code in ERROR_CODES, f"unknown error code {code!r}"
    obj: dict = {}
    if id is not None:
        obj["id"] = id
    obj["status"] = "error"
    obj["error"] = {"code": code, "message": message}
    return json.dumps(obj, separators=(",", ":")).encode() + b"\n"


def parse_request(line: bytes) -> Request:
    """Decode one request line; raises FramingError on non-JSON bytes
    and ProtocolError(bad_request) on well-formed but invalid objects."""
    try:
        obj = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as ex:
        raise FramingError(f"unparseable request line: {ex}") from None
    if not isinstance(obj, dict):
        raise ProtocolError(E_BAD_REQUEST, "request must be a JSON object")
    req_id = obj.get("id")
    if req_id is not None and not isinstance(req_id, str):
        raise ProtocolError(E_BAD_REQUEST, "id must be a string")
    cmd = obj.get("cmd")
    if not isinstance(cmd, str) or not cmd:
        raise ProtocolError(E_BAD_REQUEST, "missing or empty cmd")
    args = obj.get("args", {})
    if not isinstance(args, dict):
        raise ProtocolError(E_BAD_REQUEST, "args must be an object")
    return Request(cmd, args, req_id)


def parse_response(line: bytes) -> dict:
    obj = json.loads(line.decode("utf-8"))
    if not isinstance(obj, dict) or obj.get("status") not in ("ok", "error"):
        raise ValueError("malformed response")
    return obj


def decode_int(v, what: str = "value") -> int:
    """Accept a wire integer given as a JSON number or decimal string."""
    if isinstance(v, bool):
        raise ProtocolError(E_BAD_REQUEST, f"{what} must be an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v, 10)
        except ValueError:
            raise ProtocolError(E_BAD_REQUEST, f"{what} is not a decimal integer: {v[:40]!r}") from None
    raise ProtocolError(E_BAD_REQUEST, f"{what} must be an integer or decimal string")


def encode_int(v: int):
    """Result-side integers are always decimal strings."""
    return str(v)


def encode_index(n: int):
    """Indices are echoed as numbers when exactly representable."""
    return n if abs(n) <= 2**53 else str(n)


class LineReader:
    """Buffered newline framing over a socket with a line-length cap."""

    def __init__(self, sock, max_len: int = MAX_LINE_BYTES):
        self._sock = sock
        self._max = max_len
        self._buf = bytearray()
        self._eof = False

    def readline(self) -> bytes | None:
        """Next line without trailing newline; None at EOF.

        Raises FramingError when a line exceeds the cap.
        """
        while True:
            nl = self._buf.find(b"\n")
            if nl >= 0:
                if nl > self._max:
                    raise FramingError(f"line exceeds {self._max} bytes")
                line = bytes(self._buf[:nl])
                del self._buf[: nl + 1]
                return line
            if len(self._buf) > self._max:
                raise FramingError(f"line exceeds {self._max} bytes")
            if self._eof:
                if self._buf:
                    line = bytes(self._buf)
                    self._buf.clear()
                    return line
                return None
            chunk = self._sock.recv(65536)
            if not chunk:
                self._eof = True
            else:
                self._buf.extend(chunk)
