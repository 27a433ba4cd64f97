"""Concurrent JSON tool server: ready/gen/compile/eval/prove.

Topology: the listening socket is shared by a small set of worker
processes (pre-fork, so evaluation scales past the GIL); each process
runs one reader thread per connection plus a fixed pool of handler
threads consuming a bounded queue.  `workers` counts handler threads
across the whole server: they are spread over min(workers, cores)
processes.

Per connection, requests are handled strictly in order (the reader
submits one request and waits for its response before reading the
next).  Cross-connection requests run in parallel.  A full queue
yields an `overloaded` error; a request outliving the deadline yields
`deadline_exceeded` and its eventual result is discarded.

Handles returned by gen (content digests of the canonical program
text) live in a store shared across the worker processes, so a handle
minted on one connection resolves on any other.
"""

from __future__ import annotations

import hashlib
import math
import multiprocessing
import os
import queue
import signal
import socket
import stat
import subprocess
import sys
import tempfile
import threading
import time
from dataclasses import dataclass, field

from . import __version__
from .dsl import Expr, LexError, ParseError, parse_program, print_program
from .evaluator import Budget, Env, backend_name, check_against, evaluate
from .leangen import (
    IDENT_RE,
    DefinitionMeta,
    TheoremSpec,
    check_structure,
    dsl_to_lean,
    emit_theorems,
)
from .oeis import (
    TAG_RE,
    DefinitionRecord,
    EquivalenceRecord,
    Registry,
    SequenceEntry,
    UnknownName,
    parse_bfile,
    parse_stripped,
)
from . import protocol
from .protocol import (
    FramingError,
    LineReader,
    ProtocolError,
    decode_int,
    encode_error,
    encode_index,
    encode_int,
    encode_ok,
    parse_request,
)

QUEUE_SIZE = 1024
_PARSE_CACHE_MAX = 256

VERSION_STRING = (
    f"seqlean {__version__} ({backend_name()} kernel; "
    "prove = verification-by-evaluation, theorem text emitted; "
    "kernel checking requires an external toolchain)"
)


class BindError(Exception):
    pass


class DuplicateCommand(Exception):
    pass


class CommandError(Exception):
    """Handler failure carrying a wire error code."""

    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True, slots=True)
class CommandHandler:
    name: str
    kind: str  # core | extension
    fn: object


class CommandRegistry:
    def __init__(self):
        self._handlers: dict[str, CommandHandler] = {}

    def register(self, handler: CommandHandler) -> None:
        if handler.name in self._handlers:
            raise DuplicateCommand(handler.name)
        self._handlers[handler.name] = handler

    def get(self, name: str) -> CommandHandler | None:
        return self._handlers.get(name)

    def names(self) -> list[str]:
        return list(self._handlers)


def parse_endpoint(text: str) -> tuple:
    """tcp://HOST:PORT, unix://PATH, or bare HOST:PORT."""
    if text.startswith("unix://"):
        return ("unix", text[len("unix://"):])
    if text.startswith("tcp://"):
        text = text[len("tcp://"):]
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"not a HOST:PORT endpoint: {text!r}")
    return ("tcp", host or "127.0.0.1", int(port))


@dataclass
class ServerConfig:
    listen: tuple
    workers: int = 0  # 0: one per logical core
    budget: Budget = field(default_factory=Budget)
    request_deadline: float = 30.0
    lean_toolchain: str | None = None
    extensions: tuple[str, ...] = ("echo", "info", "seq", "equiv")
    stripped_path: str | None = None
    bfile_dir: str | None = None
    queue_size: int = QUEUE_SIZE

    def __post_init__(self):
        if self.workers == 0:
            self.workers = os.cpu_count() or 1
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.request_deadline <= 0:
            raise ValueError("request_deadline must be positive")


@dataclass
class ServerContext:
    config: ServerConfig
    registry: CommandRegistry
    handles: dict  # digest -> canonical program text (shared)
    defs: dict  # name -> definition record dict (shared)
    equivs: list  # (left, right) name pairs (shared)
    sequences: dict  # tag -> SequenceEntry (read-only)
    start_time: float
    _parse_cache: dict = field(default_factory=dict)

    def cached_parse(self, digest: str, text: str) -> Expr:
        hit = self._parse_cache.get(digest)
        if hit is not None:
            return hit
        expr = parse_program(text, "extended")
        if len(self._parse_cache) >= _PARSE_CACHE_MAX:
            self._parse_cache.pop(next(iter(self._parse_cache)))
        self._parse_cache[digest] = expr
        return expr


# --- shared argument plumbing ---------------------------------------------


def _require_str(args: dict, key: str) -> str:
    v = args.get(key)
    if not isinstance(v, str) or not v:
        raise ProtocolError(protocol.E_BAD_REQUEST, f"missing or invalid {key!r}")
    return v


def _parse_src(src: str) -> Expr:
    try:
        return parse_program(src, "strict")
    except LexError as ex:
        raise CommandError(protocol.E_PARSE_ERROR, f"offset {ex.offset}: {ex}") from None
    except ParseError as ex:
        raise CommandError(protocol.E_PARSE_ERROR, f"offset {ex.offset}: {ex}") from None


def _resolve_program(ctx: ServerContext, args: dict) -> Expr:
    src = args.get("src")
    handle = args.get("handle")
    if (src is None) == (handle is None):
        raise ProtocolError(protocol.E_BAD_REQUEST, "exactly one of src/handle required")
    if src is not None:
        if not isinstance(src, str) or not src:
            raise ProtocolError(protocol.E_BAD_REQUEST, "src must be a nonempty string")
        return _parse_src(src)
    if not isinstance(handle, str):
        raise ProtocolError(protocol.E_BAD_REQUEST, "handle must be a string")
    cached = ctx._parse_cache.get(handle)
    if cached is not None:
        return cached
    text = ctx.handles.get(handle)
    if text is None:
        raise CommandError(protocol.E_UNKNOWN_HANDLE, f"no program for handle {handle[:64]!r}")
    return ctx.cached_parse(handle, text)


def _parse_values(args: dict) -> list[tuple[int, int | None]]:
    values = args.get("values")
    if not isinstance(values, list) or not values:
        raise ProtocolError(protocol.E_BAD_REQUEST, "values must be a nonempty list")
    pairs: list[tuple[int, int | None]] = []
    for item in values:
        if not isinstance(item, list) or len(item) != 2:
            raise ProtocolError(protocol.E_BAD_REQUEST, "each value must be a [n, v-or-null] pair")
        n = decode_int(item[0], "index")
        if n < 0:
            raise ProtocolError(protocol.E_BAD_REQUEST, f"negative index {n}")
        expected = None if item[1] is None else decode_int(item[1], "expected value")
        pairs.append((n, expected))
    return pairs


def _resolve_budget(args: dict, cap: Budget) -> Budget:
    raw = args.get("budget")
    if raw is None:
        return cap
    if not isinstance(raw, dict):
        raise ProtocolError(protocol.E_BAD_REQUEST, "budget must be an object")
    ticks = decode_int(raw["max_ticks"], "max_ticks") if "max_ticks" in raw else cap.max_ticks
    bits = decode_int(raw["max_value_bits"], "max_value_bits") if "max_value_bits" in raw else cap.max_value_bits
    if ticks <= 0 or bits <= 0:
        raise ProtocolError(protocol.E_BAD_REQUEST, "budget fields must be positive")
    if ticks > cap.max_ticks or bits > cap.max_value_bits:
        raise CommandError(
            protocol.E_BUDGET_REJECTED,
            f"requested budget exceeds server cap ({cap.max_ticks} ticks, {cap.max_value_bits} bits)",
        )
    return Budget(ticks, bits)


def _check_tag(tag) -> str:
    if not isinstance(tag, str) or not TAG_RE.match(tag):
        raise CommandError(protocol.E_INVALID_NAME, f"malformed OEIS tag: {str(tag)[:32]!r}")
    return tag


def _digest(canonical: str) -> str:
    return hashlib.sha256(canonical.encode()).hexdigest()


# --- core command handlers -------------------------------------------------


def cmd_ready(ctx: ServerContext, args: dict) -> dict:
    return {
        "ready": True,
        "version": VERSION_STRING,
        "commands": ctx.registry.names(),
        "uptime_seconds": round(time.time() - ctx.start_time, 3),
    }


def cmd_gen(ctx: ServerContext, args: dict) -> dict:
    src = _require_str(args, "src")
    name = _require_str(args, "name")
    if not IDENT_RE.match(name):
        raise CommandError(protocol.E_INVALID_NAME, f"not a Lean identifier: {name[:64]!r}")
    mode = args.get("mode", "simplified")
    if mode not in ("direct", "simplified"):
        raise ProtocolError(protocol.E_BAD_REQUEST, f"mode must be direct|simplified, got {str(mode)[:32]!r}")
    offset = decode_int(args["offset"], "offset") if "offset" in args else 0
    has_max = "maxIndex" in args
    max_index = decode_int(args["maxIndex"], "maxIndex") if has_max else offset
    warnings: list[str] = []
    meta = None
    if "tag" in args and args["tag"] is not None:
        tag = _check_tag(args["tag"])
        if has_max and max_index < offset:
            raise ProtocolError(protocol.E_BAD_REQUEST, "maxIndex must be >= offset")
        meta = DefinitionMeta(tag, offset, max_index, derive=has_max)
    elif has_max:
        warnings.append("maxIndex given without tag; no attribute header emitted")
    expr = _parse_src(src)
    lean = dsl_to_lean(expr, name, mode, meta).text
    canonical = print_program(expr)
    digest = _digest(canonical)
    ctx.handles[digest] = canonical
    prev = ctx.defs.get(name)
    proved = prev["proved"] if prev and prev["src"] == canonical else []
    ctx.defs[name] = {
        "tag": meta.tag if meta else "",
        "offset": offset,
        "max_index": max_index if has_max else None,
        "src": canonical,
        "proved": proved,
    }
    return {"lean": lean, "handle": digest, "warnings": warnings}


def cmd_eval(ctx: ServerContext, args: dict) -> dict:
    expr = _resolve_program(ctx, args)
    pairs = _parse_values(args)
    budget = _resolve_budget(args, ctx.config.budget)
    if "tag" in args and args["tag"] is not None:
        _check_tag(args["tag"])
    report = check_against(expr, pairs, budget, stop_early=False)
    results = []
    for rec in report.records:
        results.append(
            {
                "n": encode_index(rec.n),
                "value": None if rec.computed.value is None else encode_int(rec.computed.value),
                "error": None if rec.computed.error is None else rec.computed.error.value,
                "match": rec.match,
            }
        )
    scored = [r for r in report.records if r.expected is not None]
    matches = all(r.match for r in scored)
    first = next((r.n for r in scored if not r.match), None)
    return {
        "matches": matches,
        "results": results,
        "first_mismatch": None if first is None else encode_index(first),
    }


def cmd_prove(ctx: ServerContext, args: dict) -> dict:
    expr = _resolve_program(ctx, args)
    name = _require_str(args, "name")
    if not IDENT_RE.match(name):
        raise CommandError(protocol.E_INVALID_NAME, f"not a Lean identifier: {name[:64]!r}")
    pairs = _parse_values(args)
    tactic = args.get("tactic", "decide")
    if not isinstance(tactic, str) or not tactic.strip():
        raise ProtocolError(protocol.E_BAD_REQUEST, "tactic must be a nonempty string")
    offset = decode_int(args["offset"], "offset") if "offset" in args else None
    if "tag" in args and args["tag"] is not None:
        _check_tag(args["tag"])
    budget = ctx.config.budget
    specs: dict[int, TheoremSpec] = {}
    failed: list[dict] = []
    for n, expected in pairs:
        # scratch per index, nothing retained across the loop
        if offset is not None and n < offset:
            failed.append({"n": encode_index(n), "reason": "below_offset"})
            continue
        outcome = evaluate(expr, Env(n, 0), budget)
        if not outcome.ok:
            failed.append({"n": encode_index(n), "reason": outcome.error.value})
            continue
        if expected is not None and outcome.value != expected:
            failed.append({"n": encode_index(n), "reason": protocol.E_VALUE_MISMATCH})
            continue
        if n not in specs:
            specs[n] = TheoremSpec(name, n, outcome.value, tactic)
    theorems = emit_theorems(list(specs.values())).text if specs else ""
    proved = sorted(specs)
    rec = ctx.defs.get(name)
    if rec is not None:
        rec = dict(rec)
        rec["proved"] = sorted(set(rec["proved"]) | set(proved))
        ctx.defs[name] = rec
    return {
        "theorems": theorems,
        "proved": [encode_index(n) for n in proved],
        "failed": failed,
    }


def cmd_compile(ctx: ServerContext, args: dict) -> dict:
    lean = args.get("lean")
    if not isinstance(lean, str) or not lean.strip():
        raise ProtocolError(protocol.E_BAD_REQUEST, "lean must be a nonempty string")
    external = args.get("external", False)
    if not isinstance(external, bool):
        raise ProtocolError(protocol.E_BAD_REQUEST, "external must be a boolean")
    if external:
        toolchain = ctx.config.lean_toolchain
        if not toolchain:
            raise CommandError(protocol.E_TOOLCHAIN_UNAVAILABLE, "no lean toolchain configured")
        with tempfile.NamedTemporaryFile("w", suffix=".lean", delete=False) as f:
            f.write(lean)
            path = f.name
        try:
            proc = subprocess.run(
                [toolchain, path],
                capture_output=True,
                text=True,
                timeout=max(1.0, ctx.config.request_deadline - 1.0),
            )
            diags = [
                {"line": None, "message": ln}
                for ln in (proc.stdout + proc.stderr).splitlines()
                if ln.strip()
            ][:200]
            return {"ok": proc.returncode == 0, "checker": "toolchain", "diagnostics": diags}
        except subprocess.TimeoutExpired:
            return {
                "ok": False,
                "checker": "toolchain",
                "diagnostics": [{"line": None, "message": "toolchain timed out"}],
            }
        finally:
            os.unlink(path)
    ok, diags = check_structure(lean)
    return {"ok": ok, "checker": "structural", "diagnostics": diags}


# --- extension command handlers --------------------------------------------


def ext_echo(ctx: ServerContext, args: dict) -> dict:
    return dict(args)


def ext_info(ctx: ServerContext, args: dict) -> dict:
    reg = Registry()
    for name, d in sorted(dict(ctx.defs).items()):
        reg.register(
            DefinitionRecord(
                name, d["tag"], None, None, d["offset"], d["max_index"],
                frozenset(d["proved"]),
            )
        )
    for left, right in list(ctx.equivs):
        try:
            reg.register_equivalence(EquivalenceRecord(left, right))
        except UnknownName:
            continue
    return {"sequences": reg.export_info_json()}


def ext_equiv(ctx: ServerContext, args: dict) -> dict:
    left = _require_str(args, "left")
    right = _require_str(args, "right")
    for name in (left, right):
        if name not in ctx.defs:
            raise CommandError(protocol.E_INVALID_NAME, f"unknown definition {name[:64]!r}")
    ctx.equivs.append((left, right))
    return {"registered": True}


def ext_seq(ctx: ServerContext, args: dict) -> dict:
    tag = _check_tag(args.get("tag"))
    limit = decode_int(args["limit"], "limit") if "limit" in args else None
    if limit is not None and limit < 0:
        raise ProtocolError(protocol.E_BAD_REQUEST, "limit must be nonnegative")
    if args.get("bfile"):
        if not ctx.config.bfile_dir:
            raise CommandError(protocol.E_INVALID_NAME, "no b-file directory configured")
        path = os.path.join(ctx.config.bfile_dir, "b" + tag[1:] + ".txt")
        if not os.path.exists(path):
            raise CommandError(protocol.E_INVALID_NAME, f"no b-file for {tag}")
        with open(path, encoding="utf-8") as f:
            pairs, _ = parse_bfile(f)
        pairs = pairs[:limit] if limit is not None else pairs
        return {
            "tag": tag,
            "offset": pairs[0][0] if pairs else 0,
            "values": [encode_int(v) for _, v in pairs],
        }
    entry = ctx.sequences.get(tag)
    if entry is None:
        raise CommandError(protocol.E_INVALID_NAME, f"no sequence data for {tag}")
    values = entry.values[:limit] if limit is not None else entry.values
    return {
        "tag": entry.tag,
        "offset": entry.offset,
        "values": [encode_int(v) for v in values],
    }


_CORE_HANDLERS = (
    ("ready", cmd_ready),
    ("gen", cmd_gen),
    ("compile", cmd_compile),
    ("eval", cmd_eval),
    ("prove", cmd_prove),
)

_EXTENSION_HANDLERS = {
    "echo": ext_echo,
    "info": ext_info,
    "seq": ext_seq,
    "equiv": ext_equiv,
}


def build_registry(extensions=()) -> CommandRegistry:
    registry = CommandRegistry()
    for name, fn in _CORE_HANDLERS:
        registry.register(CommandHandler(name, "core", fn))
    for name in extensions:
        fn = _EXTENSION_HANDLERS.get(name)
        if fn is None:
            raise ValueError(f"unknown extension command {name!r}")
        registry.register(CommandHandler(name, "extension", fn))
    return registry


def dispatch(ctx: ServerContext, handler: CommandHandler, args: dict, req_id) -> bytes:
    """Run one handler to a single response line; never raises."""
    try:
        return encode_ok(handler.fn(ctx, args), req_id)
    except (CommandError, ProtocolError) as ex:
        return encode_error(ex.code, ex.message, req_id)
    except Exception as ex:  # defensive: handler bugs must not kill workers
        return encode_error(protocol.E_INTERNAL, f"{type(ex).__name__}: {ex}", req_id)


# --- the server proper ------------------------------------------------------


class _Task:
    __slots__ = ("handler", "args", "req_id", "event", "response")

    def __init__(self, handler, args, req_id):
        self.handler = handler
        self.args = args
        self.req_id = req_id
        self.event = threading.Event()
        self.response: bytes | None = None


class _Worker(threading.Thread):
    def __init__(self, ctx: ServerContext, tasks: queue.Queue):
        super().__init__(daemon=True)
        self.ctx = ctx
        self.tasks = tasks

    def run(self):
        while True:
            task = self.tasks.get()
            if task is None:
                return
            task.response = dispatch(self.ctx, task.handler, task.args, task.req_id)
            task.event.set()


class _ChildServer:
    """One worker process: acceptor + per-connection readers + pool."""

    def __init__(self, listener: socket.socket, config: ServerConfig,
                 threads: int, shared: tuple, sequences: dict, start_time: float):
        handles, defs, equivs = shared
        self.listener = listener
        self.config = config
        self.stop = threading.Event()
        self.active = 0
        self.active_lock = threading.Lock()
        self.tasks: queue.Queue = queue.Queue(maxsize=config.queue_size)
        self.ctx = ServerContext(
            config=config,
            registry=build_registry(config.extensions),
            handles=handles,
            defs=defs,
            equivs=equivs,
            sequences=sequences,
            start_time=start_time,
        )
        self.workers = [_Worker(self.ctx, self.tasks) for _ in range(threads)]

    def run(self):
        signal.signal(signal.SIGTERM, self._on_signal)
        signal.signal(signal.SIGINT, self._on_signal)
        for w in self.workers:
            w.start()
        while not self.stop.is_set():
            try:
                conn, _ = self.listener.accept()
            except OSError:
                break
            threading.Thread(target=self._serve_connection, args=(conn,), daemon=True).start()
        self._drain()

    def _on_signal(self, signum, frame):
        self.stop.set()
        try:
            self.listener.close()
        except OSError:
            pass

    def _drain(self):
        deadline = time.time() + self.config.request_deadline
        while time.time() < deadline:
            with self.active_lock:
                if self.active == 0:
                    break
            time.sleep(0.05)

    def _serve_connection(self, conn: socket.socket):
        reader = LineReader(conn)
        try:
            while not self.stop.is_set():
                try:
                    line = reader.readline()
                except FramingError as ex:
                    conn.sendall(encode_error(protocol.E_BAD_REQUEST, ex.message))
                    return
                except OSError:
                    return
                if line is None:
                    return
                if not line.strip():
                    continue
                try:
                    request = parse_request(line)
                except FramingError as ex:
                    conn.sendall(encode_error(protocol.E_BAD_REQUEST, ex.message))
                    return
                except ProtocolError as ex:
                    conn.sendall(encode_error(ex.code, ex.message))
                    continue
                conn.sendall(self._process(request))
        except OSError:
            pass
        finally:
            try:
                conn.close()
            except OSError:
                pass

    def _process(self, request) -> bytes:
        handler = self.ctx.registry.get(request.cmd)
        if handler is None:
            return encode_error(
                protocol.E_UNKNOWN_COMMAND, f"unknown command {request.cmd[:64]!r}", request.id
            )
        task = _Task(handler, request.args, request.id)
        with self.active_lock:
            self.active += 1
        try:
            try:
                self.tasks.put_nowait(task)
            except queue.Full:
                return encode_error(protocol.E_OVERLOADED, "request queue full", request.id)
            if not task.event.wait(self.config.request_deadline):
                return encode_error(
                    protocol.E_DEADLINE_EXCEEDED,
                    f"request exceeded {self.config.request_deadline}s deadline",
                    request.id,
                )
            return task.response
        finally:
            with self.active_lock:
                self.active -= 1


def _bind(listen: tuple) -> socket.socket:
    try:
        if listen[0] == "unix":
            path = listen[1]
            try:
                if os.path.exists(path):
                    if not stat.S_ISSOCK(os.stat(path).st_mode):
                        raise BindError(f"{path} exists and is not a socket")
                    os.unlink(path)
            except OSError as ex:
                raise BindError(f"cannot reclaim {path}: {ex}") from None
            sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
            sock.bind(path)
        else:
            _, host, port = listen
            sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            sock.bind((host, port))
        sock.listen(512)
        return sock
    except OSError as ex:
        raise BindError(f"cannot bind {listen!r}: {ex}") from None


def _load_sequences(config: ServerConfig) -> dict:
    if not config.stripped_path:
        return {}
    with open(config.stripped_path, encoding="utf-8") as f:
        parsed = parse_stripped(f)
    for w in parsed.warnings[:20]:
        print(f"stripped: {w}", file=sys.stderr)
    return parsed.entries


def _child_main(listener, config, threads, shared, sequences, start_time):
    _ChildServer(listener, config, threads, shared, sequences, start_time).run()


def serve(config: ServerConfig) -> None:
    """Run the server until SIGTERM/SIGINT; blocks."""
    build_registry(config.extensions)  # fail fast on unknown extensions
    listener = _bind(config.listen)
    sequences = _load_sequences(config)
    start_time = time.time()
    cores = os.cpu_count() or 1
    procs = max(1, min(config.workers, cores))
    forced = os.environ.get("SEQLEAN_FORCE_PROCS")
    if forced:
        procs = max(1, int(forced))
    threads = max(1, math.ceil(config.workers / procs))
    endpoint = (
        f"unix://{config.listen[1]}"
        if config.listen[0] == "unix"
        else f"tcp://{config.listen[1]}:{config.listen[2]}"
    )
    print(
        f"seqlean server listening on {endpoint} "
        f"(processes={procs}, threads/process={threads})",
        flush=True,
    )
    if procs == 1:
        shared = ({}, {}, [])
        try:
            _ChildServer(listener, config, threads, shared, sequences, start_time).run()
        except KeyboardInterrupt:
            pass
        finally:
            listener.close()
            if config.listen[0] == "unix":
                _try_unlink(config.listen[1])
        return
    mp = multiprocessing.get_context("fork")
    manager = mp.Manager()
    shared = (manager.dict(), manager.dict(), manager.list())
    children = [
        mp.Process(
            target=_child_main,
            args=(listener, config, threads, shared, sequences, start_time),
            daemon=False,
        )
        for _ in range(procs)
    ]
    for child in children:
        child.start()
    stop = threading.Event()

    def _on_signal(signum, frame):
        stop.set()

    signal.signal(signal.SIGTERM, _on_signal)
    signal.signal(signal.SIGINT, _on_signal)
    try:
        while not stop.is_set():
            if all(not c.is_alive() for c in children):
                break
            stop.wait(0.2)
    finally:
        for child in children:
            if child.is_alive():
                child.terminate()
        grace = time.time() + config.request_deadline + 5
        for child in children:
            child.join(max(0.1, grace - time.time()))
        for child in children:
            if child.is_alive():
                child.kill()
        listener.close()
        manager.shutdown()
        if config.listen[0] == "unix":
            _try_unlink(config.listen[1])


def _try_unlink(path: str) -> None:
    try:
        os.unlink(path)
    except OSError:
        pass
