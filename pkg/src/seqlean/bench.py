"""Closed-loop load generator for the tool server.

Each virtual client is a thread with its own connection, sending one
request and blocking for the response before sending the next.
Request lines are encoded up front; latency is measured from first
byte written to full response read.  The first seconds are warmup and
excluded from every metric.

Resource usage is sampled from the server process tree (the pre-fork
workers are children of the pid handed to `--pid`).
"""

from __future__ import annotations

import csv
import io
import json
import socket
import statistics
import threading
import time
from dataclasses import asdict, dataclass

from .protocol import LineReader, encode_request
from .server import parse_endpoint

WARMUP_S = 3.0
_SAMPLE_INTERVAL_S = 0.25
_CONNECT_RETRY_S = 2.0

_DEFAULT_CORPUS = "eval_corpus.jsonl"


class TargetUnreachable(Exception):
    pass


class ProcessNotFound(Exception):
    pass


class PlatformUnsupported(Exception):
    pass


@dataclass(frozen=True)
class LoadConfig:
    target: str
    clients: int = 8
    duration_s: float = 30.0
    command: str = "eval"
    corpus_path: str | None = None
    server_pid: int | None = None
    warmup_s: float = WARMUP_S

    def __post_init__(self):
        if self.clients < 1:
            raise ValueError("clients must be >= 1")
        if self.duration_s <= 0:
            raise ValueError("duration_s must be positive")
        if self.warmup_s < 0:
            raise ValueError("warmup_s must be nonnegative")
        if self.command not in ("ready", "compile", "eval", "prove"):
            raise ValueError(f"unsupported bench command {self.command!r}")


@dataclass(frozen=True)
class LoadReport:
    command: str
    clients: int
    duration_s: float
    requests_sent: int
    failures: int
    median_latency_ms: float
    p95_latency_ms: float
    throughput_rps: float
    max_cpu_percent: float
    avg_cpu_percent: float
    max_mem_gb: float
    avg_mem_gb: float


def load_corpus(path: str | None, command: str) -> list[bytes]:
    """Pre-encode one request line per corpus entry."""
    if command == "ready":
        return [encode_request("ready", {})]
    if path is None:
        from importlib import resources

        text = resources.files("seqlean").joinpath("data", _DEFAULT_CORPUS).read_text()
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty corpus")
    requests = []
    for ln in lines:
        args = json.loads(ln)
        if not isinstance(args, dict):
            raise ValueError("corpus lines must be JSON objects of request args")
        requests.append(encode_request(command, args))
    return requests


def _connect(endpoint: tuple) -> socket.socket:
    deadline = time.time() + _CONNECT_RETRY_S
    last: Exception | None = None
    while time.time() < deadline:
        try:
            if endpoint[0] == "unix":
                sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
                sock.connect(endpoint[1])
            else:
                sock = socket.create_connection((endpoint[1], endpoint[2]), timeout=10.0)
            sock.settimeout(60.0)
            return sock
        except OSError as ex:
            last = ex
            time.sleep(0.05)
    raise TargetUnreachable(f"cannot connect to {endpoint!r}: {last}")


class ResourceSampler:
    """Samples (cpu_percent, mem_gb) summed over a process tree.

    psutil measures cpu_percent since the previous call on the same
    Process instance, so instances are cached across samples; the
    constructor primes them (a sample taken immediately after would
    read near zero).
    """

    def __init__(self, pid: int):
        try:
            import psutil
        except ImportError:
            raise PlatformUnsupported("psutil is required for resource sampling") from None
        self._psutil = psutil
        self._procs: dict[int, object] = {}
        try:
            self._root = psutil.Process(pid)
        except psutil.NoSuchProcess:
            raise ProcessNotFound(f"no process with pid {pid}") from None
        self.sample()

    def sample(self) -> tuple[float, float]:
        psutil = self._psutil
        try:
            tree = [self._root] + self._root.children(recursive=True)
        except psutil.NoSuchProcess:
            raise ProcessNotFound(f"process {self._root.pid} exited") from None
        cpu = 0.0
        mem = 0
        for proc in tree:
            inst = self._procs.setdefault(proc.pid, proc)
            try:
                cpu += inst.cpu_percent(interval=None)
                mem += inst.memory_info().rss
            except psutil.NoSuchProcess:
                self._procs.pop(proc.pid, None)
        return cpu, mem / 2**30


def sample_resources(pid: int) -> tuple[float, float]:
    """One-shot (cpu_percent, mem_gb) over the process tree.

    Fresh counters make the cpu reading of a single isolated call
    near zero; hold a ResourceSampler for rate measurements.
    """
    return ResourceSampler(pid).sample()


class _Client(threading.Thread):
    def __init__(self, endpoint, requests, offset, warm_end, hard_end):
        super().__init__(daemon=True)
        self.endpoint = endpoint
        self.requests = requests
        self.offset = offset
        self.warm_end = warm_end
        self.hard_end = hard_end
        self.latencies: list[float] = []
        self.sent = 0
        self.failures = 0
        self.error: Exception | None = None

    def run(self):
        try:
            sock = _connect(self.endpoint)
        except TargetUnreachable as ex:
            self.error = ex
            return
        reader = LineReader(sock)
        i = self.offset
        n = len(self.requests)
        try:
            while True:
                t0 = time.perf_counter()
                if time.time() >= self.hard_end:
                    return
                try:
                    sock.sendall(self.requests[i % n])
                    line = reader.readline()
                except OSError:
                    if time.time() >= self.warm_end:
                        self.failures += 1
                        self.sent += 1
                    return
                t1 = time.perf_counter()
                i += 1
                if time.time() < self.warm_end:
                    continue
                self.sent += 1
                if line is None:
                    self.failures += 1
                    return
                if b'"status":"ok"' not in line:
                    self.failures += 1
                self.latencies.append((t1 - t0) * 1000.0)
        finally:
            try:
                sock.close()
            except OSError:
                pass


def run_load(config: LoadConfig) -> LoadReport:
    endpoint = parse_endpoint(config.target)
    requests = load_corpus(config.corpus_path, config.command)
    _connect(endpoint).close()  # fail fast before spinning up clients

    sampler = ResourceSampler(config.server_pid) if config.server_pid is not None else None

    start = time.time()
    warm_end = start + config.warmup_s
    hard_end = warm_end + config.duration_s
    clients = [
        _Client(endpoint, requests, k, warm_end, hard_end)
        for k in range(config.clients)
    ]
    for c in clients:
        c.start()

    cpu_samples: list[float] = []
    mem_samples: list[float] = []
    while any(c.is_alive() for c in clients):
        time.sleep(_SAMPLE_INTERVAL_S)
        if sampler is not None and time.time() >= warm_end:
            try:
                cpu, mem = sampler.sample()
            except ProcessNotFound:
                break
            cpu_samples.append(cpu)
            mem_samples.append(mem)
    for c in clients:
        c.join()
    for c in clients:
        if c.error is not None:
            raise c.error

    latencies = sorted(lat for c in clients for lat in c.latencies)
    sent = sum(c.sent for c in clients)
    failures = sum(c.failures for c in clients)
    if latencies:
        median = statistics.median(latencies)
        p95 = latencies[min(len(latencies) - 1, int(0.95 * len(latencies)))]
    else:
        median = p95 = 0.0
    return LoadReport(
        command=config.command,
        clients=config.clients,
        duration_s=config.duration_s,
        requests_sent=sent,
        failures=failures,
        median_latency_ms=round(median, 3),
        p95_latency_ms=round(p95, 3),
        throughput_rps=round(len(latencies) / config.duration_s, 2),
        max_cpu_percent=round(max(cpu_samples), 1) if cpu_samples else 0.0,
        avg_cpu_percent=round(statistics.fmean(cpu_samples), 1) if cpu_samples else 0.0,
        max_mem_gb=round(max(mem_samples), 4) if mem_samples else 0.0,
        avg_mem_gb=round(statistics.fmean(mem_samples), 4) if mem_samples else 0.0,
    )


_COLUMNS = (
    ("command", "command"),
    ("clients", "clients"),
    ("throughput_rps", "req/s"),
    ("median_latency_ms", "median ms"),
    ("p95_latency_ms", "p95 ms"),
    ("max_cpu_percent", "cpu% max"),
    ("avg_cpu_percent", "cpu% avg"),
    ("max_mem_gb", "mem GB max"),
    ("avg_mem_gb", "mem GB avg"),
    ("requests_sent", "requests"),
    ("failures", "failures"),
)


def render_report(reports: list[LoadReport], fmt: str = "table") -> str:
    if fmt == "jsonl":
        return "\n".join(json.dumps(asdict(r), sort_keys=True) for r in reports)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([field for field, _ in _COLUMNS])
        for r in reports:
            d = asdict(r)
            writer.writerow([d[field] for field, _ in _COLUMNS])
        return buf.getvalue().rstrip("\n")
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    rows = [[header for _, header in _COLUMNS]]
    for r in reports:
        d = asdict(r)
        rows.append([str(d[field]) for field, _ in _COLUMNS])
    widths = [max(len(row[i]) for row in rows) for i in range(len(_COLUMNS))]
    out = []
    for k, row in enumerate(rows):
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if k == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)
