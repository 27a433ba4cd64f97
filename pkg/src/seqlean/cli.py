"""Command line entry points: `seqlean serve` and `seqlean bench`."""

from __future__ import annotations

import argparse
import sys

from .evaluator import DEFAULT_MAX_TICKS, DEFAULT_MAX_VALUE_BITS, Budget

_ALL_EXTENSIONS = ("echo", "info", "seq", "equiv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqlean",
        description="DSL-to-Lean tool server and load bench for integer sequence programs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the JSON tool server")
    endpoint = serve.add_mutually_exclusive_group(required=True)
    endpoint.add_argument("--tcp", metavar="HOST:PORT", help="listen on a TCP endpoint")
    endpoint.add_argument("--unix", metavar="PATH", help="listen on a unix socket")
    serve.add_argument(
        "--workers", type=int, default=0, metavar="N",
        help="total handler threads (default: one per logical core)",
    )
    serve.add_argument(
        "--budget", type=int, default=DEFAULT_MAX_TICKS, metavar="TICKS",
        help=f"evaluation tick cap per request (default {DEFAULT_MAX_TICKS})",
    )
    serve.add_argument(
        "--max-bits", type=int, default=DEFAULT_MAX_VALUE_BITS, metavar="B",
        help=f"magnitude cap in bits for intermediate values (default {DEFAULT_MAX_VALUE_BITS})",
    )
    serve.add_argument(
        "--deadline", type=float, default=30.0, metavar="SECONDS",
        help="per-request wall clock deadline (default 30)",
    )
    serve.add_argument("--lean-bin", metavar="PATH", help="external Lean toolchain binary")
    serve.add_argument("--stripped", metavar="FILE", help="OEIS stripped file to load")
    serve.add_argument("--bfile-dir", metavar="DIR", help="directory of OEIS b-files")
    serve.add_argument(
        "--extensions", nargs="*", metavar="NAME", default=None,
        help="extension commands to enable (default: all of "
        + " ".join(_ALL_EXTENSIONS) + ")",
    )

    bench = sub.add_parser("bench", help="closed-loop load generator")
    bench.add_argument(
        "--target", required=True, metavar="URL",
        help="server endpoint, tcp://HOST:PORT or unix://PATH",
    )
    bench.add_argument("--clients", type=int, default=8, metavar="N")
    bench.add_argument("--duration", type=float, default=30.0, metavar="S",
                       help="measured window in seconds, after a 3s warmup")
    bench.add_argument("--cmd", default="eval", metavar="NAME",
                       help="command to drive (default eval)")
    bench.add_argument("--corpus", metavar="FILE",
                       help="JSON-lines file of request args (default: packaged eval corpus)")
    bench.add_argument("--format", choices=("table", "csv", "jsonl"), default="table")
    bench.add_argument("--pid", type=int, metavar="PID",
                       help="server process to sample for CPU/memory")
    return parser


def _run_serve(args) -> int:
    from .server import BindError, ServerConfig, parse_endpoint, serve

    listen = ("unix", args.unix) if args.unix else parse_endpoint(args.tcp)
    extensions = _ALL_EXTENSIONS if args.extensions is None else tuple(args.extensions)
    try:
        config = ServerConfig(
            listen=listen,
            workers=args.workers,
            budget=Budget(max_ticks=args.budget, max_value_bits=args.max_bits),
            request_deadline=args.deadline,
            lean_toolchain=args.lean_bin,
            extensions=extensions,
            stripped_path=args.stripped,
            bfile_dir=args.bfile_dir,
        )
        serve(config)
    except (BindError, ValueError) as ex:
        print(f"seqlean serve: {ex}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        pass
    return 0


def _run_bench(args) -> int:
    from .bench import (
        LoadConfig,
        PlatformUnsupported,
        ProcessNotFound,
        TargetUnreachable,
        render_report,
        run_load,
    )

    config = LoadConfig(
        target=args.target,
        clients=args.clients,
        duration_s=args.duration,
        command=args.cmd,
        corpus_path=args.corpus,
        server_pid=args.pid,
    )
    try:
        report = run_load(config)
    except (TargetUnreachable, ProcessNotFound, PlatformUnsupported, ValueError) as ex:
        print(f"seqlean bench: {ex}", file=sys.stderr)
        return 2
    print(render_report([report], args.format))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _run_serve(args)
    return _run_bench(args)


if __name__ == "__main__":
    sys.exit(main())
