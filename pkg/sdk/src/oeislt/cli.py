"""`oeislt-pipeline` entry point."""

import argparse
import os
import sys

from .client import ConnectionFailed
from .pipeline import pipeline_run, summarize


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="oeislt-pipeline",
        description="Formalize a corpus of DSL programs against a seqlean server.",
    )
    ap.add_argument("--corpus", required=True, metavar="FILE",
                    help="JSON-lines corpus of {tag, offset, program} records")
    ap.add_argument("--stripped", required=True, metavar="FILE",
                    help="OEIS stripped file of known values")
    ap.add_argument("--bfile-dir", metavar="DIR",
                    help="directory of bNNNNNN.txt files for extended value checks")
    ap.add_argument("--out", required=True, metavar="DIR",
                    help="output directory for Lean files and outcomes.json")
    ap.add_argument("--server", required=True, metavar="ENDPOINT",
                    help="tcp://HOST:PORT or unix://PATH")
    ap.add_argument("--workers", type=int, default=1, metavar="N",
                    help="parallel pipeline workers (default 1)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("oeislt-pipeline: --workers must be >= 1", file=sys.stderr)
        return 2
    try:
        outcome = pipeline_run(
            corpus_path=args.corpus,
            stripped_path=args.stripped,
            out_dir=args.out,
            server=args.server,
            bfile_dir=args.bfile_dir,
            workers=args.workers,
        )
    except (OSError, ValueError, ConnectionFailed) as exc:
        print(f"oeislt-pipeline: {exc}", file=sys.stderr)
        return 2
    with open(os.path.join(args.out, "outcomes.json"), "w", encoding="utf-8") as f:
        f.write(outcome.to_json())
    print(summarize(outcome))
    return 0


if __name__ == "__main__":
    sys.exit(main())
