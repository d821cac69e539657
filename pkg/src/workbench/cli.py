"""``workbench`` command line."""

from __future__ import annotations

import argparse
import sys

from .corpus import COMMANDS, EXIT_USAGE, Cache, JobSpec, UsageError, corpus_run, dumps, exit_code, run_job


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _precision(text: str):
    try:
        a, m = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("precision must look like a,m") from None
    return a, m


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="workbench", description="Exact modular representation and Iwasawa-algebra checks.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--group", help="group name (C4, S3, Q8, ...), Iwasawa spec name or H:phi, or algebra:p")
    ap.add_argument("--p", type=int)
    ap.add_argument("--precision", type=_precision, default=(8, 32), metavar="a,m")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--filter", default="", help="corpus filter such as p=3 or group=Q8")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for corpus-run")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--cache", help="cache directory (WORKBENCH_CACHE takes precedence)")
    ap.add_argument("--no-cache", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    a, m = args.precision
    job = JobSpec(args.command, args.group, args.p, a, m, args.seed, args.trials, args.filter)
    cache = Cache.resolve(args.cache, args.no_cache)
    try:
        job.validate()
        if job.command == "corpus-run":
            report = corpus_run(job, cache, workers=max(1, args.jobs))
        else:
            report = run_job(job, cache)
    except UsageError as exc:
        print(f"workbench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cache.directory is not None:
        print(f"cache: {cache.hits} hit(s), {cache.misses} miss(es)", file=sys.stderr)
    return exit_code(report)


if __name__ == "__main__":
    raise SystemExit(main())
