"""``verify`` command line: run, list and explain identity suites."""

from __future__ import annotations

import argparse
import os
import sys

from ..errors import ConfigError, UnknownSuite
from .config import load_config
from .runner import run_all, to_jsonl
from .suites import SUITE_NAMES, SUITES, TOPICS, explain

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Seeded numerical verification of elliptic identities.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run identity suites and write JSON-lines records")
    run.add_argument("--config", required=True, help="key=value config file with [section] headers")
    run.add_argument("--suite", action="append", default=None, metavar="NAME", help="suite to run (repeatable; default all)")
    run.add_argument("--out", default=None, help="report path (default: config [run] out, else stdout)")
    run.add_argument("--jobs", type=int, default=None, help="suites run concurrently in this many processes")
    run.add_argument("--no-timing", action="store_true", help="omit wall_ms so reports compare byte for byte")
    sub.add_parser("list", help="print suite names and what they check")
    ex = sub.add_parser("explain", help="describe a suite or a single identity")
    ex.add_argument("name")
    return p


def _run(args) -> int:
    cfg = load_config(args.config, SUITE_NAMES)
    env_seed = os.environ.get("VERIFY_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"VERIFY_SEED must be an integer, got {env_seed!r}") from None
    names = args.suite or [n for n in SUITE_NAMES if cfg.overrides(n).enabled]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {', '.join(unknown)}; valid: {', '.join(SUITE_NAMES)}")
    jobs = args.jobs if args.jobs is not None else cfg.jobs
    if jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    reports = run_all(cfg, list(dict.fromkeys(names)), jobs)
    body = to_jsonl(reports, timing=not args.no_timing)
    out = args.out or cfg.out
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} identities pass (seed {cfg.seed})", file=sys.stderr)
    for r in failed:
        why = r.error or f"max residual {r.max_residual:.3g} > {r.tolerance:g}"
        print(f"  FAIL {r.suite}: {r.identity}: {why}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _list() -> int:
    width = max(len(n) for n in SUITE_NAMES)
    for name in SUITE_NAMES:
        s = SUITES[name]
        anchors = sorted({c.anchor for c in s.checks})
        print(f"{name:<{width}}  {s.summary}")
        print(f"{'':<{width}}  anchors: {'; '.join(anchors)}")
    print()
    print("explain topics: " + ", ".join(TOPICS))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "list":
            return _list()
        print(explain(args.name))
        return EXIT_OK
    except UnknownSuite as exc:
        print(f"verify: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"verify: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
