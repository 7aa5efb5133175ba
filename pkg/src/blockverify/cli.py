"""``blockverify`` command line.

Every option can also be set from the environment with the ``BLOCKVERIFY_``
prefix, e.g. ``BLOCKVERIFY_PRIMES=2,3`` or ``BLOCKVERIFY_JOBS=4``; flags win.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .blocks import amk_check, blocks_of
from .campaign import (
    CHECKS,
    CampaignConfig,
    parse_checks,
    parse_primes,
    render,
    run_campaign,
    source_from_file,
    source_from_group,
    sources_from_dir,
)
from .chartab import character_table
from .corpus import CORPUS_NAMES, build_group, corpus_dir
from .errors import BlockVerifyError, InputError
from .limits import LIMITS, configure

ENV_PREFIX = "BLOCKVERIFY_"
VERIFY_CHECKS = ("amk", "dade", "lemma2", "lemma3", "lemma4", "lemma5", "star", "nilpotent", "fusion", "quotient")


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def _add_common(sp: argparse.ArgumentParser, campaign: bool = False) -> None:
    src = sp.add_mutually_exclusive_group(required=not campaign)
    src.add_argument("--group", action="append", metavar="FILE", help="group JSON file or corpus name (repeatable)")
    if campaign:
        src.add_argument("--corpus", metavar="DIR", help="directory of group JSON files (default: packaged corpus)")
    sp.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    sp.add_argument("--format", choices=("json", "csv", "text"), default=_env("FORMAT"))
    sp.add_argument("--cache", metavar="DIR", default=_env("CACHE"), help="character-table cache directory")
    sp.add_argument("--max-group-order", type=int, default=_env("MAX_GROUP_ORDER"))
    sp.add_argument("--max-psubgroups", type=int, default=_env("MAX_PSUBGROUPS"))
    sp.add_argument("--timings", action="store_true", help="include wall times (reports are then not reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockverify", description="Verify block-theoretic counting identities on small groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("table", help="print the character table")
    _add_common(sp)

    sp = sub.add_parser("blocks", help="print the p-blocks")
    _add_common(sp)
    sp.add_argument("-p", dest="primes", default=_env("PRIMES", "2"))

    sp = sub.add_parser("verify", help="run one check")
    sp.add_argument("check", choices=VERIFY_CHECKS)
    _add_common(sp)
    sp.add_argument("-p", dest="primes", default=_env("PRIMES", "2"))

    sp = sub.add_parser("campaign", aliases=["run"], help="run checks over a corpus")
    _add_common(sp, campaign=True)
    sp.add_argument("-p", dest="primes", default=_env("PRIMES", "2,3,5"))
    sp.add_argument("--checks", default=_env("CHECKS", "all"), help=f"comma list from {', '.join(CHECKS)}, lemmas, all")
    sp.add_argument("--jobs", type=int, default=int(_env("JOBS", "1")))
    sp.add_argument("--trials", type=int, default=100, help="random pairing functions per lemma5 check")

    sp = sub.add_parser("corpus", help="list or write the packaged corpus")
    sp.add_argument("--write", metavar="DIR", help="write corpus JSON files to DIR")
    return parser


def _sources(args) -> list:
    if getattr(args, "corpus", None):
        return sources_from_dir(args.corpus)
    if args.group:
        out = []
        for item in args.group:
            if Path(item).exists():
                out.append(source_from_file(item))
            elif item in CORPUS_NAMES:
                out.append(source_from_group(build_group(item)))
            else:
                raise InputError(f"no such file or corpus group: {item}")
        return out
    return sources_from_dir(corpus_dir())


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _limits(args) -> None:
    try:
        configure(max_group_order=args.max_group_order, max_psubgroups=args.max_psubgroups)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_table(args) -> int:
    _limits(args)
    (source,) = _sources(args)[:1]
    from .chartab import group_from_json

    G = group_from_json(source.obj)
    T = character_table(G)
    if args.format in (None, "text"):
        lines = [f"{source.ident}: order {G.order}, {len(T)} classes"]
        lines.append("sizes  " + " ".join(str(s) for s in T.sizes))
        for row in T.chars:
            lines.append("  " + " ".join(str(v) for v in row))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(T.to_json(), indent=1, sort_keys=True) + "\n", args.out)
    return 0


def cmd_blocks(args) -> int:
    _limits(args)
    from .chartab import group_from_json

    source = _sources(args)[0]
    G = group_from_json(source.obj)
    reports = []
    for p in parse_primes(args.primes):
        if G.order % p:
            continue
        for B in blocks_of(G, p):
            obj = B.to_json()
            if B.defect:
                obj["amk"] = amk_check(B)
            reports.append(obj)
    if args.format in (None, "text"):
        lines = [
            f"p={r['p']} block {r['block']}: degrees {r['degrees']} defect {r['defect']} |D|={r['defect_group_order']}"
            for r in reports
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(reports, indent=1, sort_keys=True) + "\n", args.out)
    return 0


def _summary_line(r) -> str:
    pay = r.payload
    tag = r.status.upper()
    if r.check == "amk" and "irr0_G" in pay:
        return f"{r.group} p={r.p} block {r.block}: {pay['irr0_G']} = {pay['irr0_N']} {tag}"
    if r.check == "dade" and "rows" in pay:
        parts = [f"d={row['d']}: {row['lhs']} = {row['rhs']}" for row in pay["rows"]]
        return f"{r.group} p={r.p} block {r.block}: " + "; ".join(parts) + f" {tag}"
    if r.status == "skipped":
        return f"{r.group} p={r.p} block {r.block} {r.check}: SKIPPED ({r.reason})"
    detail = f" ({r.reason})" if r.reason else ""
    return f"{r.group} p={r.p} block {r.block} {r.check}: {tag}{detail}"


def cmd_verify(args) -> int:
    _limits(args)
    config = CampaignConfig(
        sources=_sources(args),
        primes=parse_primes(args.primes),
        checks=(args.check,),
        cache_dir=Path(args.cache) if args.cache else None,
        timings=args.timings,
    )
    records, code = run_campaign(config)
    if args.format in (None, "text"):
        _emit("".join(_summary_line(r) + "\n" for r in records), args.out)
    else:
        _emit(render(records, args.format, args.timings), args.out)
    return code


def cmd_campaign(args) -> int:
    _limits(args)
    config = CampaignConfig(
        sources=_sources(args),
        primes=parse_primes(args.primes),
        checks=parse_checks(args.checks),
        max_group_order=LIMITS.max_group_order,
        max_psubgroups=LIMITS.max_psubgroups,
        cache_dir=Path(args.cache) if args.cache else None,
        fmt=args.format if args.format in ("json", "csv") else "json",
        jobs=args.jobs,
        timings=args.timings,
        random_trials=args.trials,
    )
    records, code = run_campaign(config)
    if args.format == "text":
        _emit("".join(_summary_line(r) + "\n" for r in records), args.out)
    else:
        _emit(render(records, config.fmt, args.timings), args.out)
    return code


def cmd_corpus(args) -> int:
    if args.write:
        from .corpus import write_corpus

        for path in write_corpus(args.write):
            print(path)
    else:
        for name in CORPUS_NAMES:
            print(name)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handlers = {"table": cmd_table, "blocks": cmd_blocks, "verify": cmd_verify, "campaign": cmd_campaign, "run": cmd_campaign, "corpus": cmd_corpus}
    try:
        return handlers[args.command](args)
    except BlockVerifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
