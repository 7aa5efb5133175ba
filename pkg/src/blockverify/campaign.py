"""Verification campaigns: every enabled check for every (group, prime) pair.

Records are produced per (group, p) by :func:`verify_group_prime`, which is a
pure function of the group's JSON description, so campaigns can fan out to
worker processes and still merge into a deterministic order.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import __version__
from .blocks import (
    Block,
    amk_check,
    blocks_of,
    central_p_subgroup,
    central_quotient_check,
    lemma3_check,
    lemma4_check,
)
from .chains import (
    dade_check,
    group_chain_family,
    lemma5_check,
    pair_chain_family,
    partition_classes,
    random_pairing_function,
)
from .chartab import CharTable, character_table, group_from_json, group_to_json
from .errors import BlockVerifyError, InputError, InvariantFailure, PreconditionError, ResourceLimitError
from .fusion import (
    FusionSystemData,
    extend_character_focal,
    fusion_stable_characters,
    group_fusion_maps,
    lemma2_cases,
    star_bijection,
    unique_p_rational_height_zero,
)
from .limits import LIMITS, configure
from .perm import Group, is_prime

log = logging.getLogger("blockverify")

CHECKS = (
    "table",
    "blocks",
    "amk",
    "dade",
    "lemma2",
    "lemma3",
    "lemma4",
    "lemma5",
    "star",
    "nilpotent",
    "fusion",
    "quotient",
)
ALIASES = {
    "all": CHECKS,
    "lemmas": ("lemma2", "lemma3", "lemma4", "lemma5", "star", "nilpotent"),
}


def parse_checks(text: Iterable[str] | str) -> tuple[str, ...]:
    items = text.split(",") if isinstance(text, str) else list(text)
    chosen = set()
    for item in items:
        item = item.strip()
        if not item:
            continue
        if item in ALIASES:
            chosen.update(ALIASES[item])
        elif item in CHECKS:
            chosen.add(item)
        else:
            raise InputError(f"unknown check {item!r}; choose from {', '.join(CHECKS + tuple(ALIASES))}")
    return tuple(c for c in CHECKS if c in chosen)


def parse_primes(text: Iterable | str) -> tuple[int, ...]:
    items = text.split(",") if isinstance(text, str) else list(text)
    primes = []
    for item in items:
        try:
            p = int(str(item).strip())
        except ValueError:
            raise InputError(f"not an integer prime: {item!r}") from None
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if p not in primes:
            primes.append(p)
    return tuple(sorted(primes))


@dataclass
class GroupSource:
    """A group to verify: an identifier and its JSON description."""

    ident: str
    obj: dict
    digest: str


@dataclass
class CampaignConfig:
    sources: list[GroupSource]
    primes: tuple[int, ...] = (2, 3, 5)
    checks: tuple[str, ...] = CHECKS
    max_group_order: int = LIMITS.max_group_order
    max_psubgroups: int = LIMITS.max_psubgroups
    cache_dir: Optional[Path] = None
    fmt: str = "json"
    jobs: int = 1
    timings: bool = False
    random_trials: int = 100
    seed: int = 0

    def __post_init__(self):
        for p in self.primes:
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
        if self.max_group_order <= 0 or self.max_psubgroups <= 0 or self.jobs <= 0:
            raise InputError("bounds and job counts must be positive")
        if self.fmt not in ("json", "csv"):
            raise InputError("format must be json or csv")


@dataclass
class VerificationRecord:
    group: str
    p: int
    block: Optional[int]
    check: str
    status: str
    payload: dict = field(default_factory=dict)
    reason: str = ""
    wall: Optional[float] = None

    def to_json(self, timings: bool = False) -> dict:
        out = asdict(self)
        if not timings:
            out.pop("wall")
        return out


# -- sources ----------------------------------------------------------------------------


def source_from_file(path: Path | str) -> GroupSource:
    path = Path(path)
    try:
        raw = path.read_bytes()
        obj = json.loads(raw)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "group" in obj and "generators" not in obj:
        obj = obj["group"]
    ident = obj.get("name") or path.stem
    return GroupSource(ident, obj, hashlib.sha256(raw).hexdigest())


def source_from_group(G: Group) -> GroupSource:
    obj = group_to_json(G)
    raw = json.dumps(obj, sort_keys=True).encode()
    return GroupSource(G.name or f"group{G.degree}", obj, hashlib.sha256(raw).hexdigest())


def sources_from_dir(directory: Path | str) -> list[GroupSource]:
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"{directory} is not a directory")
    return [source_from_file(p) for p in sorted(directory.glob("*.json"))]


# -- cache ----------------------------------------------------------------------------------


def _cache_path(cache_dir: Path, source: GroupSource) -> Path:
    key = hashlib.sha256(f"{source.digest}:{__version__}".encode()).hexdigest()[:32]
    return cache_dir / f"{key}.json"


def cached_table(G: Group, source: GroupSource, cache_dir: Optional[Path]) -> CharTable:
    """The character table of ``G``, read from or written to ``cache_dir``."""
    if cache_dir is None:
        return character_table(G)
    path = _cache_path(cache_dir, source)
    if path.exists():
        try:
            obj = json.loads(path.read_text())
            table = CharTable.from_json(obj["table"], group=G)
            G._cache["table"] = table
            return table
        except (BlockVerifyError, KeyError, ValueError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", path, exc)
    table = character_table(G)
    blocks = {}
    for p in sorted({q for q in range(2, G.order + 1) if G.order % q == 0 and is_prime(q)}):
        blocks[str(p)] = [list(b.members) for b in blocks_of(G, p)]
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(f".{os.getpid()}.tmp")
    tmp.write_text(json.dumps({"engine": __version__, "table": table.to_json(), "blocks": blocks}, sort_keys=True))
    tmp.replace(path)
    return table


# -- per-(group, p) verification ---------------------------------------------------------------


class _Recorder:
    def __init__(self, ident: str, p: int):
        self.ident = ident
        self.p = p
        self.records: list[VerificationRecord] = []

    def run(self, check: str, block: Optional[int], fn: Callable[[], tuple[str, dict]]) -> None:
        start = time.perf_counter()
        try:
            status, payload = fn()
            reason = payload.pop("reason", "") if isinstance(payload, dict) else ""
        except PreconditionError as exc:
            status, payload, reason = "skipped", {}, str(exc)
        except ResourceLimitError as exc:
            status, payload, reason = "resource", {}, str(exc)
        except InvariantFailure as exc:
            status, payload, reason = "fail", {}, str(exc)
        wall = round(time.perf_counter() - start, 6)
        self.records.append(VerificationRecord(self.ident, self.p, block, check, status, payload, reason, wall))


def verify_group_prime(
    source: GroupSource,
    p: int,
    checks: tuple[str, ...],
    cache_dir: Optional[Path] = None,
    random_trials: int = 100,
    seed: int = 0,
    limits: Optional[dict] = None,
) -> list[VerificationRecord]:
    if limits:
        configure(**limits)
    rec = _Recorder(source.ident, p)
    try:
        G = group_from_json(source.obj)
        G.order
    except ResourceLimitError as exc:
        rec.records.append(VerificationRecord(source.ident, p, None, "group", "resource", {}, str(exc)))
        return rec.records
    if G.order % p:
        return []
    table_holder: list[CharTable] = []

    def table_check():
        T = cached_table(G, source, cache_dir)
        T.validate()
        table_holder.append(T)
        return "pass", {"order": G.order, "classes": len(T), "degrees": list(T.degrees)}

    rec.run("table", None, table_check)
    if not table_holder:
        return _filter(rec.records, checks)
    blocks = blocks_of(G, p)
    fusion: dict[int, FusionSystemData] = {}

    def fusion_of(B: Block) -> FusionSystemData:
        if B.index not in fusion:
            fusion[B.index] = FusionSystemData(B)
        return fusion[B.index]

    if "blocks" in checks:
        def blocks_total():
            total = sum(d * d for B in blocks for d in B.degrees)
            if total != G.order:
                raise InvariantFailure("block degrees do not account for |G|")
            return "pass", {"blocks": len(blocks), "defects": [B.defect for B in blocks]}

        rec.run("blocks", None, blocks_total)
        for B in blocks:
            rec.run("blocks", B.index, lambda B=B: ("pass", B.to_json()))

    if "lemma5" in checks:
        rec.run("lemma5", None, lambda: _lemma5_group(G, p, random_trials, seed))

    for B in blocks:
        if B.defect == 0:
            continue
        i = B.index
        if "amk" in checks:
            rec.run("amk", i, lambda B=B: _status(amk_check(B), "equal"))
        if "dade" in checks:
            rec.run("dade", i, lambda B=B: _dade(B, fusion_of(B)))
        if "fusion" in checks:
            rec.run("fusion", i, lambda B=B: _fusion(B, fusion_of(B)))
        if "lemma2" in checks:
            rec.run("lemma2", i, lambda B=B: _lemma2(fusion_of(B)))
        if "lemma3" in checks:
            rec.run("lemma3", i, lambda B=B: _status(lemma3_check(B), "ok"))
        if "lemma4" in checks:
            rec.run("lemma4", i, lambda B=B: _lemma4(B))
        if "lemma5" in checks:
            rec.run("lemma5", i, lambda B=B: _lemma5_pairs(fusion_of(B), random_trials, seed))
        if "star" in checks:
            rec.run("star", i, lambda B=B: _star(fusion_of(B)))
        if "nilpotent" in checks:
            rec.run("nilpotent", i, lambda B=B: _nilpotent(fusion_of(B)))
        if "quotient" in checks:
            rec.run("quotient", i, lambda B=B: _quotient(B))
    return _filter(rec.records, checks)


def _filter(records, checks):
    return [r for r in records if r.check in checks or r.status in ("fail", "resource")]


def _status(report: dict, key: str) -> tuple[str, dict]:
    return ("pass" if report[key] else "fail"), report


def _dade(B: Block, F: FusionSystemData) -> tuple[str, dict]:
    report = dade_check(B, F)
    if report["status"] == "skipped":
        return "skipped", {"reason": report["reason"]}
    rows = [{k: r[k] for k in ("d", "lhs", "rhs", "rhs_pairs", "equal")} for r in report["rows"]]
    payload = {
        "defect": B.defect,
        "rows": rows,
        "group_chain_classes": report["group_chain_classes"],
        "pair_chain_classes": report["pair_chain_classes"],
        "inadmissible": report["inadmissible"],
        "n_step_ok": report["n_step_ok"],
    }
    ok = report["status"] == "pass" and report["n_step_ok"]
    return ("pass" if ok else "fail"), payload


def _fusion(B: Block, F: FusionSystemData) -> tuple[str, dict]:
    payload = F.to_json()
    payload["chain_checks"] = F.chain_checks
    if B.is_principal:
        expected = group_fusion_maps(B.group, F.P)
        same = all(set(F.maps[Q]) == expected[Q] for Q in expected)
        payload["matches_group_fusion"] = same
        if not same:
            return "fail", payload
    return "pass", payload


def _lemma2(F: FusionSystemData) -> tuple[str, dict]:
    extended = obstructed = 0
    for Z, eta in lemma2_cases(F):
        try:
            extend_character_focal(F.P, F.focal_subgroup, Z, eta, F)
            extended += 1
        except PreconditionError:
            obstructed += 1
    return "pass", {"extended": extended, "obstructed": obstructed, "Z_F_order": F.center.order}


def _lemma4(B: Block) -> tuple[str, dict]:
    Z = central_p_subgroup(B.group, B.p)
    if Z.order == 1:
        return "skipped", {"reason": "O_p(G) meet Z(G) is trivial"}
    return _status(lemma4_check(B, Z), "equal")


def _lemma5_group(G: Group, p: int, trials: int, seed: int) -> tuple[str, dict]:
    family = group_chain_family(G, p)
    return _lemma5_family(family, trials, seed)


def _lemma5_pairs(F: FusionSystemData, trials: int, seed: int) -> tuple[str, dict]:
    return _lemma5_family(pair_chain_family(F), trials, seed)


def _lemma5_family(family, trials: int, seed: int) -> tuple[str, dict]:
    classes = family.classes
    tops, lower, upper = partition_classes(classes)
    rng = random.Random(seed)
    passed = sum(lemma5_check(classes, random_pairing_function(classes, rng)) for _ in range(trials))
    payload = {"classes": len(classes), "B": len(lower), "nB": len(upper), "trials": trials, "passed": passed}
    return ("pass" if passed == trials else "fail"), payload


def _star(F: FusionSystemData) -> tuple[str, dict]:
    Z = central_p_subgroup(F.group, F.p)
    if not Z.is_subgroup_of(F.center):
        raise InvariantFailure("O_p(G) meet Z(G) is not in the fusion centre")
    count = 0
    for eta_hat in fusion_stable_characters(F):
        star_bijection(F, Z, eta_hat)
        count += 1
    return "pass", {"Z_order": Z.order, "characters": count, "irr0": len(F.block.irr0)}


def _nilpotent(F: FusionSystemData) -> tuple[str, dict]:
    nil = F.is_nilpotent
    payload = {"nilpotent": nil, "irr0": len(F.block.irr0), "P_over_Pprime": F.P.order // F.P.derived.order}
    if nil and F.p != 2:
        payload["p_rational"] = unique_p_rational_height_zero(F)
    return "pass", payload


def _quotient(B: Block) -> tuple[str, dict]:
    report = central_quotient_check(B)
    return _status(report, "equivalent")


# -- campaign ------------------------------------------------------------------------------------


def run_campaign(config: CampaignConfig) -> tuple[list[VerificationRecord], int]:
    """All records in (source, p, check position, block) order, and the exit code."""
    limits = {"max_group_order": config.max_group_order, "max_psubgroups": config.max_psubgroups}
    configure(**limits)
    tasks = [(s, p) for s in config.sources for p in config.primes]
    args = [
        (s, p, config.checks, config.cache_dir, config.random_trials, config.seed, limits)
        for s, p in tasks
    ]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_task, args))
    else:
        results = [_task(a) for a in args]
    records: list[VerificationRecord] = []
    for chunk in results:
        records.extend(chunk)
    return records, exit_code(records)


def _task(args) -> list[VerificationRecord]:
    return verify_group_prime(*args)


def exit_code(records: Iterable[VerificationRecord]) -> int:
    statuses = {r.status for r in records}
    if "fail" in statuses:
        return 1
    if "resource" in statuses:
        return 3
    return 0


def render(records: list[VerificationRecord], fmt: str, timings: bool = False) -> str:
    if fmt == "json":
        body = {"engine": __version__, "records": [r.to_json(timings) for r in records]}
        return json.dumps(body, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    columns = ["group", "p", "block", "check", "status", "reason", "payload"]
    if timings:
        columns.append("wall")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        row = [r.group, r.p, "" if r.block is None else r.block, r.check, r.status, r.reason,
               json.dumps(r.payload, sort_keys=True, separators=(",", ":"))]
        if timings:
            row.append(r.wall)
        writer.writerow(row)
    return buf.getvalue()
