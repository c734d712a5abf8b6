"""Command-line entry point: ``closedkschur <command> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from . import cache
from .katalan import closed_kschur, clear_memo, pad, trim
from .oracle import (
    branch_oracle,
    check_aim1,
    check_branch,
    check_dual_pieri,
    dumps,
    enumerate_partitions,
    expand_in_gtilde,
    shift_invariance_holds,
)
from .straighten import (
    SignedExpansion,
    dual_pieri,
    expected_sign,
    is_strict,
    lower_closed,
    lowered_value,
    strict_positions,
)
from . import suites

log = logging.getLogger("closedkschur")

TSV_COLUMNS = ("k", "ℓ", "lambda", "m", "mu", "coeff", "expected_sign_ok")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# argument parsing helpers


def parse_lambda(text: str) -> tuple[tuple[int, ...], int]:
    """Parse "5,2,2,1" into (trimmed partition, number of listed parts)."""
    parts = []
    pos = 0
    for i, piece in enumerate(text.split(",")):
        stripped = piece.strip()
        if not stripped.isdigit():
            raise UsageError(f"--lambda: expected a nonnegative integer at character {pos + 1} "
                             f"(part {i + 1}), got {piece!r}")
        parts.append(int(stripped))
        pos += len(piece) + 1
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise UsageError(f"--lambda: {text} is not weakly decreasing")
    lam = trim(parts)
    if len(lam) < len(parts):
        print(f"note: trailing zeros trimmed from lambda; ambient length stays {len(parts)}", file=sys.stderr)
    return lam, len(parts)


def parse_range(text: str, low: int = 1) -> range:
    """"4" means low..4, "2-4" means 2..4."""
    try:
        if "-" in text:
            a, b = (int(x) for x in text.split("-", 1))
        else:
            a, b = low, int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}; use N or A-B") from None
    if a > b or a < 0:
        raise UsageError(f"empty range {text!r}")
    return range(a, b + 1)


def _check_k(lam: Sequence[int], k: int) -> None:
    if k < 0:
        raise UsageError("--k must be nonnegative")
    if lam and lam[0] > k:
        raise UsageError(f"part exceeds k: {lam[0]} > {k}")


def _ambient(lam: Sequence[int], listed: int, ell: Optional[int]) -> int:
    ell = listed if ell is None else ell
    if ell < len(lam):
        raise UsageError(f"--ell {ell} is shorter than lambda")
    return ell


# --------------------------------------------------------------------------
# single computations


def _emit_expansion(exp: SignedExpansion, fmt: str, out) -> None:
    if fmt == "pretty":
        print(str(exp), file=out)
    else:
        print(exp.to_json(), file=out)


def cmd_closed(args, out) -> int:
    lam, listed = parse_lambda(args.lam)
    _check_k(lam, args.k)
    ell = _ambient(lam, listed, args.ell)
    value = closed_kschur(pad(lam, ell), args.k, ell)
    print(str(value) if args.format == "pretty" else value.to_json(), file=out)
    return 0


def cmd_lower(args, out) -> int:
    lam, listed = parse_lambda(args.lam)
    _check_k(lam, args.k)
    ell = _ambient(lam, listed, args.ell)
    if args.z is None or not 1 <= args.z <= ell:
        raise UsageError(f"--z must lie in [1, {ell}]")
    lam = pad(lam, ell)
    exp = lower_closed(lam, args.k, ell, args.z)
    _emit_expansion(exp, args.format, out)
    status = 0
    if args.z not in strict_positions(lam):
        direct_ok = exp.evaluate() == lowered_value(lam, args.k, ell, [args.z])
        print(f"direct expansion: {'agree' if direct_ok else 'disagree'} "
              f"(lambda_{args.z} = lambda_{args.z + 1}, outside the guaranteed range)", file=out)
    if args.oracle:
        oracle = expand_in_gtilde(lowered_value(lam, args.k, ell, [args.z]), args.k)
        _emit_expansion(oracle, args.format, out)
        agree = oracle.terms == exp.terms
        print("agree" if agree else "disagree", file=out)
        if not agree and args.z in strict_positions(lam):
            status = 1
    return status


def cmd_dualpieri(args, out) -> int:
    lam, listed = parse_lambda(args.lam)
    _check_k(lam, args.k)
    m = 1 if args.m is None else args.m
    if lam and is_strict(lam) and not args.oracle:
        _emit_expansion(dual_pieri(lam, args.k, len(lam), m), args.format, out)
        return 0
    record = check_dual_pieri(lam, args.k, m)
    _emit_records([record], args.format, out)
    return 0 if record["holds"] or record["theorem"] == "conjecture" else 1


def cmd_branch(args, out) -> int:
    lam, _ = parse_lambda(args.lam)
    _check_k(lam, args.k)
    exp = branch_oracle(lam, args.k)
    _emit_expansion(exp, args.format, out)
    ok = shift_invariance_holds(lam, args.k)
    print(f"shift invariance: {'holds' if ok else 'fails'}", file=out)
    return 0 if ok else 1


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    ks: range
    ell_max: int
    size_max: Optional[int]
    strict: bool
    ms: Optional[range]
    jobs: int
    cache_dir: Optional[str]
    fmt: str
    seed: int

    def __post_init__(self):
        if self.mode not in ("dualpieri", "branch", "aim1", "selftest"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.ell_max < 1 or not self.ks:
            raise UsageError("empty sweep range")


def sweep_tasks(cfg: SweepConfig) -> list[tuple]:
    """One task per (k, lambda); a task covers every m for that lambda."""
    tasks: list[tuple] = []
    if cfg.mode == "aim1":
        size = cfg.size_max if cfg.size_max is not None else 10
        lams = enumerate_partitions(size, size, max_length=cfg.ell_max)
        return [("aim1", lam, 0, None) for lam in lams if lam]
    for k in cfg.ks:
        size = cfg.size_max if cfg.size_max is not None else k * cfg.ell_max
        for lam in enumerate_partitions(k, size, max_length=cfg.ell_max):
            if not lam or (cfg.strict and not is_strict(lam)):
                continue
            tasks.append((cfg.mode, lam, k, cfg.ms))
    return tasks


def run_task(task: tuple) -> list[dict]:
    mode, lam, k, ms = task
    if mode == "aim1":
        return [check_aim1(lam)]
    if mode == "branch":
        return [check_branch(lam, k)]
    return [check_dual_pieri(lam, k, m) for m in range(len(lam) + 1) if ms is None or m in ms]


def _init_worker(cache_dir: Optional[str]) -> None:
    cache.configure(cache_dir)


def run_sweep(cfg: SweepConfig) -> Iterator[dict]:
    tasks = sweep_tasks(cfg)
    if cfg.jobs == 1:
        for t in tasks:
            yield from run_task(t)
        return
    # map preserves task order, so the report does not depend on scheduling
    with ProcessPoolExecutor(cfg.jobs, initializer=_init_worker, initargs=(cfg.cache_dir,)) as pool:
        for records in pool.map(run_task, tasks, chunksize=1):
            yield from records


def _tsv_rows(record: dict) -> Iterator[list]:
    lam = record["λ"]
    m = record["m"]
    shift = m or 0
    ell = len(lam)
    if "terms" not in record:
        # the aim1 identity has one term, g_{lambda - 1^l}
        mu = [p - 1 for p in lam]
        yield [record["k"], ell, ",".join(map(str, lam)), m, ",".join(map(str, mu)), 1,
               str(record["holds"]).lower()]
        return
    for t in record["terms"]:
        mu = t["index"]
        ok = Fraction(t["coeff"]) * expected_sign(lam, mu, shift) >= 0
        yield [record["k"], ell, ",".join(map(str, lam)), "" if m is None else m,
               ",".join(map(str, mu)), t["coeff"], str(ok).lower()]


def _emit_records(records: Iterable[dict], fmt: str, out) -> tuple[int, int]:
    """Write records; return (guaranteed failures, observed-only violations)."""
    bad = observed = 0
    writer = None
    if fmt == "tsv":
        writer = csv.writer(out, delimiter="\t", lineterminator="\n")
        writer.writerow(TSV_COLUMNS)
    for rec in records:
        if not rec["holds"]:
            if rec["theorem"] == "conjecture":
                observed += 1
            else:
                bad += 1
        if fmt == "json":
            print(dumps(rec), file=out)
        elif fmt == "tsv":
            for row in _tsv_rows(rec):
                writer.writerow(row)
        else:
            status = "holds" if rec["holds"] else "VIOLATED"
            m = "" if rec["m"] is None else f" m={rec['m']}"
            k = "" if rec["theorem"] == "1.3" else f" k={rec['k']}"
            print(f"[{rec['theorem']}]{k} λ={tuple(rec['λ'])}{m}: {status}", file=out)
        out.flush()
    return bad, observed


def check_cache_entry(seed: int) -> Optional[bool]:
    """Re-derive one randomly chosen cache entry; None when the cache is empty or off."""
    files = cache.entries()
    if not files:
        return None
    path = random.Random(seed).choice(files)
    try:
        rec = json.loads(path.read_text())
        lam, k, ell = tuple(rec["lambda"]), int(rec["k"]), int(rec["ell"])
    except (OSError, ValueError, KeyError, TypeError):
        log.warning("cache entry %s is unreadable; removing it", path)
        path.unlink(missing_ok=True)
        return False
    stored = cache.load(lam, k, ell)
    cache.configure(None)
    try:
        clear_memo()
        fresh = closed_kschur(lam, k, ell)
    finally:
        cache.configure(path.parent)
    if stored != fresh:
        log.warning("cache entry %s disagrees with a fresh computation; rewriting it", path)
        cache.store(lam, k, ell, fresh)
        return False
    return True


def cmd_sweep(args, out) -> int:
    if args.mode == "selftest":
        return cmd_selftest(argparse.Namespace(lemma="all", ell=args.ell_max, seed=args.seed,
                                               format=args.format), out)
    cfg = SweepConfig(args.mode, parse_range(args.k), args.ell_max, args.size_max, args.strict,
                      parse_range(args.m, 0) if args.m is not None else None, args.jobs,
                      cache.directory() and str(cache.directory()), args.format, args.seed)
    check_cache_entry(cfg.seed)
    bad, observed = _emit_records(run_sweep(cfg), cfg.fmt, out)
    if observed:
        print(f"note: {observed} observed-only records violate the sign pattern", file=sys.stderr)
    return 1 if bad else 0


# --------------------------------------------------------------------------
# self test


def selftest_report(lemma: str, ell_max: int, seed: int) -> Iterator[tuple[str, int, suites.Tally]]:
    names = ["relations", *suites.SUITES] if lemma == "all" else [lemma]
    for name in names:
        if name == "relations":
            yield name, ell_max, suites.run(suites.relation_verdicts(seed, ell_max=ell_max))
            continue
        if name not in suites.SUITES:
            raise UsageError(f"unknown lemma {name!r}; choose from relations, {', '.join(suites.SUITES)}")
        for ell in range(1, ell_max + 1):
            if name == "nilpotence":
                yield name, ell, suites.run(suites.nilpotence_verdicts(ell, seed=seed))
            else:
                yield name, ell, suites.run(suites.SUITES[name](ell))


def cmd_selftest(args, out) -> int:
    failures = 0
    for name, ell, tally in selftest_report(args.lemma, args.ell, args.seed):
        failures += tally.counts["fails"]
        summary = tally.summary()
        if args.format == "json":
            print(json.dumps({"lemma": name, "ℓ": ell, **summary}, ensure_ascii=False), file=out)
        else:
            print(f"{name:<11} ℓ={ell}  instances={summary['instances']}  holds={summary['holds']}  "
                  f"fails={summary['fails']}  not_applicable={summary['not_applicable']}", file=out)
        for v in tally.failures[:5]:
            print(f"  failure: {v.spec} {v.branch or ''} {v.detail}", file=out)
        out.flush()
    return 1 if failures else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--cache-dir", help=f"on-disk expansion cache (default: ${cache.ENV_VAR})")
    shared.add_argument("--format", choices=("json", "tsv", "pretty"), default="json")
    shared.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="closedkschur", description="Closed k-Schur Katalan function toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_lambda=True):
        if need_lambda:
            sp.add_argument("--lambda", dest="lam", required=True, help="comma separated parts, e.g. 5,2,2,1")
        sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("closed", parents=[shared], help="expand a closed k-Schur Katalan function in h")
    common(sp)
    sp.add_argument("--ell", type=int)
    sp.set_defaults(func=cmd_closed)

    sp = sub.add_parser("lower", parents=[shared], help="straighten L_z applied to a closed function")
    common(sp)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--oracle", action="store_true", help="also solve by linear algebra and compare")
    sp.set_defaults(func=cmd_lower)

    sp = sub.add_parser("dualpieri", parents=[shared], help="expand G_{1^m}^perp of a closed function")
    common(sp)
    sp.add_argument("--m", type=int)
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=cmd_dualpieri)

    sp = sub.add_parser("branch", parents=[shared], help="expand a closed function in the next level's basis")
    common(sp)
    sp.set_defaults(func=cmd_branch)

    sp = sub.add_parser("sweep", parents=[shared], help="check sign patterns over a range of partitions")
    sp.add_argument("--mode", choices=("dualpieri", "branch", "aim1", "selftest"), default="dualpieri")
    sp.add_argument("--k", default="4", help="N for 1..N, or A-B")
    sp.add_argument("--ell-max", type=int, default=3)
    sp.add_argument("--size-max", type=int)
    sp.add_argument("--m", help="N for 0..N, or A-B (default: every m in [0, l])")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--strict", dest="strict", action="store_true", default=True)
    group.add_argument("--all", dest="strict", action="store_false")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("selftest", parents=[shared], help="run the enumerated identity suites")
    sp.add_argument("--lemma", default="all", help="relations, " + ", ".join(suites.SUITES) + " or all")
    sp.add_argument("--ell", type=int, default=4, help="largest length to enumerate")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.cache_dir:
        cache.configure(args.cache_dir)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
