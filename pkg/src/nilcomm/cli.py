"""Command line interface.

Exit codes: 0 success, 1 usage or parse error, 2 a mathematical check failed
or a report carries anomaly flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources

from . import __version__
from .algebra import gorenstein_consistency, hilbert_function
from .commutator import jordan_matrix, sample_nilpotent_commuting, sample_rng, verify_lemma1
from .dmap import DEFAULT_SAMPLES, DMapReport, verify_partition, verify_theorem
from .exactmat import DEFAULT_PRIME, PrimeField
from .partition import (
    Partition,
    PartitionError,
    ar_count,
    d_closed_form,
    has_gaps_ge_two,
    lambda_of_H,
    macaulay_admissible,
    oblak_index,
    partitions_of,
)

SCHEMA_VERSION = 1
SCHEMA_RESOURCE = "schema/nilcomm-output.v1.schema.json"
TABLE_COLUMNS = ["lambda", "n", "r", "oblak_index", "d_estimated", "d_closed_form", "stable", "flags"]

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    format: str = "text"
    jobs: int | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("--samples must be at least 1")
        try:
            PrimeField(self.prime)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.prime)

    def header(self) -> dict:
        # jobs is deliberately absent: output must not depend on parallelism
        return {"prime": self.prime, "seed": self.seed, "samples": self.samples}


def load_schema() -> dict:
    return json.loads(resources.files("nilcomm").joinpath(SCHEMA_RESOURCE).read_text())


def _envelope(command: str, cfg: RunConfig, result: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "nilcomm",
        "version": __version__,
        "command": command,
        "config": cfg.header(),
        "result": result,
    }


def _fmt(p: Partition | None) -> str:
    return "" if p is None else f"({p})"


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _parse_partition(text: str) -> Partition:
    try:
        lam = Partition.parse(text)
    except PartitionError as exc:
        raise UsageError(f"invalid partition {text!r}: {exc}") from None
    if not lam.parts:
        raise UsageError("partition must be nonempty")
    return lam


def _parse_target(text: str) -> int | Partition:
    """A bare integer is ``n``; anything with ``,`` or ``^`` is a partition."""
    stripped = text.strip()
    if stripped.isdigit():
        n = int(stripped)
        if n < 1:
            raise UsageError("n must be positive")
        return n
    return _parse_partition(stripped)


def _table_row(rep: DMapReport) -> dict:
    return {
        "lambda": str(rep.lam),
        "n": rep.lam.n,
        "r": rep.r,
        "oblak_index": rep.oblak_index,
        "d_estimated": str(rep.estimated_D),
        "d_closed_form": "" if rep.closed_form is None else str(rep.closed_form),
        "stable": str(rep.stable).lower(),
        "flags": ";".join(rep.flags + rep.failed_checks),
    }


# --- subcommands ----------------------------------------------------------


def partition_info(lam: Partition) -> dict:
    r, decomp = ar_count(lam)
    closed = d_closed_form(lam)
    return {
        "lambda": list(lam.parts),
        "lambda_power": lam.power_notation(),
        "n": lam.n,
        "r": r,
        "ar_blocks": [list(g) for g in decomp.groups(lam)],
        "oblak_index": oblak_index(lam),
        "gaps_ge_two": has_gaps_ge_two(lam),
        "d_closed_form": list(closed.parts) if closed else None,
        "ferrers": lam.ferrers().split("\n"),
    }


def cmd_partition_info(text: str, cfg: RunConfig) -> tuple[str, int]:
    lam = _parse_partition(text)
    info = partition_info(lam)
    if cfg.format == "json":
        return json.dumps(_envelope("info", cfg, info), indent=2), EXIT_OK
    if cfg.format == "csv":
        row = {
            "lambda": str(lam),
            "n": lam.n,
            "r": info["r"],
            "oblak_index": info["oblak_index"],
            "gaps_ge_two": str(info["gaps_ge_two"]).lower(),
            "d_closed_form": "" if info["d_closed_form"] is None else str(d_closed_form(lam)),
        }
        return _csv([row], list(row)), EXIT_OK
    blocks = " | ".join(",".join(map(str, g)) for g in info["ar_blocks"])
    closed = d_closed_form(lam)
    lines = [
        f"lambda       ({lam})  [{lam.power_notation()}]",
        f"n            {lam.n}",
        f"r            {info['r']}  blocks: {blocks}",
        f"oblak index  {info['oblak_index']}",
        f"gaps >= 2    {str(info['gaps_ge_two']).lower()}",
        f"closed form  {_fmt(closed) if closed else 'not applicable (r >= 3)'}",
        "",
        lam.ferrers(),
    ]
    return "\n".join(lines), EXIT_OK


def cmd_dmap(text: str, cfg: RunConfig) -> tuple[str, int]:
    lam = _parse_partition(text)
    rep = verify_partition(lam, cfg.samples, cfg.field, cfg.seed, with_hilbert=True)
    code = EXIT_CHECK if rep.flags or rep.failed_checks else EXIT_OK
    if cfg.format == "json":
        return json.dumps(_envelope("dmap", cfg, rep.to_dict()), indent=2), code
    if cfg.format == "csv":
        return _csv([_table_row(rep)], TABLE_COLUMNS), code
    closed = rep.closed_form
    if closed is None:
        agreement = "not applicable (r >= 3)"
    else:
        agreement = f"{_fmt(closed)} " + ("agrees" if closed == rep.estimated_D else "DISAGREES")
    types = ", ".join(f"{_fmt(t)} x{c}" for t, c in sorted(
        rep.type_counts.items(), key=lambda kv: kv[0].parts, reverse=True))
    lines = [
        f"lambda        ({rep.lam})",
        f"D(lambda)     {_fmt(rep.estimated_D)}" + ("  stable" if rep.stable else ""),
        f"closed form   {agreement}",
        f"r             {rep.r}",
        f"max index     {rep.index_observed} (oblak index {rep.oblak_index})",
        f"max(l(H))     {_fmt(rep.hilbert_max)}",
        f"sample types  {types}",
        f"checks        " + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in rep.checks.items()),
        f"flags         {', '.join(rep.flags) or 'none'}",
        f"prime {rep.prime}, seed {rep.seed}, samples {rep.samples}",
    ]
    return "\n".join(lines), code


def _targets(target: int | Partition) -> list[Partition]:
    return list(partitions_of(target)) if isinstance(target, int) else [target]


def _verify_lemma1(target, cfg: RunConfig) -> list[dict]:
    rows = []
    for lam in _targets(target):
        rep = verify_lemma1(lam, cfg.field, 10, sample_rng(cfg.seed, lam, 0, purpose=2))
        rows.append({"lambda": list(lam.parts), "ok": rep.ok, "failures": rep.failures(),
                     "detail": rep.to_dict()})
    return rows


def _sample_pairs(lam: Partition, cfg: RunConfig):
    b = jordan_matrix(lam, cfg.field)
    for i in range(cfg.samples):
        a = sample_nilpotent_commuting(lam, cfg.field, sample_rng(cfg.seed, lam, i))
        yield i, a, b


def _verify_gorenstein(target, cfg: RunConfig) -> list[dict]:
    rows = []
    for lam in _targets(target):
        failures, hilberts = [], set()
        dims, socles = set(), set()
        for i, a, b in _sample_pairs(lam, cfg):
            rep = gorenstein_consistency(a, b, sample_rng(cfg.seed, lam, i, purpose=1))
            dims.add(rep.dim)
            socles.add(rep.socle)
            hilberts.add(rep.hilbert.values)
            problems = list(rep.violations)
            if rep.dim != lam.n:
                problems.append(f"dim A = {rep.dim} != {lam.n}")
            if not rep.skipped:
                if not (rep.cyclic and rep.cocyclic):
                    problems.append(f"cyclic={rep.cyclic} cocyclic={rep.cocyclic}")
                if rep.socle != 1:
                    problems.append(f"socle dimension {rep.socle}")
                if not rep.admissible:
                    problems.append(f"H={rep.hilbert} not Macaulay-admissible")
            failures.extend(f"sample {i}: {p}" for p in problems)
        rows.append({
            "lambda": list(lam.parts),
            "ok": not failures,
            "failures": failures,
            "detail": {
                "algebra_dims": sorted(dims),
                "socle_dims": sorted(socles),
                "hilbert_functions": [list(h) for h in sorted(hilberts)],
            },
        })
    return rows


def _verify_macaulay(target, cfg: RunConfig) -> list[dict]:
    rows = []
    for lam in _targets(target):
        failures, hilberts = [], set()
        for i, a, b in _sample_pairs(lam, cfg):
            H = hilbert_function(a, b)
            hilberts.add(H.values)
            if not macaulay_admissible(H):
                failures.append(f"sample {i}: H={H} not admissible")
            elif not has_gaps_ge_two(lambda_of_H(H)):
                failures.append(f"sample {i}: lambda(H)={lambda_of_H(H)} has a gap below 2")
        rows.append({
            "lambda": list(lam.parts),
            "ok": not failures,
            "failures": failures,
            "detail": {"hilbert_functions": [list(h) for h in sorted(hilberts)]},
        })
    return rows


def _verify_idempotent(target, cfg: RunConfig) -> tuple[list[dict], dict | None]:
    if isinstance(target, int):
        sweep = verify_theorem(target, cfg.samples, cfg.field, cfg.seed, cfg.jobs)
        reports, summary = sweep.reports, sweep.summary()
    else:
        reports = [verify_partition(target, cfg.samples, cfg.field, cfg.seed, with_hilbert=False)]
        summary = None
    rows = [
        {
            "lambda": list(rep.lam.parts),
            "ok": not (rep.failed_checks or rep.flags),
            "failures": rep.failed_checks + rep.flags,
            "detail": rep.to_dict(),
        }
        for rep in reports
    ]
    return rows, summary


def cmd_verify(kind: str, target_text: str, cfg: RunConfig) -> tuple[str, int]:
    target = _parse_target(target_text)
    summary = None
    if kind == "idempotent":
        rows, summary = _verify_idempotent(target, cfg)
    elif kind == "lemma1":
        rows = _verify_lemma1(target, cfg)
    elif kind == "gorenstein":
        rows = _verify_gorenstein(target, cfg)
    elif kind == "macaulay":
        rows = _verify_macaulay(target, cfg)
    else:
        raise UsageError(f"unknown verification kind {kind!r}")
    ok = all(row["ok"] for row in rows)
    code = EXIT_OK if ok else EXIT_CHECK
    if cfg.format == "json":
        result = {
            "kind": kind,
            "target": target if isinstance(target, int) else list(target.parts),
            "partitions": len(rows),
            "ok": ok,
            "summary": summary,
            "rows": rows,
        }
        return json.dumps(_envelope("verify", cfg, result), indent=2), code
    if cfg.format == "csv":
        table = [{"lambda": ",".join(map(str, r["lambda"])), "ok": str(r["ok"]).lower(),
                  "failures": " | ".join(r["failures"])} for r in rows]
        return _csv(table, ["lambda", "ok", "failures"]), code
    lines = [f"verify {kind}: {len(rows)} partition(s)"]
    for row in rows:
        lam = ",".join(map(str, row["lambda"]))
        lines.append(f"  ({lam}) {'ok' if row['ok'] else 'FAIL'}")
        lines.extend(f"      {msg}" for msg in row["failures"])
    if summary:
        lines.extend(f"  {name}: {str(val).lower()}" for name, val in summary.items())
    lines.append(f"{'PASS' if ok else 'FAIL'} ({sum(r['ok'] for r in rows)}/{len(rows)})")
    return "\n".join(lines), code


def cmd_table(n: int, cfg: RunConfig) -> tuple[str, int]:
    if n < 1:
        raise UsageError("n must be positive")
    sweep = verify_theorem(n, cfg.samples, cfg.field, cfg.seed, cfg.jobs)
    rows = [_table_row(rep) for rep in sweep.reports]
    code = EXIT_OK if sweep.ok else EXIT_CHECK
    if cfg.format == "json":
        result = {"n": n, "columns": TABLE_COLUMNS, "rows": rows}
        return json.dumps(_envelope("table", cfg, result), indent=2), code
    if cfg.format == "csv":
        return _csv(rows, TABLE_COLUMNS), code
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in TABLE_COLUMNS}
    lines = ["  ".join(c.ljust(widths[c]) for c in TABLE_COLUMNS)]
    lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in TABLE_COLUMNS) for r in rows]
    return "\n".join(line.rstrip() for line in lines), code


# --- argument handling ----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("NILCOMM_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"NILCOMM_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME,
                        help="prime modulus below 2**31 (default %(default)s)")
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (default $NILCOMM_SEED or 0)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="samples per partition (default %(default)s)")
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes for sweeps (default: all CPUs)")

    parser = _Parser(prog="nilcomm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nilcomm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", parents=[common], help="partition combinatorics")
    p.add_argument("partition", help='e.g. "4,3,2,1" or "4^2,3^2,2"')

    p = sub.add_parser("dmap", parents=[common], help="estimate D(lambda) by sampling")
    p.add_argument("partition")

    p = sub.add_parser("verify", parents=[common], help="run a verification")
    p.add_argument("kind", choices=["idempotent", "lemma1", "gorenstein", "macaulay"])
    p.add_argument("target", help="n (every partition of n) or a partition such as 4^2,3")

    p = sub.add_parser("table", parents=[common], help="one row per partition of n")
    p.add_argument("n", type=int)

    return parser


def run(argv: list[str] | None = None) -> tuple[str, int]:
    args = build_parser().parse_args(argv)
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = RunConfig(args.prime, seed, args.samples, args.format, args.jobs)
    if args.command == "info":
        return cmd_partition_info(args.partition, cfg)
    if args.command == "dmap":
        return cmd_dmap(args.partition, cfg)
    if args.command == "verify":
        return cmd_verify(args.kind, args.target, cfg)
    return cmd_table(args.n, cfg)


def main(argv: list[str] | None = None) -> int:
    try:
        out, code = run(argv)
    except UsageError as exc:
        print(f"nilcomm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
