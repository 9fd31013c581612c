"""Command-line front end: ``apery4 {list,verify,eval,discover,constants}``.

Exit codes: 0 all pass, 1 verification failure, 2 usage error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from .errors import (
    Apery4Error,
    NonConvergenceError,
    PrecisionExhaustedError,
    ResourceLimitError,
    UnknownIdError,
)
from .ledger import (
    SERIES_IDS,
    VerifyOptions,
    Workspace,
    catalog,
    format_sci,
    get_identity,
    resolve_ids,
    verify,
    verify_all,
)
from .numerics import default_max_digits, make_context
from .relations import DEFAULT_BASES, discover, parse_basis
from .series import accelerated_sum, sum_direct, tail_bound
from .special import BASIS_ORDER, basis_value

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3



class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}", self.format_usage())


@dataclass
class RunConfig:
    command: str
    ids: list = field(default_factory=list)
    digits: int = 30
    format: str = "human"
    parallelism: int = 1
    method: str | None = None
    terms: int | None = None
    basis: tuple | None = None
    max_digits: int | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apery4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, digits=True):
        p.add_argument("--format", choices=("human", "machine"), default="human")
        if digits:
            p.add_argument("--digits", type=int, default=30, help="target decimal digits (default 30)")
            p.add_argument("--max-digits", type=int, default=None,
                           help="digits ceiling; overrides APERY4_MAX_DIGITS")

    common(sub.add_parser("list", help="print the identity catalog"), digits=False)

    p = sub.add_parser("verify", help="verify catalog entries")
    common(p)
    p.add_argument("--id", action="append", default=None,
                   help="entry id, family name or 'all' (repeatable, comma lists allowed)")
    p.add_argument("--parallelism", type=int, default=os.cpu_count() or 1)
    p.add_argument("--method", choices=("direct", "accelerated", "integral"), default=None)
    p.add_argument("--terms", type=int, default=None, help="terms for direct/accelerated series")

    p = sub.add_parser("eval", help="evaluate one series or one entry's left-hand side")
    common(p)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--series", choices=SERIES_IDS)
    target.add_argument("--id")
    p.add_argument("--method", choices=("direct", "accelerated", "integral"), default=None)
    p.add_argument("--terms", type=int, default=None)

    p = sub.add_parser("discover", help="find a closed form by integer-relation detection")
    common(p)
    p.add_argument("--series", choices=SERIES_IDS, required=True)
    p.add_argument("--basis", default=None, help="comma list of basis symbols")

    common(sub.add_parser("constants", help="print the constant basis"))
    return parser


def _split_ids(raw):
    out = []
    for item in raw or ["all"]:
        out.extend(t for t in item.split(",") if t.strip())
    return out


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, format=args.format)
    if args.command == "list":
        return cfg
    cfg.digits = args.digits
    cfg.max_digits = args.max_digits
    ceiling = cfg.max_digits if cfg.max_digits is not None else default_max_digits()
    if not 1 <= cfg.digits <= ceiling:
        raise UsageError(f"apery4: error: --digits must be in [1, {ceiling}], got {cfg.digits}")
    if args.command == "verify":
        cfg.ids = resolve_ids(_split_ids(args.id))
        cfg.parallelism = args.parallelism
        if cfg.parallelism < 1:
            raise UsageError("apery4: error: --parallelism must be >= 1")
    if args.command in ("verify", "eval"):
        cfg.method, cfg.terms = args.method, args.terms
        if cfg.terms is not None and cfg.terms < 20:
            raise UsageError("apery4: error: --terms must be >= 20")
    if args.command == "eval":
        cfg.ids = [args.series] if args.series else [get_identity(args.id).id]
    if args.command == "discover":
        cfg.ids = [args.series]
        try:
            cfg.basis = parse_basis(args.basis) if args.basis else DEFAULT_BASES[args.series]
        except ValueError as exc:
            raise UsageError(f"apery4: error: {exc}") from None
    return cfg


# --------------------------------------------------------------------------
# commands


def _emit(record: dict, out):
    out.write(json.dumps(record) + "\n")
    out.flush()


def cmd_list(cfg, out):
    entries = catalog()
    if cfg.format == "machine":
        for e in entries:
            _emit({"id": e.id, "family": e.family, "anchor": e.anchor,
                   "description": e.description}, out)
        return EXIT_OK
    w = max(len(e.id) for e in entries)
    a = max(len(e.anchor) for e in entries)
    for e in entries:
        out.write(f"{e.id:<{w}}  {e.anchor:<{a}}  {e.description}\n")
    return EXIT_OK


def _iter_reports(cfg, ctx):
    options = VerifyOptions(method=cfg.method, terms=cfg.terms)
    if cfg.parallelism == 1:
        ws = Workspace(ctx)
        for i in cfg.ids:
            yield verify(i, ctx, options, ws)
    else:
        yield from verify_all(ctx, cfg.parallelism, cfg.ids, options)


def cmd_verify(cfg, out):
    ctx = make_context(cfg.digits, max_digits=cfg.max_digits)
    w = max(len(i) for i in cfg.ids)
    if cfg.format == "human":
        out.write(f"{'id':<{w}}  {'status':<13}  {'digits':>6}  {'abs_residual':<12}  method\n")
    statuses = []
    for r in _iter_reports(cfg, ctx):
        statuses.append(r.status)
        if cfg.format == "machine":
            _emit(r.to_record(), out)
        else:
            out.write(f"{r.id:<{w}}  {r.status:<13}  {r.digits_agreed:>6}  "
                      f"{format_sci_short(r.abs_residual):<12}  {r.method}\n")
            out.flush()
    if cfg.format == "human":
        passed = statuses.count("pass")
        out.write(f"{passed}/{len(statuses)} passed at {cfg.digits} digits\n")
    if "fail" in statuses:
        return EXIT_FAIL
    if "non-converged" in statuses:
        return EXIT_NONCONVERGED
    return EXIT_OK


def format_sci_short(s: str) -> str:
    if s == "nan" or "e" not in s:
        return s
    mant, exp = s.split("e")
    return f"{mant[:5]}e{exp}"


def _eval_value(cfg, ctx):
    """Value, gauge and method label for ``eval``."""
    target = cfg.ids[0]
    if target in SERIES_IDS and cfg.method == "accelerated":
        ex = accelerated_sum(target, ctx, N=cfg.terms or 20000)
        return ex.value, ex.gauge, f"accelerated:{ex.method}"
    if target in SERIES_IDS and cfg.method == "direct":
        N = cfg.terms or 10000
        ps = sum_direct(target, N, ctx)
        return ps.values[-1], tail_bound(target, N, ctx), f"direct(N={N}), gauge = tail bound"
    if target in SERIES_IDS:
        value = Workspace(ctx).get(("series", target))
        finer = Workspace(make_context(ctx.target_digits + 10, max_digits=ctx.target_digits + 10))
        ref = finer.value(("series", target))
        return value.value, abs(value.value - ref), f"{value.note}, gauge = refinement difference"
    entry = get_identity(target)
    ev = entry.lhs.evaluate(Workspace(ctx))
    finer_ctx = make_context(ctx.target_digits + 10, max_digits=ctx.target_digits + 10)
    ref = entry.lhs.evaluate(Workspace(finer_ctx)).value
    return ev.value, abs(ev.value - ref), f"{ev.note or entry.lhs.label}, gauge = refinement difference"


def cmd_eval(cfg, out):
    ctx = make_context(cfg.digits, max_digits=cfg.max_digits)
    value, gauge, method = _eval_value(cfg, ctx)
    record = {
        "id": cfg.ids[0],
        "method": method,
        "value": format_sci(value, cfg.digits),
        "gauge": format_sci(gauge, 3),
    }
    if cfg.format == "machine":
        _emit(record, out)
    else:
        for k, v in record.items():
            out.write(f"{k:<7} {v}\n")
    return EXIT_OK


def cmd_discover(cfg, out):
    ctx = make_context(cfg.digits, max_digits=cfg.max_digits)
    d = discover(cfg.ids[0], cfg.basis, ctx)
    labels = [cfg.ids[0]] + [s.name for s in d.basis]
    record = {
        "series": d.series_id,
        "status": d.status,
        "basis": [s.name for s in d.basis],
        "coefficients": (
            [str(d.candidate.coefficient(s)) for s in d.basis] if d.candidate else None
        ),
        "closed_form": str(d.candidate) if d.candidate else None,
        "relation": list(d.relation.coefficients) if d.relation else None,
        "relation_residual": format_sci(d.relation.residual, 3) if d.relation else None,
        "reverify_digits": d.reverify_digits,
        "reverify_residual": format_sci(d.reverify_residual, 3),
    }
    if cfg.format == "machine":
        _emit(record, out)
    else:
        out.write(f"series     {d.series_id}\n")
        out.write(f"status     {d.status}\n")
        if d.relation is not None:
            out.write(f"relation   {d.relation.describe(labels)}\n")
        if d.candidate is not None:
            out.write(f"candidate  {d.series_id} = {d.candidate}\n")
            out.write(f"reverified at {d.reverify_digits} digits, residual {record['reverify_residual']}\n")
    return EXIT_OK if d.status == "verified" else EXIT_FAIL


def cmd_constants(cfg, out):
    ctx = make_context(cfg.digits, max_digits=cfg.max_digits)
    w = max(len(s.name) for s in BASIS_ORDER)
    for sym in BASIS_ORDER:
        value = format_sci(basis_value(sym, ctx), cfg.digits)
        if cfg.format == "machine":
            _emit({"symbol": sym.name, "expression": sym.value, "value": value}, out)
        else:
            out.write(f"{sym.name:<{w}}  {value}  {sym.value}\n")
    return EXIT_OK


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "eval": cmd_eval,
    "discover": cmd_discover,
    "constants": cmd_constants,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except (UsageError, UnknownIdError, ResourceLimitError) as exc:
        synopsis = exc.args[1] if isinstance(exc, UsageError) and len(exc.args) > 1 else None
        sys.stderr.write(synopsis or build_parser().format_usage())
        message = exc.args[0] if isinstance(exc, UsageError) else f"apery4: error: {exc}"
        print(message, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return COMMANDS[cfg.command](cfg, out)
    except (NonConvergenceError, PrecisionExhaustedError) as exc:
        print(f"apery4: non-converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except Apery4Error as exc:
        print(f"apery4: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
