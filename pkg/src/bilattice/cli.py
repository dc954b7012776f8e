"""Command-line front end.

Exit status: 0 on success, 2 when a mathematical check fails or a
precondition is violated (the offending index n is reported on stderr),
1 on usage errors such as malformed scalars or polynomials.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import selftest
from .classical import PearsonPair, recurrence_coeffs, regular, rodrigues
from .classifier import classify
from .errors import BilatticeError, MathematicalError, ParseError
from .families import (PARAMS, FamilyDescriptor, family_recurrence, identity_names,
                       resolve_identity, verify_identity)
from .functional import solve_pearson_moments
from .scalar import as_scalar

FORMATS = ("json", "csv", "pretty")
FAMILY_FLAGS = sorted({name for names in PARAMS.values() for name in names})


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Report:
    """What a subcommand produces: a JSON payload, CSV rows and an exit code."""

    payload: object
    rows: list = field(default_factory=list)
    code: int = 0
    diagnostics: list = field(default_factory=list)
    lines: Optional[list] = None      # preferred pretty rendering, when set


# -- rendering -------------------------------------------------------------------

def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in report.rows or _flatten_rows(report.payload):
            writer.writerow(row)
        return buf.getvalue()
    return "\n".join(_pretty(report.payload)) + "\n"


def _flatten_rows(payload, prefix: str = "") -> list:
    rows = [["key", "value"]] if not prefix else []
    if isinstance(payload, dict):
        for k, v in payload.items():
            rows += _flatten_rows(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(payload, list):
        for i, v in enumerate(payload):
            rows += _flatten_rows(v, f"{prefix}[{i}]")
    else:
        rows.append([prefix, "" if payload is None else str(payload)])
    return rows


def _pretty(payload, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v and not _is_flat_list(v):
                lines.append(f"{pad}{k}:")
                lines += _pretty(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(payload, list):
        for v in payload:
            if isinstance(v, (dict, list)) and not _is_flat_list(v):
                lines.append(f"{pad}-")
                lines += _pretty(v, indent + 1)
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(payload)}")
    return lines


def _is_flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def _table_rows(table) -> list:
    rows = [["n", "B_n", "C_n", "h_n"]]
    for n in range(table.order + 1):
        c = "" if n == 0 else str(table.c(n))
        rows.append([n, str(table.B[n]), c, str(table.h[n])])
    return rows


# -- subcommands -----------------------------------------------------------------

def _pair(args) -> PearsonPair:
    if args.phi is None or args.psi is None:
        raise UsageError("--phi and --psi are required")
    try:
        return PearsonPair(args.phi, args.psi, args.gamma)
    except ParseError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_regularity(args) -> Report:
    p = _pair(args)
    verdict = regular(p, args.order)
    payload = {"pair": p.to_json(), **verdict.to_json()}
    diag = [] if verdict.ok else [f"{verdict.message} (n={verdict.failed_at})"]
    return Report(payload, code=0 if verdict.ok else 2, diagnostics=diag)


def cmd_recurrence(args) -> Report:
    p = _pair(args)
    table = recurrence_coeffs(p, args.order, m0=as_scalar(args.m0), formal=args.formal)
    return Report(table.to_json(), _table_rows(table))


def cmd_moments(args) -> Report:
    p = _pair(args)
    u = solve_pearson_moments(p, as_scalar(args.m0), args.order)
    payload = {**u.to_json(), "sigma_free": u.is_sigma_free(),
               "first_sigma_residue": u.first_sigma_residue()}
    rows = [["k", "m_k", "sigma_part"]]
    rows += [[k, str(m.plain), str(m.sigma)] for k, m in enumerate(u.moments)]
    diag = [] if u.is_sigma_free() else [
        f"moment m_{u.first_sigma_residue()} keeps a sigma part (n={u.first_sigma_residue()})"]
    return Report(payload, rows, 0 if u.is_sigma_free() else 2, diag)


def cmd_rodrigues(args) -> Report:
    p = _pair(args)
    data = rodrigues(p, args.order, check_functional=not args.no_functional)
    rows = [["n", "a_n", "s_n", "t_n", "k_n", "R_n"]]
    for n in range(args.order + 1):
        rows.append([n,
                     str(data.a[n]) if n < len(data.a) else "",
                     str(data.s[n]) if n < len(data.s) else "",
                     str(data.t[n - 1]) if 1 <= n <= len(data.t) else "",
                     str(data.k[n]), " ".join(str(c) for c in data.R[n])])
    ok = data.monic_match and data.functional_check is not False
    return Report(data.to_json(), rows, 0 if ok else 2, list(data.failures[:5]))


def cmd_classify(args) -> Report:
    cl = classify(_pair(args))
    payload = cl.to_json()
    if args.order is not None:
        payload["table"] = cl.table(args.order).to_json()
    return Report(payload)


def _family_params(args) -> dict:
    params = {}
    for name in FAMILY_FLAGS:
        value = getattr(args, f"param_{name}", None)
        if value is not None:
            params[name] = value
    return params


def cmd_family(args) -> Report:
    kind = _canonical_kind(args.kind)
    try:
        desc = FamilyDescriptor.make(kind, branch=args.branch, **_family_params(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = family_recurrence(desc, args.order)
    return Report({"family": desc.to_json(), "table": table.to_json()}, _table_rows(table))


def _canonical_kind(text: str) -> str:
    lookup = {k.lower().replace("-", ""): k for k in PARAMS}
    key = text.lower().replace("-", "").replace("_", "")
    if key not in lookup:
        raise UsageError(f"unknown family {text!r}; expected one of {', '.join(PARAMS)}")
    return lookup[key]


def cmd_verify_identity(args) -> Report:
    if args.identity == "all":
        jobs = [(name, params) for name, points in selftest.IDENTITY_POINTS.items()
                for params in points]
    else:
        try:
            resolve_identity(args.identity)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        jobs = [(args.identity, _family_params(args))]
    reports = _fan_out(lambda job: verify_identity(job[0], job[1], args.order), jobs, args.workers)
    rows = [["identity", "params", "n", "B_ok", "C_ok"]]
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in r.params)
        rows += [[r.identity, params, n, b, c] for n, b, c in r.rows]
    failed = [r for r in reports if not r.passed]
    diag = [f"{r.identity}: {r.failures[0]}" for r in failed]
    payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    return Report(payload, rows, 2 if failed else 0, diag)


def cmd_selftest(args) -> Report:
    only = None
    if args.only:
        try:
            only = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise UsageError(f"--only expects comma-separated criterion numbers, got {args.only!r}") from None
        unknown = [n for n in only if n not in selftest.CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}")
    results = selftest.run_all(args.seed, args.workers, only)
    rows = [["criterion", "title", "passed", "checks", "first_failure"]]
    rows += [[r.number, r.title, r.passed, r.checks, r.failures[0] if r.failures else ""]
             for r in results]
    payload = {"seed": args.seed, "results": [r.to_json() for r in results]}
    code = 0 if all(r.passed for r in results) else 2
    return Report(payload, rows, code, lines=[r.line() for r in results])


def _fan_out(fn, jobs: Sequence, workers: int) -> list:
    """Map over jobs on worker threads; results keep the order of ``jobs``."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


COMMANDS = {
    "regularity": cmd_regularity,
    "recurrence": cmd_recurrence,
    "moments": cmd_moments,
    "rodrigues": cmd_rodrigues,
    "classify": cmd_classify,
    "family": cmd_family,
    "verify-identity": cmd_verify_identity,
    "selftest": cmd_selftest,
}


# -- argument parsing --------------------------------------------------------------

def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("the order must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED,
                        help="seed for randomized checks (BILATTICE_SEED overrides)")
    common.add_argument("--workers", type=int, default=1, help="worker threads for fan-out")

    pearson = _Parser(add_help=False)
    pearson.add_argument("--phi", help="phi, degree <= 2, e.g. 'z^2+1/4'")
    pearson.add_argument("--psi", help="psi, degree <= 1, e.g. 'z-2/15'")
    pearson.add_argument("--gamma", default="0", help="lattice parameter, e.g. '1/3' or '1/2i'")

    def order(p, default=8):
        p.add_argument("-N", "--order", type=_nonneg, default=default)

    family = _Parser(add_help=False)
    for name in FAMILY_FLAGS:
        family.add_argument(f"--{name}", dest=f"param_{name}", default=None)
    family.add_argument("--branch", type=int, choices=(1, -1), default=1)
    family.add_argument("-n", "--order", type=_nonneg, default=10)

    parser = _Parser(prog="bilattice", description="Exact orthogonal-polynomial computations on the bi-lattice.")
    parser.add_argument("--config", help="JSON job file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("regularity", parents=[common, pearson], help="regularity verdict")
    order(p)
    p = sub.add_parser("recurrence", parents=[common, pearson], help="B_n, C_n, h_n table")
    order(p)
    p.add_argument("--m0", default="1")
    p.add_argument("--formal", action="store_true",
                   help="evaluate removable singularities as limits; stop at a vanishing C")
    p = sub.add_parser("moments", parents=[common, pearson], help="Pearson moment table")
    order(p)
    p.add_argument("--m0", default="1")
    p = sub.add_parser("rodrigues", parents=[common, pearson], help="Rodrigues data and checks")
    order(p, default=6)
    p.add_argument("--no-functional", action="store_true", help="skip the functional check")
    p = sub.add_parser("classify", parents=[common, pearson], help="H/Q classification")
    p.add_argument("-N", "--order", type=_nonneg, default=None,
                   help="also rebuild the recurrence table up to this order")
    p = sub.add_parser("family", parents=[common, family], help="family recurrence table")
    p.add_argument("kind", help=", ".join(PARAMS))
    p = sub.add_parser("verify-identity", parents=[common, family], help="check a family identity")
    p.add_argument("identity", help=", ".join(identity_names() + ["all"]))
    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _config_argv(path: str) -> list:
    """Turn a JSON job file into leading command-line tokens."""
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(config, dict) or "command" not in config:
        raise UsageError("config must be a JSON object with a 'command' field")
    argv = [str(config["command"])]
    for key in ("identity", "kind"):
        if key in config:
            argv.append(str(config[key]))
    for key in ("phi", "psi", "gamma", "order", "format", "seed", "m0", "workers", "only",
                "branch"):
        if key in config:
            argv += [f"--{key}", str(config[key])]
    for key in ("formal", "no_functional"):
        if config.get(key):
            argv.append("--" + key.replace("_", "-"))
    for name, value in (config.get("params") or {}).items():
        argv += [f"--{name}", str(value)]
    return argv


def _merge_config(argv: list) -> list:
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    base = _config_argv(known.config)
    if rest and rest[0] in COMMANDS:
        if rest[0] != base[0]:
            raise UsageError(f"command {rest[0]!r} conflicts with config command {base[0]!r}")
        rest = rest[1:]
    # later flags win in argparse, so command-line values override the file
    return base + rest


def main(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _merge_config(argv)
        parser = build_parser()
        if not argv or argv[0] in ("-h", "--help"):
            stdout.write(parser.format_help())
            return 0 if argv else 1
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        env_seed = os.environ.get("BILATTICE_SEED")
        if env_seed is not None:
            try:
                args.seed = int(env_seed)
            except ValueError:
                raise UsageError(f"BILATTICE_SEED must be an integer, got {env_seed!r}") from None
        report = COMMANDS[args.command](args)
    except SystemExit as exc:  # --help inside a subcommand
        return int(exc.code or 0)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 1
    except ParseError as exc:
        where = f" (position {exc.position})" if exc.position is not None else ""
        stderr.write(f"parse error{where}: {exc}\n")
        return 1
    except MathematicalError as exc:
        index = f" (n={exc.index})" if exc.index is not None else ""
        stderr.write(f"mathematical error{index}: {exc}\n")
        return 2
    except BilatticeError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    if args.format == "pretty" and report.lines is not None:
        stdout.write("\n".join(report.lines) + "\n")
    else:
        stdout.write(render(report, args.format))
    for line in report.diagnostics:
        stderr.write(line + "\n")
    return report.code


if __name__ == "__main__":
    sys.exit(main())
