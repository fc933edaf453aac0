"""Command-line front door: expand the solution, run verification suites,
reduce mod p, and extract the regrouped coefficients.

Exit codes: 0 all checks pass, 1 an identity fails, 2 usage errors.
Progress goes to stderr, results to stdout, so piping stays clean.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .fields import QQ
from .modp import RegroupError, extract_regrouped, verify_theorem_mod_p
from .operators import op_D, op_nabla, op_theta
from .oracle import compare_adjoints
from .params import Truncation
from .reports import CheckResult, all_passed, report_json, report_lines
from .ring import Element
from .serialize import serialize
from .solution import PhiTable, phi_infinity, verify_lemma_cell

ENV_PARAMS = "HDRING_PARAMS"


def _env_defaults() -> dict[str, int]:
    raw = os.environ.get(ENV_PARAMS, "")
    out: dict[str, int] = {}
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, _, value = chunk.partition("=")
        if key.strip() in {"n", "K", "m"} and value.strip().lstrip("-").isdigit():
            out[key.strip()] = int(value)
    return out


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    env = _env_defaults()
    sub.add_argument("--n", type=int, default=env.get("n", 2), help="column bound")
    sub.add_argument("--K", type=int, default=env.get("K"), help="row bound (default: derived)")
    sub.add_argument("--m", type=int, default=env.get("m", 4), help="degree bound")
    sub.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="worker pool bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdring", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    ex = subs.add_parser("expand", help="print the solution element at (r, s)")
    ex.add_argument("--r", type=int, required=True)
    ex.add_argument("--s", type=int, required=True)
    ex.add_argument("--format", choices=("text", "json", "tex"), default="text")
    _add_param_flags(ex)

    ve = subs.add_parser("verify", help="run a verification suite")
    ve.add_argument("--suite", choices=("theorem", "lemma", "operators", "modp", "all"), required=True)
    ve.add_argument("--max-r", type=int, default=2)
    ve.add_argument("--max-s", type=int, default=2)
    ve.add_argument("--p", type=int, default=3, help="prime for the modp suite")
    ve.add_argument("--json", action="store_true", help="emit the JSON report")
    ve.add_argument("--figures", type=str, default=None, help="directory for grid figures and CSV rows")
    _add_param_flags(ve)

    rg = subs.add_parser("regroup", help="extract the regrouped coefficient table at (r, s)")
    rg.add_argument("--r", type=int, required=True)
    rg.add_argument("--s", type=int, required=True)
    rg.add_argument("--check-p", type=str, default="", help="comma-separated primes for integrality")
    _add_param_flags(rg)

    return parser


def _effective_params(args, need_rows: int) -> Truncation:
    K = args.K if args.K is not None else max(1, need_rows)
    params = Truncation(args.n, K, args.m)
    try:
        params.check()
    except ValueError as exc:
        raise UsageError(str(exc))
    return params


class UsageError(Exception):
    pass


def _header(params: Truncation, p: int | None = None) -> dict:
    obj = {"n": params.n, "K": params.K, "m": params.m}
    if p is not None:
        obj["p"] = p
    print(f"# params n={params.n} K={params.K} m={params.m}" + (f" p={p}" if p else ""), file=sys.stderr)
    return obj


def _cmd_expand(args) -> int:
    params = _effective_params(args, need_rows=max(args.r, 1))
    if args.r > params.K:
        print(f"error: K={params.K} is smaller than r={args.r}", file=sys.stderr)
        return 2
    _header(params)
    element = phi_infinity(args.r, args.s, params) if (args.r >= 0 and args.s >= 0) else Element.zero(params, QQ)
    print(serialize(element, args.format))
    return 0


def _operators_suite(params: Truncation) -> list[CheckResult]:
    rng = random.Random(20240817)
    results: list[CheckResult] = []
    bad_n = bad_t = 0
    for _ in range(200):
        x = Element.random(params, rng)
        if not op_nabla(op_nabla(x)).is_zero():
            bad_n += 1
        if not op_theta(op_theta(x)).is_zero():
            bad_t += 1
    results.append(CheckResult("nabla-squared-zero", passed=bad_n == 0, detail=f"{bad_n} failures / 200"))
    results.append(CheckResult("theta-squared-zero", passed=bad_t == 0, detail=f"{bad_t} failures / 200"))
    levels = list(range(0, params.K + 1))
    for name, level in [("nabla", None)] + [("delta", k) for k in levels]:
        mismatches = compare_adjoints(name, level, params)
        label = "adjoint-nabla" if name == "nabla" else f"adjoint-delta-{level}"
        results.append(CheckResult(label, passed=not mismatches, detail=None if not mismatches else str(mismatches[0])))
    return results


def _theorem_cell(phi: PhiTable, r: int, s: int) -> CheckResult:
    residual = op_D(phi, r, s)
    return CheckResult(
        "D-vanishes",
        r=r,
        s=s,
        passed=residual.is_zero(),
        residual=None if residual.is_zero() else residual,
    )


def _run_suite(suite: str, args, params: Truncation) -> list[CheckResult]:
    results: list[CheckResult] = []
    if suite in ("theorem", "all"):
        phi = PhiTable(params)
        cells = [(r, s) for r in range(args.max_r + 1) for s in range(args.max_s + 1)]
        with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
            checked = list(pool.map(lambda rs: _theorem_cell(phi, rs[0], rs[1]), cells))
        for (r, s), cell in zip(cells, checked):
            print(f"# theorem cell r={r} s={s}", file=sys.stderr)
            results.append(cell)
    if suite in ("lemma", "all"):
        phi = PhiTable(params)
        for r in range(1, args.max_r + 1):
            for s in range(args.max_s + 1):
                print(f"# lemma cell r={r} s={s}", file=sys.stderr)
                results.extend(verify_lemma_cell(r, s, params, phi))
    if suite in ("operators", "all"):
        results.extend(_operators_suite(params))
    if suite in ("modp", "all"):
        results.extend(verify_theorem_mod_p(args.p, args.max_r, args.max_s, params))
    return results


def _cmd_verify(args) -> int:
    params = _effective_params(args, need_rows=args.max_r)
    if args.max_r > params.K:
        print(f"error: K={params.K} is smaller than max-r={args.max_r}", file=sys.stderr)
        return 2
    header = _header(params, args.p if args.suite in ("modp", "all") else None)
    results = _run_suite(args.suite, args, params)
    if args.json:
        print(report_json(results, header))
    else:
        for line in report_lines(results):
            print(line)
    if args.figures:
        from .figures import render_report_grid, write_report_csv

        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        render_report_grid(results, outdir / f"{args.suite}_grid.png", f"suite {args.suite}")
        write_report_csv(results, outdir / f"{args.suite}_report.csv")
    return 0 if all_passed(results) else 1


def _cmd_regroup(args) -> int:
    params = _effective_params(args, need_rows=max(args.r, 1))
    if args.r > params.K:
        print(f"error: K={params.K} is smaller than r={args.r}", file=sys.stderr)
        return 2
    _header(params)
    primes = [int(tok) for tok in args.check_p.split(",") if tok.strip()]
    try:
        form = extract_regrouped(args.r, args.s, params)
    except RegroupError as exc:
        print(json.dumps({"pass": False, "error": str(exc)}, sort_keys=True))
        return 1
    obj = form.to_obj()
    obj["reassembles"] = True
    code = 0
    if primes:
        checks = form.integrality_report(primes)
        obj["integrality"] = [c.to_obj() for c in checks]
        if not all_passed(checks):
            code = 1
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "expand":
            return _cmd_expand(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "regroup":
            return _cmd_regroup(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
