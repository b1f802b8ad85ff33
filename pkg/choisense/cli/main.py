#!/usr/bin/env python3
"""
ChoiSense CLI — Catalog Certification
-------------------------------------
Build the catalog's Kraus families, certify extremality of their
marginal states, export families and Choi matrices, and run the full
regression report.

Exit codes: 0 every expectation met, 1 a verification mismatch (or an
I/O failure), 2 a usage error such as an unknown case id.

Example:
    choisense list
    choisense verify five_rank7 --mode exact
    choisense verify "tensor:ohno_3x3_rank4×ohno_4x4_rank5" --json
    choisense choi three_to_four --format csv --state --out choi.csv
    choisense products five_rank7 --kind dual
    choisense report-all --workers 4
"""

import argparse
import json
import os
import re
import sys
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import List, Optional, Sequence

import pandas as pd
from dotenv import load_dotenv
from tqdm import tqdm

from choisense.algebra.linalg import DenseMatrix
from choisense.catalog.registry import UnknownCaseError, list_cases, report_ids, resolve_case
from choisense.catalog.tables import product_table, render_linear_forms, render_units
from choisense.certify.certificate import VerificationReport, verify_case
from choisense.certify.criteria import witness_matrix
from choisense.config import CertifySettings, load_settings, parse_tolerance
from choisense.maps.cpmap import as_state, choi_matrix, choi_matrix_float
from choisense.persistence import (
    dumps,
    family_to_model,
    save_family,
    save_matrix_csv,
    save_matrix_json,
    verification_to_model,
    write_json,
)
from choisense.schema import CaseSummaryModel, ReportModel

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


# ============================================================
# 🧩 Argument Parser
# ============================================================
def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse CLI arguments.

    :param argv: Argument list (defaults to ``sys.argv[1:]``).
    :return: Parsed namespace; ``command`` names the subcommand.
    :rtype: argparse.Namespace
    """
    parser = argparse.ArgumentParser(
        prog="choisense",
        description="Certify extremal marginal states from explicit Kraus families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mode(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--mode",
            choices=["exact", "float"],
            default=None,
            help="Arithmetic for certification (default: exact when d_in·d_out ≤ CHOISENSE_EXACT_DIM_LIMIT).",
        )
        p.add_argument("--tol", type=str, default=None, help="Float rank threshold, a number or 'auto'.")

    p_list = sub.add_parser("list", help="List catalog cases and tensor presets.")
    p_list.add_argument("--json", action="store_true", help="Print a JSON array of {id, params}.")

    p_verify = sub.add_parser("verify", help="Certify cases and compare against their claimed properties.")
    p_verify.add_argument("cases", nargs="+", help="Case ids, e.g. five_rank7 or 'ohno_hermitian(4)'.")
    add_mode(p_verify)
    p_verify.add_argument("--json", action="store_true", help="Print the verification record(s) as JSON.")
    p_verify.add_argument("--out", default=None, help="Also write the JSON record(s) to this path.")
    p_verify.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Threads when several cases are given; cases past CHOISENSE_EXACT_DIM_LIMIT run one at a time.",
    )

    p_choi = sub.add_parser("choi", help="Write the Choi matrix of a case.")
    p_choi.add_argument("case")
    p_choi.add_argument("--format", choices=["json", "csv"], default="json", help="Exact JSON or float CSV.")
    p_choi.add_argument("--out", default=None, help="Output path (default: under CHOISENSE_OUTPUT_DIR).")
    p_choi.add_argument("--state", action="store_true", help="Rescale the map so that trace Φ(I) = 1 first.")

    p_export = sub.add_parser("export", help="Export a case's Kraus family with its claimed properties.")
    p_export.add_argument("case")
    p_export.add_argument("--out", default=None, help="Output path; without it the JSON goes to stdout.")
    p_export.add_argument("--json", action="store_true", help="Accepted for symmetry; export is always JSON.")

    p_report = sub.add_parser("report-all", help="Verify every case and preset.")
    add_mode(p_report)
    p_report.add_argument("--json", action="store_true", help="Print the report as JSON.")
    p_report.add_argument("--out", default=None, help="Also write the JSON report to this path.")
    p_report.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Concurrent verifications; cases past CHOISENSE_EXACT_DIM_LIMIT run one at a time to bound SVD memory.",
    )
    p_report.add_argument("--cases", nargs="+", default=None, help="Restrict the report to these ids.")

    p_products = sub.add_parser("products", help="Print the product table of a case.")
    p_products.add_argument("case")
    p_products.add_argument("--kind", choices=["gram", "dual"], default="gram", help="V_a*V_b or V_aV_b*.")

    p_show = sub.add_parser("show", help="Print Φ(X) of a case symbolically.")
    p_show.add_argument("case")

    return parser.parse_args(argv)


# ============================================================
# 🖨️ Rendering helpers
# ============================================================
def _safe_name(case_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", case_id).strip("_")


def _marginal_text(m: DenseMatrix) -> str:
    c = m[0, 0]
    if m == DenseMatrix.identity(m.rows, c):
        return f"I{m.rows}" if c == 1 else f"{c}·I{m.rows}"
    return "[" + "; ".join(", ".join(str(x) for x in m.row(i)) for i in range(m.rows)) + "]"


def _print_witness(name: str, witness, n: int, limit: int = 8) -> None:
    coeffs = witness_matrix(witness, n)
    nonzero = [(i, j, a) for i, row in enumerate(coeffs) for j, a in enumerate(row) if a]
    shown = ", ".join(f"a{i + 1}{j + 1}={a}" for i, j, a in nonzero[:limit])
    more = f", … ({len(nonzero)} nonzero)" if len(nonzero) > limit else ""
    print(f"   {name} dependence: {shown}{more}")


def _print_report(report: VerificationReport) -> None:
    cert = report.certificate
    print(f"\n📋 {cert.case_id}  [{cert.mode}]  M({cert.d_in}) → M({cert.d_out}), {cert.family_size} operators")
    table = pd.DataFrame(report.comparison_rows(), columns=["property", "claimed", "computed"])
    print(table.to_string(index=False))
    print(f"   marginals: Φ*(I) = {_marginal_text(cert.marginal_left)}, Φ(I) = {_marginal_text(cert.marginal_right)}")
    print("   ranks: " + ", ".join(f"{k}={v}" for k, v in cert.ranks.items()))
    if cert.attains_bound:
        print(f"   🎯 Choi rank attains the bound {cert.bound}")
    for name, witness in cert.witnesses.items():
        if name != "family":
            _print_witness(name, witness, cert.family_size)
    for name in cert.float_witnesses:
        print(f"   {name} dependence: float witness of length {len(cert.float_witnesses[name])}")
    for note in cert.notes:
        print(f"   ⚠️ {note}")
    if report.passed:
        print("✅ All expectations met")
    else:
        for m in report.mismatches:
            print(f"❌ {m.field}: claimed {m.claimed}, computed {m.computed}")


def _summary_row(report: VerificationReport) -> CaseSummaryModel:
    cert, exp = report.certificate, report.case.expected
    return CaseSummaryModel(
        case=report.case.id,
        d_in=cert.d_in,
        d_out=cert.d_out,
        mode=cert.mode,
        choi_rank_claimed=exp.choi_rank,
        choi_rank=cert.choi_rank,
        bound_claimed=exp.bound,
        bound=cert.bound,
        verdict_claimed=exp.verdict,
        verdict=cert.verdict,
        passed=report.passed,
        mismatches=[m.field for m in report.mismatches],
    )


# ============================================================
# 🚦 Commands
# ============================================================
def cmd_list(args: argparse.Namespace, settings: CertifySettings) -> int:
    rows = list_cases()
    if args.json:
        print(json.dumps(rows, ensure_ascii=False, indent=2))
        return EXIT_OK
    print("📚 Catalog cases")
    for row in rows:
        params = ", ".join(f"{k} {v}" for k, v in row["params"].items())
        print(f"   {row['id']}" + (f"   ({params})" if params else ""))
    return EXIT_OK


def _verify_many(case_ids: List[str], args: argparse.Namespace, settings: CertifySettings, progress: bool):
    """Verify cases concurrently; returns {id: report or exception} in input order."""
    tol = parse_tolerance(args.tol) if args.tol is not None else None
    workers = args.workers or settings.MAX_WORKERS
    results = {}
    # cases past the exact limit build large float systems; one at a time
    heavy = threading.Semaphore(1)

    def run(case_id: str) -> VerificationReport:
        case = resolve_case(case_id)
        if case.d_in * case.d_out <= settings.EXACT_DIM_LIMIT:
            return verify_case(case, mode=args.mode, tol=tol, settings=settings)
        with heavy:
            return verify_case(case, mode=args.mode, tol=tol, settings=settings)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = {executor.submit(run, cid): cid for cid in case_ids}
        iterator = as_completed(futures)
        if progress:
            iterator = tqdm(iterator, total=len(futures), desc="🔎 Certifying", unit="case")
        for future in iterator:
            cid = futures[future]
            try:
                results[cid] = future.result()
            except Exception as e:
                results[cid] = e
    return {cid: results[cid] for cid in case_ids}


def cmd_verify(args: argparse.Namespace, settings: CertifySettings) -> int:
    # resolve up front so an unknown id is a usage error before any work starts
    for cid in args.cases:
        resolve_case(cid)
    results = _verify_many(args.cases, args, settings, progress=False)

    code = EXIT_OK
    records = []
    for cid, outcome in results.items():
        if isinstance(outcome, Exception):
            print(f"❌ {cid}: certification failed ({type(outcome).__name__}: {outcome})", file=sys.stderr)
            code = EXIT_MISMATCH
            continue
        records.append(verification_to_model(outcome))
        if not outcome.passed:
            code = EXIT_MISMATCH
        if not args.json:
            _print_report(outcome)

    if not records:
        return code
    text = dumps(records[0]) if len(args.cases) == 1 else json.dumps(
        [r.model_dump(mode="json") for r in records], sort_keys=True, indent=2, ensure_ascii=False
    ) + "\n"
    if args.json:
        sys.stdout.write(text)
    if args.out:
        _ensure_dir(args.out)
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        if not args.json:
            print(f"💾 Verification record saved to {args.out}")
    return code


def _ensure_dir(path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)


def cmd_choi(args: argparse.Namespace, settings: CertifySettings) -> int:
    case = resolve_case(args.case)
    family = as_state(case.family) if args.state else case.family
    out = args.out or os.path.join(settings.OUTPUT_DIR, f"{_safe_name(case.id)}_choi.{args.format}")
    if args.format == "json":
        save_matrix_json(out, choi_matrix(family))
    else:
        save_matrix_csv(out, choi_matrix_float(family))
    n = family.d_in * family.d_out
    print(f"💾 Choi matrix of {case.id} ({n}×{n}, {args.format}) saved to {out}")
    return EXIT_OK


def cmd_export(args: argparse.Namespace, settings: CertifySettings) -> int:
    case = resolve_case(args.case)
    if args.out is None:
        sys.stdout.write(dumps(family_to_model(case.family, case)))
        return EXIT_OK
    save_family(args.out, case.family, case)
    print(f"💾 Kraus family of {case.id} saved to {args.out}")
    return EXIT_OK


def cmd_report_all(args: argparse.Namespace, settings: CertifySettings) -> int:
    case_ids = sorted(args.cases or report_ids())
    if not args.json:
        print(f"🚀 Certifying {len(case_ids)} cases with {args.workers or settings.MAX_WORKERS} workers")
    results = _verify_many(case_ids, args, settings, progress=not args.json)

    rows: List[CaseSummaryModel] = []
    for cid, outcome in results.items():
        if isinstance(outcome, VerificationReport):
            rows.append(_summary_row(outcome))
            continue
        try:
            case = resolve_case(cid)
            exp, d_in, d_out = case.expected, case.d_in, case.d_out
            claimed = (exp.choi_rank, exp.bound, exp.verdict)
        except Exception:
            d_in = d_out = 0
            claimed = (0, 0, "indeterminate")
        rows.append(
            CaseSummaryModel(
                case=cid,
                d_in=d_in,
                d_out=d_out,
                choi_rank_claimed=claimed[0],
                bound_claimed=claimed[1],
                verdict_claimed=claimed[2],
                passed=False,
                error=f"{type(outcome).__name__}: {outcome}",
            )
        )

    report = ReportModel(passed=all(r.passed for r in rows), cases=rows)
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        df = pd.DataFrame([r.model_dump() for r in rows])[
            ["case", "d_in", "d_out", "mode", "choi_rank_claimed", "choi_rank", "bound", "verdict", "passed"]
        ]
        print("\n📊 Certification summary")
        print(df.to_string(index=False))
        for r in rows:
            if r.error:
                print(f"❌ {r.case}: {r.error}")
            elif not r.passed:
                print(f"❌ {r.case}: mismatched {', '.join(r.mismatches)}")
        print("\n🎯 All cases passed." if report.passed else "\n⚠️ Some cases failed.")
    if args.out:
        write_json(args.out, report)
        if not args.json:
            print(f"💾 Report saved to {args.out}")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_products(args: argparse.Namespace, settings: CertifySettings) -> int:
    case = resolve_case(args.case)
    table = product_table(case.family, args.kind)
    width = max(len(label) for label in table)
    print(f"🧮 {'V_a*V_b' if args.kind == 'gram' else 'V_aV_b*'} products of {case.id}")
    for label, m in table.items():
        print(f"   {label.ljust(width)} = {render_units(m)}")
    return EXIT_OK


def cmd_show(args: argparse.Namespace, settings: CertifySettings) -> int:
    case = resolve_case(args.case)
    rows = render_linear_forms(case.family)
    df = pd.DataFrame(rows, index=range(1, len(rows) + 1), columns=range(1, len(rows) + 1))
    print(f"🧾 Φ(X) for {case.id} = {case.family.scale} ·")
    print(df.to_string())
    return EXIT_OK


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "choi": cmd_choi,
    "export": cmd_export,
    "report-all": cmd_report_all,
    "products": cmd_products,
    "show": cmd_show,
}


# ============================================================
# 🚀 Main Entry
# ============================================================
def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point for the ``choisense`` console script.

    Loads ``.env`` and CHOISENSE_* overrides, dispatches the subcommand and
    maps failures onto exit codes.

    :param argv: Argument list (defaults to ``sys.argv[1:]``).
    :return: Process exit code.
    :rtype: int
    """
    args = parse_args(argv)
    load_dotenv()
    try:
        settings = load_settings()
        return COMMANDS[args.command](args, settings)
    except UnknownCaseError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"❌ I/O failure on {e.filename or 'output'}: {e.strerror or e}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
