"""Command-line front end.

Commands: troots, teig, bounds, verify, companion, decompose.  Exit
codes: 0 success, 2 input/parse error, 3 numeric failure, 4 violation of
a proven inequality or property suite (a bug sentinel, not a user
error).  Machine outputs (--json/--csv) print floats with 17 significant
digits; the pretty console format uses 6.
"""

import argparse
import json
import sys

import numpy as np

from . import bounds as bounds_mod
from . import dense_eig, files, sweeps, trop_poly, trop_spectra
from .assignment import decompose_circulation, max_cycle_mean
from .trop_poly import TropicalPolynomial

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_VIOLATION = 4


def _to_native(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _json_dumps(payload):
    return json.dumps(payload, default=_to_native)


def _fmt(x, machine=False):
    if x is None:
        return "-"
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g" if machine else ".6g")


def _print(args, text):
    if not args.quiet:
        print(text)


def _roots_payload(multiset):
    # -inf spelled as a string keeps the JSON standard-conforming
    return [
        [value if value > float("-inf") else "-inf", mult]
        for value, mult in multiset.entries
    ]


def cmd_troots(args):
    poly = files.load_polynomial(args.polyfile, max_plus=args.maxplus)
    if args.maxplus:
        p = poly
        if args.hop:
            raise files.ParseError("--hop requires complex coefficients")
    else:
        if poly.size < 2:
            raise files.ParseError("degree >= 1 required")
        p = trop_poly.max_times_relative(poly)
    if p.degree < 1:
        raise files.ParseError("degree >= 1 required")
    polygon = trop_poly.newton_polygon(p, sat_tol=args.tol)
    roots_log = trop_poly.tropical_roots(p)
    payload = {
        "degree": p.degree,
        "domain": "max-plus" if args.maxplus else "max-times",
        "roots": _roots_payload(roots_log if args.maxplus else roots_log.exp()),
        "polygon_vertices": [[i, v] for i, v in polygon.vertices],
        "saturated": sorted(polygon.saturated),
        "concavified": trop_poly.coeffs_to_json(
            TropicalPolynomial(polygon.concavified)
        ),
    }
    if args.hop:
        hop = bounds_mod.hop_check(poly, rel_tol=args.tol)
        payload["hop"] = [vars(r) for r in hop.records]
        payload["hop_all_hold"] = hop.all_hold
    if args.json:
        print(_json_dumps(payload))
    else:
        _print(args, f"degree {p.degree} ({payload['domain']} view)")
        _print(args, "roots (value x multiplicity):")
        for value, mult in payload["roots"]:
            _print(args, f"  {_fmt(value)} x {mult}")
        _print(args, f"polygon vertices: "
               + ", ".join(f"({i}, {_fmt(v)})" for i, v in polygon.vertices))
        _print(args, f"saturated indices: {sorted(polygon.saturated)}")
        if args.hop:
            _print(args, "root-product bounds per k "
                   "(lower <= ratio <= upper, all should hold):")
            for r in payload["hop"]:
                _print(
                    args,
                    f"  k={r['k']}: {_fmt(r['lower_factor'])} * trop <= "
                    f"{_fmt(r['root_prefix'])} <= {_fmt(r['upper_constant'])}"
                    f" * {_fmt(r['trop_prefix'])}"
                    f" [lower {r['lower_holds']}, upper {r['upper_holds']}]",
                )
    if args.hop and not payload["hop_all_hold"]:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_teig(args):
    A = files.load_matrix(args.matrixfile, fmt=args.format)
    M = np.abs(A)
    spectrum = trop_spectra.tropical_eigenvalues(M, method=args.method)
    if spectrum.saturated is None:
        # evaluation route does not see coefficients; recover saturation
        saturated = trop_spectra.tropical_eigenvalues(M, method="coeff").saturated
    else:
        saturated = spectrum.saturated
    gamma1 = spectrum.gammas.entries[0][0] if spectrum.gammas.entries else 0.0
    rho_max = max_cycle_mean(M)
    agree = abs(gamma1 - rho_max) <= args.tol * max(1.0, gamma1, rho_max)
    payload = {
        "n": M.shape[0],
        "method": args.method,
        "gammas": _roots_payload(spectrum.gammas),
        "max_cycle_mean": rho_max,
        "gamma1_equals_max_cycle_mean": agree,
        "saturated": sorted(saturated),
    }
    if args.json:
        print(_json_dumps(payload))
    else:
        _print(args, f"tropical eigenvalues (n={M.shape[0]}, {args.method} route):")
        for value, mult in payload["gammas"]:
            _print(args, f"  {_fmt(value)} x {mult}")
        _print(args, f"max cycle mean: {_fmt(rho_max)} "
               f"(matches largest root: {agree})")
        _print(args, f"saturated trace indices: {sorted(saturated)}")
    if not agree:
        return EXIT_NUMERIC
    return EXIT_OK


def _parse_k_range(text):
    if text is None:
        return None
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",")]


def cmd_bounds(args):
    A = files.load_matrix(args.matrixfile, fmt=args.format)
    ks = _parse_k_range(args.k_range)
    report = bounds_mod.upper_bound_report(
        A, rel_tol=args.tol, with_lower=args.lower, k_values=ks
    )
    if args.json:
        print(report.to_json())
    elif args.csv:
        sys.stdout.write(report.to_csv())
    else:
        _print(args, f"n={report.n} (input sha256 "
               f"{report.metadata['input_sha256'][:12]}...)")
        header = (f"{'k':>3} {'|eig prefix|':>14} {'trop prefix':>14} "
                  f"{'constant':>12} {'ratio':>12} {'upper':>6} {'lower':>22}")
        _print(args, header)
        for r in report.records:
            lower = "-"
            if r.lower_constant is not None:
                lower = f"{_fmt(r.lower_constant)} ({_fmt(r.lower_holds)})"
            elif args.lower:
                lower = "n/a"
            _print(args, f"{r.k:>3} {_fmt(r.eig_prefix):>14} "
                   f"{_fmt(r.trop_prefix):>14} {_fmt(r.upper_constant):>12} "
                   f"{_fmt(r.ratio):>12} {str(r.upper_holds).lower():>6} "
                   f"{lower:>22}")
            if r.diagnostics and args.lower:
                _print(args, f"     {r.diagnostics}")
    violated = not report.all_upper_hold or any(
        r.lower_holds is False for r in report.records
    )
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_verify(args):
    result = sweeps.run_suite(
        args.suite,
        instances=args.instances,
        nmax=args.nmax,
        seed=args.seed,
        rel_tol=args.tol,
    )
    if args.json:
        print(_json_dumps({
            "suite": result.suite,
            "total": result.total,
            "passed": result.passed,
            "failed": result.failed,
            "worst": result.worst,
            "seed": result.seed,
            "failures": result.failures,
        }))
    else:
        print(result.summary())
    return EXIT_OK if result.ok else EXIT_VIOLATION


def cmd_companion(args):
    poly = files.load_polynomial(args.polyfile, max_plus=False)
    if poly.size < 2:
        raise files.ParseError("degree >= 1 required")
    report = bounds_mod.companion_comparison(poly, rel_tol=args.tol)
    if args.json:
        print(_json_dumps({
            "degree": report.degree,
            "records": [vars(r) for r in report.records],
            "all_hold": report.all_hold,
        }))
    elif args.csv:
        print("k,ratio,exact_constant,norm_constant,polya_constant,"
              "ratio_within_exact,ratio_within_norm,ratio_within_polya,"
              "exact_within_norm")
        for r in report.records:
            print(",".join([
                str(r.k),
                _fmt(r.ratio, machine=True) if r.ratio is not None else "",
                _fmt(r.exact_constant, machine=True),
                str(r.norm_constant),
                _fmt(r.polya_constant, machine=True),
                str(r.ratio_within_exact).lower(),
                str(r.ratio_within_norm).lower(),
                str(r.ratio_within_polya).lower(),
                str(r.exact_within_norm).lower(),
            ]))
    else:
        _print(args, f"companion comparison, degree {report.degree}:")
        _print(args, f"{'k':>3} {'ratio':>12} {'exact':>12} "
               f"{'min(k+1,n-k+1)':>15} {'polya':>10} {'ok':>4}")
        for r in report.records:
            ok = (r.ratio_within_exact and r.ratio_within_norm
                  and r.ratio_within_polya and r.exact_within_norm)
            _print(args, f"{r.k:>3} {_fmt(r.ratio):>12} "
                   f"{_fmt(r.exact_constant):>12} {r.norm_constant:>15} "
                   f"{_fmt(r.polya_constant):>10} {str(ok).lower():>4}")
    return EXIT_OK if report.all_hold else EXIT_VIOLATION


def cmd_decompose(args):
    A = files.load_matrix(args.matrixfile, fmt=args.format)
    if np.abs(A.imag).max(initial=0.0) != 0.0:
        raise files.ParseError("circulation matrices must be real integers")
    B = A.real
    parts = decompose_circulation(B)
    n = B.shape[0]
    payload = {
        "n": n,
        "weight": int(np.rint(B.real).astype(np.int64).sum(axis=1).max(initial=0)),
        "parts": [[[int(i), int(j)] for i, j in part.pairs] for part in parts],
    }
    if args.json:
        print(_json_dumps(payload))
    else:
        _print(args, f"{len(parts)} partial permutation parts "
               f"(weight {payload['weight']}):")
        for part in parts:
            _print(args, "  " + " ".join(f"{i}->{j}" for i, j in part.pairs))
    return EXIT_OK


GLOBAL_DEFAULTS = {
    "tol": 1e-9,
    "seed": 1,
    "json": False,
    "csv": False,
    "quiet": False,
}


def _common_options():
    """Global flags, accepted both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--tol", type=float, default=S,
                        help="relative tolerance for verdicts (default 1e-9)")
    common.add_argument("--seed", type=int, default=S,
                        help="seed for randomized suites (default 1)")
    common.add_argument("--json", action="store_true", default=S,
                        help="machine-readable JSON output")
    common.add_argument("--csv", action="store_true", default=S,
                        help="CSV output where supported")
    common.add_argument("--quiet", action="store_true", default=S,
                        help="suppress pretty output (exit codes only)")
    return common


def build_parser():
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="tropeig",
        parents=[common],
        description="Tropical roots, tropical eigenvalues, and "
                    "eigenvalue-product bounds for complex matrices and "
                    "polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("troots", parents=[common],
                       help="tropical roots of a polynomial file")
    p.add_argument("polyfile")
    p.add_argument("--maxplus", action="store_true",
                   help="treat input as max-plus (log-domain) coefficients")
    p.add_argument("--hop", action="store_true",
                   help="append the root-product bound table")
    p.set_defaults(fn=cmd_troots)

    p = sub.add_parser("teig", parents=[common],
                       help="tropical eigenvalues of a matrix file")
    p.add_argument("matrixfile")
    p.add_argument("--method", choices=("coeff", "eval", "both"),
                   default="both")
    p.add_argument("--format", choices=("json-dense", "csv-dense",
                                        "coordinate"), default=None)
    p.set_defaults(fn=cmd_teig)

    p = sub.add_parser("bounds", parents=[common],
                       help="eigenvalue-product bound report")
    p.add_argument("matrixfile")
    p.add_argument("--k-range", default=None,
                   help="k values, e.g. '1:4' or '1,3,5' (default all)")
    p.add_argument("--lower", action="store_true",
                   help="also check the conditional lower bounds")
    p.add_argument("--format", choices=("json-dense", "csv-dense",
                                        "coordinate"), default=None)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("verify", parents=[common],
                       help="run a randomized verification suite")
    p.add_argument("--suite", required=True, choices=sorted(sweeps.SUITES))
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("companion", parents=[common],
                       help="companion-matrix constants vs polynomial bounds")
    p.add_argument("polyfile")
    p.set_defaults(fn=cmd_companion)

    p = sub.add_parser("decompose", parents=[common],
                       help="decompose an integer circulation matrix")
    p.add_argument("matrixfile")
    p.add_argument("--format", choices=("json-dense", "csv-dense",
                                        "coordinate"), default=None)
    p.set_defaults(fn=cmd_decompose)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.fn(args)
    except (files.ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (dense_eig.NonConvergenceError, dense_eig.ConsistencyError,
            trop_spectra.RouteDisagreement) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
