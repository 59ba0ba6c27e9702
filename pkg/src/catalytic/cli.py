"""Command line entry point.  Every command prints JSON; exit 0 pass/found, 1 fail/not found, 2 error."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .catalysis import (
    SearchBudget,
    SearchStats,
    build_classical_lemma3,
    build_lemma2_certificate,
    build_theorem1_certificate,
    find_correlating_witness,
    impossibility_reason,
    rational_spectra,
    search_conjecture_certificate,
    verify_certificate,
)
from .entropy import majorizes, monotone_violation_scan, partial_sum_gaps, trumping_check
from .exact import ProbVector, as_fraction
from .protocols import CatalystNotFound, cooling_run, fig2_example, rate_table
from .quantum import DensityMatrix
from .serialize import certificate_to_json, density_from_json, load_certificate, save_certificate


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def _emit(payload) -> None:
    json.dump(_jsonable(payload), sys.stdout, indent=1)
    sys.stdout.write("\n")


def _write_csv(path, rows) -> None:
    if not rows:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for r in rows:
            writer.writerow(_jsonable(r))


def parse_vector(text: str):
    """``"1/2,1/4,1/4"`` -> Fractions; anything with a decimal point stays float."""
    parts = [t for t in text.replace(";", ",").split(",") if t.strip()]
    if any("." in t or "e" in t.lower() for t in parts):
        return [float(t) for t in parts]
    return [as_fraction(t) for t in parts]


def parse_state(text: str) -> DensityMatrix:
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        return density_from_json(json.loads(path.read_text()))
    return DensityMatrix.from_diagonal([float(v) for v in parse_vector(text)])


def _budget(args) -> SearchBudget:
    return SearchBudget(max_catalyst_dim=args.max_dim, max_denominator=args.max_den,
                        max_atoms=args.max_atoms, max_seconds=args.seconds)


def cmd_verify(args) -> int:
    cert = load_certificate(args.certificate)
    report = verify_certificate(cert)
    _emit(report.to_json())
    if args.plot and cert.is_classical:
        from .plotting import plot_classical_tables
        plot_classical_tables(cert, args.plot)
    return 0 if report.passed else 1


def cmd_search_classical(args) -> int:
    p, pp = ProbVector(parse_vector(args.p)), ProbVector(parse_vector(args.p_prime))
    budget = _budget(args)
    result = search_conjecture_certificate(p, pp, budget, epsilon=as_fraction(args.eps))
    out = {"conjecture_search": result.to_json()}
    cert = result.certificate
    if cert is None and result.status != "impossible" and impossibility_reason(p, pp) is None:
        stats = SearchStats()
        witness = find_correlating_witness(p, pp, budget, realizable=True, stats=stats)
        out["witness_search"] = {"found": witness is not None, "stats": stats.to_json()}
        if witness is not None:
            cert = build_classical_lemma3(p, pp, witness)
            out["lemma3_certificate"] = certificate_to_json(cert)
    if cert is not None:
        out["verification"] = verify_certificate(cert).to_json()
        if args.out:
            save_certificate(cert, args.out)
    out["found"] = cert is not None
    _emit(out)
    return 0 if cert is not None else 1


def _build_quantum(args, builder) -> int:
    rho, rho_p = parse_state(args.rho), parse_state(args.rho_prime)
    spectra = rational_spectra(rho, rho_p)
    stats = SearchStats()
    witness = find_correlating_witness(spectra.p, spectra.p_prime, _budget(args), stats=stats)
    if witness is None:
        _emit({"found": False, "reason": "no witness within budget", "stats": stats.to_json()})
        return 1
    cert = builder(rho, rho_p, witness, snap=args.snap)
    report = verify_certificate(cert)
    if args.out:
        save_certificate(cert, args.out)
    _emit({"found": True, "verification": report.to_json(), "witness": witness.to_json(),
           "stats": stats.to_json(), "certificate": certificate_to_json(cert) if args.full else None})
    return 0 if report.passed else 1


def cmd_fig2(args) -> int:
    cert = fig2_example()
    report = verify_certificate(cert)
    scan = monotone_violation_scan(cert)
    if args.out:
        save_certificate(cert, args.out)
    if args.plot:
        from .plotting import plot_classical_tables
        plot_classical_tables(cert, args.plot)
    if args.csv:
        _write_csv(args.csv, scan.rows)
    _emit({"certificate": certificate_to_json(cert), "verification": report.to_json(), "scan": scan.to_json()})
    return 0 if report.passed else 1


def cmd_cool(args) -> int:
    rho = parse_state(args.state)
    n = 2 * args.pairs
    try:
        report = cooling_run(rho, args.eps, n)
    except CatalystNotFound as exc:
        _emit({"found": False, "message": str(exc), "achieved_eps_bits": exc.achieved_eps})
        return 1
    table = rate_table(rho, args.eps, n)
    if args.csv:
        rows = [dict(r, lambda_ratio=report.lambda_ratio[i], lambda_min_output=report.lambda_min_joint[i])
                for i, r in enumerate(table)]
        _write_csv(args.csv, rows)
    if args.plot:
        from .plotting import plot_cooling
        plot_cooling(report, args.plot)
    _emit({"report": report.to_json(), "rate_table": table})
    return 0 if report.passed else 1


def cmd_trumping(args) -> int:
    a, b = parse_vector(args.a), parse_vector(args.b)
    verdict = trumping_check(a, b, extra_alphas=args.alpha or ())
    if args.csv:
        _write_csv(args.csv, verdict.rows)
    if args.plot:
        from .plotting import plot_renyi_rows
        plot_renyi_rows(verdict.rows, args.plot)
    _emit(verdict.to_json())
    return 0 if verdict.passed else 1


def cmd_majorize(args) -> int:
    a, b = parse_vector(args.a), parse_vector(args.b)
    forward, backward = majorizes(a, b), majorizes(b, a)
    _emit({"a_majorizes_b": forward, "b_majorizes_a": backward,
           "partial_sum_gaps": [str(g) if isinstance(g, Fraction) else g for g in partial_sum_gaps(a, b)]})
    return 0 if forward else 1


def cmd_scan(args) -> int:
    cert = load_certificate(args.certificate)
    scan = monotone_violation_scan(cert, extra_alphas=args.alpha or ())
    if args.csv:
        _write_csv(args.csv, scan.rows)
    if args.plot:
        from .plotting import plot_renyi_rows
        plot_renyi_rows(scan.rows, args.plot)
    _emit(scan.to_json())
    return 0 if not scan.violations else 1


def _add_budget(p) -> None:
    p.add_argument("--max-dim", type=int, default=4, help="largest catalyst dimension")
    p.add_argument("--max-den", type=int, default=12, help="largest catalyst denominator")
    p.add_argument("--max-atoms", type=int, default=200_000)
    p.add_argument("--seconds", type=float, default=20.0, help="wall-clock budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catalytic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify a certificate JSON file")
    p.add_argument("certificate")
    p.add_argument("--plot", help="write a table figure (classical certificates)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search-classical", help="search a classical catalytic certificate")
    p.add_argument("p")
    p.add_argument("p_prime")
    p.add_argument("--eps", default="0", help="l1 slack on the system marginal")
    p.add_argument("--out", help="save the certificate here")
    _add_budget(p)
    p.set_defaults(func=cmd_search_classical)

    for name, builder in (("build-thm1", build_theorem1_certificate), ("build-lemma2", build_lemma2_certificate)):
        p = sub.add_parser(name, help="build a quantum certificate from two state JSON files")
        p.add_argument("rho")
        p.add_argument("rho_prime")
        p.add_argument("--snap", action="store_true", help="certify the spectrally rationalized states")
        p.add_argument("--out")
        p.add_argument("--full", action="store_true", help="include the certificate in the JSON output")
        _add_budget(p)
        p.set_defaults(func=lambda a, b=builder: _build_quantum(a, b))

    p = sub.add_parser("fig2", help="the qutrit counterexample certificate")
    p.add_argument("--out")
    p.add_argument("--plot")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("cool", help="catalytic cooling of qubit pairs")
    p.add_argument("--state", required=True, help='qubit spectrum such as "0.9,0.1" or a state JSON file')
    p.add_argument("--eps", type=float, required=True, help="target entropy in bits")
    p.add_argument("--pairs", type=int, default=2)
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(func=cmd_cool)

    for name, func in (("trumping", cmd_trumping), ("majorize", cmd_majorize)):
        p = sub.add_parser(name)
        p.add_argument("a")
        p.add_argument("b")
        if name == "trumping":
            p.add_argument("--alpha", type=float, action="append", help="extra Rényi order")
            p.add_argument("--csv")
            p.add_argument("--plot")
        p.set_defaults(func=func)

    p = sub.add_parser("scan-monotones", help="Rényi orders decreased by a verified certificate")
    p.add_argument("certificate")
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
