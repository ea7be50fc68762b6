"""Command-line front end: ``qgraph <subcommand> --graph FILE [options]``.

Every subcommand writes one table (CSV with a header line, or JSON) to
stdout or ``--output``. Exit codes: 0 success, 1 validation error, 2 the
forest enumeration cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .charmatrix import assemble_regular, assemble_scaled, determinant
from .forests import (
    EnumerationLimitError,
    ShiftPolynomial,
    enumerate_saturated_forests,
    exact_incidence_determinant,
    forest_expansion,
    monomial_analysis,
)
from .graph import GraphError, recognize_bouquet
from .io import load_graph_spec
from .propagator import cluster_lambda
from .spectrum import THREADS_ENV, ScanOptions, cluster_scan, scan_spectrum, singular_range, smallest_eigenvalue

COMMANDS = ("spectrum", "det-scan", "forests", "verify-expansion", "clusters", "ambarzumian-check")


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.15g" % x
    if isinstance(x, (list, tuple)):
        return " ".join(fmt(v) for v in x)
    return str(x)


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgraph", description=__doc__.splitlines()[0],
                     epilog=f"Set {THREADS_ENV} to evaluate scan grids on several threads.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.add_argument("--graph", required=True, help="GraphSpec JSON file")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        return p

    def scan_opts(p):
        p.add_argument("--step", type=_positive, default=0.05, help="grid step in sqrt(lambda)")
        p.add_argument("--tol-sv", type=_positive, default=1e-7, help="relative singular value cutoff")

    p = add("spectrum", "eigenvalues and multiplicities in a range")
    p.add_argument("--lambda-min", type=float, default=-1.0)
    p.add_argument("--lambda-max", type=float, default=100.0)
    scan_opts(p)

    p = add("det-scan", "det of the regular matrix and its smallest singular value on a grid")
    p.add_argument("--lambda-min", type=float, default=-1.0)
    p.add_argument("--lambda-max", type=float, default=100.0)
    p.add_argument("--points", type=int, default=401)

    add("forests", "odd saturated forests with exact incidence determinants")

    p = add("verify-expansion", "compare det M with its forest expansion near (2k+1)^2 pi^2 + d")
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--k-min", type=_nonneg_int, default=1)
    p.add_argument("--k-max", type=_nonneg_int, default=10)
    p.add_argument("--k-step", type=_nonneg_int, default=1)

    p = add("clusters", "eigenvalue clusters near (2k+1)^2 pi^2 and their shifts")
    p.add_argument("--k-min", type=_nonneg_int, default=0)
    p.add_argument("--k-max", type=_nonneg_int, default=5)
    scan_opts(p)

    p = add("ambarzumian-check", "test the two spectral hypotheses for a bouquet of odd cycles")
    p.add_argument("--k-max", type=_nonneg_int, default=50)
    p.add_argument("--tol", type=_positive, default=1e-8, help="tolerance on lambda_min = 0")
    p.add_argument("--monomial-tol", type=_positive, default=1e-9)
    scan_opts(p)
    return parser


def _shift_polynomial(graph, potentials):
    found = recognize_bouquet(graph)
    if found is None:
        return None, None
    shape, cycles = found
    Q = [sum((potentials[e].exact_integral() for e in cyc if e in potentials), 0) for cyc in cycles]
    return shape, ShiftPolynomial.from_cycles(shape.cycle_lengths, Q)


def cmd_spectrum(args, graph, pots):
    if not args.lambda_min < args.lambda_max:
        raise ValidationError("--lambda-min must be below --lambda-max")
    report = scan_spectrum(graph, pots, args.lambda_min, args.lambda_max,
                           ScanOptions(step=args.step, tol_sv=args.tol_sv))
    rows = [(i, e.value, e.multiplicity) for i, e in enumerate(report.eigenvalues)]
    return ["index", "lambda", "multiplicity"], rows


def cmd_det_scan(args, graph, pots):
    if not args.lambda_min < args.lambda_max or args.points < 2:
        raise ValidationError("need --lambda-min < --lambda-max and --points >= 2")
    rows = []
    for lam in np.linspace(args.lambda_min, args.lambda_max, args.points):
        lam = float(lam)
        rows.append((lam, determinant(assemble_regular(graph, pots, lam)),
                     singular_range(graph, pots, lam)[0]))
    return ["lambda", "det_regular", "sigma_min"], rows


def cmd_forests(args, graph, pots):
    rows = []
    for i, f in enumerate(enumerate_saturated_forests(graph, odd_only=True)):
        rows.append((i, list(f.edges), f.kappa, exact_incidence_determinant(graph, f)))
    return ["index", "edges", "kappa", "incidence_det"], rows


def cmd_verify_expansion(args, graph, pots):
    if args.k_max < args.k_min or args.k_step < 1:
        raise ValidationError("need --k-min <= --k-max and --k-step >= 1")
    forests = enumerate_saturated_forests(graph, odd_only=True)
    power = (graph.excess + 1) / 2
    rows = []
    for k in range(args.k_min, args.k_max + 1, args.k_step):
        lam = cluster_lambda(k, args.d)
        if not lam > 0:
            raise ValidationError(f"lambda_k = {lam} is not positive")
        det_m = determinant(assemble_scaled(graph, pots, lam))
        approx = forest_expansion(graph, pots, lam, forests)
        rows.append((k, lam, det_m, approx, abs(det_m - approx) * lam**power))
    return ["k", "lambda", "det_M", "forest_expansion", "scaled_error"], rows


def cmd_clusters(args, graph, pots):
    if args.k_max < args.k_min:
        raise ValidationError("need --k-min <= --k-max")
    _, poly = _shift_polynomial(graph, pots)
    roots = poly.real_roots() if poly is not None and poly.degree > 0 else np.array([])
    opts = ScanOptions(step=args.step, tol_sv=args.tol_sv)
    rows = []
    for k in range(args.k_min, args.k_max + 1):
        rec = cluster_scan(graph, pots, k, opts)
        if roots.size and rec.shifts:
            nearest = [float(roots[np.argmin(np.abs(roots - d))]) for d in rec.shifts]
            gap = max(abs(d - r) for d, r in zip(rec.shifts, nearest))
        else:
            nearest, gap = [], ""
        rows.append((k, rec.total_multiplicity, list(rec.shifts), nearest, gap))
    return ["k", "total_multiplicity", "shifts", "nearest_root", "gap"], rows


def cmd_ambarzumian(args, graph, pots):
    shape, poly = _shift_polynomial(graph, pots)
    if shape is None:
        raise ValidationError("graph is not a bouquet of cycles")
    analysis = monomial_analysis(poly, args.monomial_tol)
    opts = ScanOptions(step=args.step, tol_sv=args.tol_sv)
    lam_min = smallest_eigenvalue(graph, pots, opts)
    rec = cluster_scan(graph, pots, args.k_max, opts)

    if shape.r < 2 or not shape.all_odd:
        verdict = "not applicable: needs at least two odd cycles"
    elif abs(lam_min) > args.tol:
        verdict = "spectrum hypothesis violated: lambda_min != 0"
    elif not analysis.is_monomial:
        verdict = "spectrum hypothesis violated: cluster shifts do not tend to 0"
    else:
        verdict = "consistent with q = 0 hypotheses"

    rows = [
        ("cycle_lengths", list(shape.cycle_lengths)),
        ("p_coefficients", [float(a) for a in poly.coefficients]),
        ("p_is_monomial", analysis.is_monomial),
        ("h_sorted", list(analysis.h)),
        ("total_integral", analysis.implied_total_integral),
        ("smallest_eigenvalue", lam_min),
        ("cluster_k", args.k_max),
        ("cluster_multiplicity", rec.total_multiplicity),
        ("cluster_shifts", list(rec.shifts)),
        ("verdict", verdict),
    ]
    return ["quantity", "value"], rows


HANDLERS = {
    "spectrum": cmd_spectrum,
    "det-scan": cmd_det_scan,
    "forests": cmd_forests,
    "verify-expansion": cmd_verify_expansion,
    "clusters": cmd_clusters,
    "ambarzumian-check": cmd_ambarzumian,
}


def render(header, rows, fmt_name: str) -> str:
    if fmt_name == "json":
        table = [dict(zip(header, (fmt(v) for v in row))) for row in rows]
        return json.dumps({"columns": header, "rows": table}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.command is None:
            raise ValidationError(f"missing subcommand; choose from {', '.join(COMMANDS)}")
        graph, pots = load_graph_spec(args.graph)
        header, rows = HANDLERS[args.command](args, graph, pots)
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render(header, rows, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
