"""Command-line interface: ``hanoi-schreier {graph,spectrum,verify,plotdata}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import decimation as dec
from . import spectrum as sp
from . import verify
from .graph import ResourceCapError, adjacency, build_graph, emit_dot, graph_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
SCHEMA_VERSION = 1
MAX_AUX_LEVEL = 6
MAX_JULIA_DEPTH = 20
MAX_KNS_DEPTH = 20
DEFAULT_MAX_SPECTRUM_ENTRIES = 1 << 20

OPEN_PROBLEM = (
    "closed-form spectra are only known for k = 3; for k >= 4 the spectrum of the "
    "Schreier graphs is an open problem. Use --numeric for raw numerical eigenvalues "
    "(no closed-form claims are made)."
)


class UsageError(Exception):
    pass


def _max_spectrum_entries() -> int:
    return int(os.environ.get("HANOI_SCHREIER_MAX_SPECTRUM_ENTRIES", DEFAULT_MAX_SPECTRUM_ENTRIES))


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, default=str) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_graph(args) -> int:
    if args.k < 3 or args.n < 0:
        raise UsageError("need k >= 3 and n >= 0")
    g = build_graph(args.k, args.n)
    if args.format == "dot":
        _emit(emit_dot(g), args.output)
    else:
        _emit(_dump(graph_to_json(g)), args.output)
    return EXIT_OK


def _numeric_raw(k: int, n: int) -> dict:
    from .numeric import MAX_SIZE, dense_sym_eig

    if k**n > MAX_SIZE:
        raise ResourceCapError(f"dense eigensolver is capped at {MAX_SIZE} vertices; k^n = {k**n}")
    res = dense_sym_eig(adjacency(build_graph(k, n)), level=n)
    return {
        "clusters": [{"value": v, "count": c} for v, c in res.clusters],
        "trace_residual": res.trace_residual,
        "frobenius_residual": res.frobenius_residual,
    }


def cmd_spectrum(args) -> int:
    if args.n < 0:
        raise UsageError("n must be >= 0")
    if args.k != 3:
        if args.k < 3:
            raise UsageError("k must be >= 3")
        if not args.numeric:
            raise UsageError(OPEN_PROBLEM)
        doc = {"schema_version": SCHEMA_VERSION, "k": args.k, "n": args.n, "closed_form": None,
               "numeric": _numeric_raw(args.k, args.n), "note": OPEN_PROBLEM}
        _emit(_dump(doc), args.output)
        return EXIT_OK

    table = sp.level_spectrum(args.n)
    if table.distinct_count > _max_spectrum_entries():
        raise ResourceCapError(
            f"level {args.n} has {table.distinct_count} distinct eigenvalues; "
            "raise HANOI_SCHREIER_MAX_SPECTRUM_ENTRIES to list them"
        )
    doc = table.to_json()
    doc["k"] = 3
    doc["distinct_count"] = table.distinct_count
    doc["multiplicity_sum"] = table.multiplicity_sum
    doc["char_poly"] = str(sp.char_poly_factored(args.n))
    status = EXIT_OK
    report = None
    if args.numeric:
        from .numeric import compare_with_closed_form

        if args.n > 7:
            raise ResourceCapError("numeric cross-check is limited to n <= 7")
        report = compare_with_closed_form(args.n)
        doc["numeric"] = report.to_json()
        status = EXIT_OK if report.passed else EXIT_FAIL
    if args.hecke:
        h = sp.hecke_spectrum(table)
        doc["hecke"] = [
            {"value": float(v), "enclosure": [float(lo), float(hi)], "multiplicity": int(m)}
            for v, lo, hi, m in zip(h.values, h.lo, h.hi, h.weights)
        ]

    if args.pretty:
        lines = [f"level {args.n}: {table.distinct_count} distinct eigenvalues, multiplicities sum to {table.multiplicity_sum}",
                 f"P_{args.n}(x) = {doc['char_poly']}", ""]
        lines.append(f"{'eigenvalue':>22}  {'mult':>8}  {'family':<14} path")
        for ev, mult, prov in table.entries():
            lines.append(f"{ev.value:22.15f}  {mult:8d}  {prov:<14} {ev.path_string or '-'}")
        if report is not None:
            lines += ["", f"numeric cross-check: {'PASS' if report.passed else 'FAIL'} "
                          f"(max deviation {report.max_deviation:.3e}, tolerance {report.tolerance:g})"]
        if args.hecke:
            lines += ["", "averaged operator (eigenvalues / 3):"]
            lines += [f"{e['value']:22.15f}  {e['multiplicity']:8d}" for e in doc["hecke"]]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_dump(doc), args.output)
    return status


def cmd_verify(args) -> int:
    try:
        results = verify.run_suite(seed=args.seed, points=args.points, full=args.full,
                                   mutation=args.inject_mutation, max_n=args.max_n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = all(r.passed for r in results)
    if args.pretty:
        text = "\n".join(r.line() for r in results)
        failing = [r.name for r in results if not r.passed]
        text += "\n" + ("all checks passed" if ok else "failing: " + ", ".join(failing)) + "\n"
        _emit(text, args.output)
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "seed": args.seed,
            "points": args.points,
            "passed": ok,
            "failing": [r.name for r in results if not r.passed],
            "checks": [r.to_json() for r in results],
        }
        _emit(_dump(doc), args.output)
    if not ok:
        for r in results:
            if not r.passed:
                print(f"verification failed: {r.name}: {r.detail}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _write_checked(path: Path, text: str, parse) -> int:
    """Write ``text`` and confirm it parses back; returns the row count."""
    path.write_text(text)
    rows = parse(path.read_text())
    return len(rows)


def cmd_plotdata(args) -> int:
    if not 1 <= args.aux_level <= MAX_AUX_LEVEL:
        raise UsageError(f"--aux-level must be in 1..{MAX_AUX_LEVEL}")
    if not 0 <= args.julia_depth <= MAX_JULIA_DEPTH:
        raise UsageError(f"--julia-depth must be in 0..{MAX_JULIA_DEPTH}")
    if not 0 <= args.kns_depth <= MAX_KNS_DEPTH:
        raise UsageError(f"--kns-depth must be in 0..{MAX_KNS_DEPTH}")
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    summary: dict = {"schema_version": SCHEMA_VERSION, "files": {}}

    ys = np.linspace(-args.y_range, args.y_range, args.samples)
    curves = dec.auxiliary_samples(args.aux_level, ys)
    name = f"auxiliary_level{args.aux_level}.csv"
    rows = _write_checked(out / name, dec.curves_to_csv(curves), dec.curves_from_csv)
    summary["files"][name] = {"rows": rows, "curves": dec.auxiliary_curve_count(args.aux_level)}

    atoms = sp.kns_atoms(args.kns_depth)
    rows = _write_checked(out / "kns_atoms.csv", sp.kns_atoms_csv(atoms), sp.kns_atoms_from_csv)
    summary["files"]["kns_atoms.csv"] = {"rows": rows, "total_mass": str(sum(a.mass for a in atoms))}

    j = sp.julia_approx(args.julia_depth)
    rows = _write_checked(out / "julia.csv", sp.julia_csv(j), sp.julia_from_csv)
    summary["files"]["julia.csv"] = {"rows": rows, **j.stats()}

    if args.hist_level is not None:
        from .numeric import dense_sym_eig, histogram_csv, histogram_from_csv

        if not 0 <= args.hist_level <= 7:
            raise UsageError("--hist-level must be in 0..7")
        table = sp.level_spectrum(args.hist_level)
        res = dense_sym_eig(adjacency(build_graph(3, args.hist_level)), gap=3e-6, level=args.hist_level)
        name = f"histogram_level{args.hist_level}.csv"
        rows = _write_checked(out / name, histogram_csv(res.clusters), histogram_from_csv)
        summary["files"][name] = {"rows": rows, "closed_form_distinct": table.distinct_count}

    _emit(_dump(summary), None)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hanoi-schreier", description="Hanoi Towers Schreier graphs and their spectra.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="emit the level-n Schreier graph")
    g.add_argument("-k", type=int, default=3, help="number of pegs (default 3)")
    g.add_argument("-n", type=int, required=True, help="level (number of disks)")
    g.add_argument("--format", choices=("dot", "json"), default="dot")
    g.add_argument("-o", "--output", help="output file (default stdout)")
    g.set_defaults(func=cmd_graph)

    s = sub.add_parser("spectrum", help="closed-form spectrum of level n (k = 3)")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-k", type=int, default=3)
    s.add_argument("--numeric", action="store_true", help="cross-check with the dense eigensolver")
    s.add_argument("--hecke", action="store_true", help="also list eigenvalues divided by 3")
    s.add_argument("--pretty", action="store_true", help="human-readable text instead of JSON")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spectrum)

    v = sub.add_parser("verify", help="run the exact and numeric verification suites")
    v.add_argument("--seed", type=int, default=0, help="seed for random rational sample points")
    v.add_argument("--points", type=int, default=20, help="sample points per level")
    v.add_argument("--max-n", type=int, default=4, choices=(2, 3, 4, 5), help="highest level for the recursion check")
    v.add_argument("--full", action="store_true", help="add char-poly, measure, containment, structure and numeric checks")
    v.add_argument("--pretty", action="store_true")
    v.add_argument("-o", "--output")
    v.add_argument("--inject-mutation", choices=verify.MUTATIONS, default=None, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("plotdata", help="write CSV files for plotting")
    d.add_argument("--aux-level", type=int, default=2, help=f"auxiliary-spectrum level (1..{MAX_AUX_LEVEL})")
    d.add_argument("--julia-depth", type=int, default=10)
    d.add_argument("--kns-depth", type=int, default=4)
    d.add_argument("--hist-level", type=int, default=None, help="also write a numeric eigenvalue histogram")
    d.add_argument("--samples", type=int, default=401, help="y samples per curve")
    d.add_argument("--y-range", type=float, default=3.0)
    d.add_argument("--outdir", default=".")
    d.set_defaults(func=cmd_plotdata)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hanoi-schreier {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"hanoi-schreier {args.command}: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"hanoi-schreier {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
