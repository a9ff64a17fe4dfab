"""Command-line entry point.

Exit codes: 0 success / certified, 2 numerical-only verdict, 3 unknown or
inconclusive, 1 error.  Data goes to stdout (or --out); progress to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction

from .classify import classify_recurrence
from .constructions import BUILTIN_FAMILIES, family_from_config
from .cycles import (
    enumerate_cycles,
    min_cycle_transversal,
    sup_cycle_gain,
)
from .digraph import WeightedDigraph
from .errors import BudgetExceededError, MetadataError
from .families import family_to_float, truncate
from .inequalities import SUITES, run_suite
from .rational import weight_to_str
from .spectral import charpoly, perron_ladder, perron_root
from .sweeps import SweepSpec, fit_decay, run_sweep, sweep_csv, sweep_json

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NUMERICAL = 2
EXIT_UNKNOWN = 3


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _load_digraph(args) -> WeightedDigraph:
    if getattr(args, "digraph", None):
        if args.digraph == "-":
            text = sys.stdin.read()
        else:
            with open(args.digraph) as fh:
                text = fh.read()
        return WeightedDigraph.from_json(text, mode=args.mode)
    if getattr(args, "family", None):
        fam = _load_family(args)
        n = args.n
        if n is None:
            raise SystemExit("--n is required with --family")
        return truncate(fam, n)
    raise SystemExit("provide --digraph FILE or --family NAME --n N")


def _load_family(args):
    params = json.loads(args.params) if getattr(args, "params", None) else {}
    fam = family_from_config(args.family, params)
    if args.mode == "float":
        fam = family_to_float(fam)
    return fam


def _gain_payload(g) -> dict:
    return {
        "value": g.value,
        "weight": weight_to_str(g.weight),
        "length": g.length,
    }


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_cycles(args) -> int:
    d = _load_omega_host(args) if args.cycles_op == "omega" else _load_digraph(args)
    if args.cycles_op == "enumerate":
        stream = enumerate_cycles(d, max_length=args.max_len, max_count=args.max_count)
        cycles = [
            {
                "vertices": [v + 1 for v in c.vertices],
                "length": c.length,
                "weight": weight_to_str(c.weight),
                "gain": _gain_payload(c.gain),
            }
            for c in stream
        ]
        _emit(json.dumps({"cycles": cycles, "truncated": stream.truncated}, indent=2),
              args.out)
        return EXIT_OK
    if args.cycles_op == "fvs":
        res = min_cycle_transversal(d, budget=args.budget)
        _emit(json.dumps({
            "vertices": sorted(v + 1 for v in res.vertices),
            "size": res.size,
            "optimality": res.optimality,
        }, indent=2), args.out)
        return EXIT_OK if res.optimality == "exact" else EXIT_NUMERICAL
    if args.cycles_op == "omega":
        family_mode = bool(getattr(args, "family", None)) and args.n is not None
        g = sup_cycle_gain(
            d, max_length=args.n, proper_only=not (args.improper or family_mode)
        )
        _emit(json.dumps({"omega": _gain_payload(g), "max_length": args.n}, indent=2),
              args.out)
        return EXIT_OK
    raise SystemExit(f"unknown cycles op {args.cycles_op}")


def _load_omega_host(args) -> WeightedDigraph:
    """For families, include the window truncation containing all short cycles."""
    if getattr(args, "family", None) and args.n is not None:
        fam = _load_family(args)
        window = fam.omega_window(args.n) if fam.omega_window is not None else args.n
        return truncate(fam, max(window, args.n))
    return _load_digraph(args)


def _cmd_spectral(args) -> int:
    if args.spectral_op == "perron":
        d = _load_digraph(args)
        _emit(json.dumps({"perron_root": perron_root(d, tol=args.tol)}, indent=2), args.out)
        return EXIT_OK
    if args.spectral_op == "charpoly":
        d = _load_digraph(args)
        coeffs = charpoly(d, method=args.method)
        _emit(json.dumps({
            "method": args.method,
            "coefficients": [weight_to_str(c) for c in coeffs],
            "nonzero_eig_count": len(coeffs) - 1,
            "det_at_one": weight_to_str(sum(coeffs)),
        }, indent=2), args.out)
        return EXIT_OK
    if args.spectral_op == "ladder":
        fam = _load_family(args)
        ns = [int(x) for x in args.n_list.split(",")]
        spec = perron_ladder(fam, ns, mode=args.ladder_mode)
        lines = ["n,lambda_n,gap_to_limit"]
        for n in sorted(spec.values):
            gap = ""
            if spec.limit_method == "closed-form":
                gap = repr(spec.limit_estimate - spec.values[n])
            lines.append(f"{n},{spec.values[n]!r},{gap}")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    raise SystemExit(f"unknown spectral op {args.spectral_op}")


def _cmd_classify(args) -> int:
    fam = _load_family(args)
    verdict = classify_recurrence(
        fam, n_max=args.n_max, p_max=args.p_max, vertex=args.vertex
    )
    payload = {
        "family": args.family,
        "verdict": verdict.verdict,
        "confidence": verdict.confidence,
        "evidence": None if verdict.evidence is None else {
            "kind": type(verdict.evidence).__name__,
            **{k: (list(v) if isinstance(v, tuple) else (str(v) if isinstance(v, Fraction) else v))
               for k, v in dataclasses.asdict(verdict.evidence).items()},
        },
        "notes": list(verdict.notes),
    }
    _emit(json.dumps(payload, indent=2, default=str), args.out)
    if verdict.verdict == "unknown":
        return EXIT_UNKNOWN
    return EXIT_OK if verdict.confidence == "certified" else EXIT_NUMERICAL


def _cmd_construct(args) -> int:
    fam = _load_family(args)
    d = truncate(fam, args.emit_truncation)
    _emit(d.to_json(), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_suite(
        args.suite,
        count=args.count,
        seed=args.seed,
        order_max=args.order_max,
        mode=args.mode,
        sigma_k=args.k,
    )
    _emit(json.dumps(report.to_json_dict(), indent=2), args.out)
    return EXIT_OK if report.ok else EXIT_ERROR


def _cmd_sweep(args) -> int:
    spec = SweepSpec(
        family=args.family,
        params=json.loads(args.params) if args.params else {},
        n_grid=tuple(int(x) for x in args.n_grid.split(",")) if args.n_grid else (),
        seed=args.seed,
        mode=args.mode,
        out_format=args.format,
        compute_fvs=not args.no_fvs,
    )
    rows = run_sweep(spec)
    _emit(sweep_csv(rows) if args.format == "csv" else sweep_json(rows), args.out)
    return EXIT_OK


def _cmd_fit(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input) as fh:
            text = fh.read()
    x_col, y_col = 0, 1
    pairs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if parts[0] == "n" or not parts[0].lstrip("-").replace(".", "").isdigit():
            header = [p.strip() for p in parts]
            if args.x_col in header:
                x_col = header.index(args.x_col)
            if args.y_col in header:
                y_col = header.index(args.y_col)
            continue
        pairs.append((float(parts[x_col]), float(parts[y_col])))
    window = None
    if args.window:
        lo, hi = args.window.split(":")
        window = (int(lo), int(hi))
    fit = fit_decay(pairs, window=window, log_correction=args.log_correction)
    _emit(json.dumps(dataclasses.asdict(fit), indent=2), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, family_ok=True, digraph_ok=True):
    p.add_argument("--mode", choices=("exact", "float"), default="exact",
                   help="arithmetic mode for weights")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if digraph_ok:
        p.add_argument("--digraph", help="digraph JSON file ('-' for stdin)")
    if family_ok:
        p.add_argument("--family", choices=BUILTIN_FAMILIES, help="built-in family name")
        p.add_argument("--params", help="family parameters as a JSON object")
        p.add_argument("--n", type=int, default=None, help="truncation order for --family")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="substochastic",
        description="Spectral analysis of substochastic weightings of strong digraphs",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    cyc = sub.add_parser("cycles", help="cycle enumeration, transversals, gain suprema")
    cyc_sub = cyc.add_subparsers(dest="cycles_op", required=True)
    p = cyc_sub.add_parser("enumerate")
    _add_common(p)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--max-count", type=int, default=None)
    p = cyc_sub.add_parser("fvs")
    _add_common(p)
    p.add_argument("--budget", type=int, default=200_000)
    p = cyc_sub.add_parser("omega")
    _add_common(p)
    p.add_argument("--improper", action="store_true",
                   help="include the cycle equal to the whole digraph")
    cyc.set_defaults(func=_cmd_cycles)

    spec = sub.add_parser("spectral", help="Perron roots, characteristic polynomials, ladders")
    spec_sub = spec.add_subparsers(dest="spectral_op", required=True)
    p = spec_sub.add_parser("perron")
    _add_common(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p = spec_sub.add_parser("charpoly")
    _add_common(p)
    p.add_argument("--method", choices=("coates", "elimination"), default="elimination")
    p = spec_sub.add_parser("ladder")
    _add_common(p, digraph_ok=False)
    p.add_argument("--n-list", required=True, help="comma-separated truncation orders")
    p.add_argument("--ladder-mode", choices=("leading", "sup_exact", "witness"),
                   default="leading")
    spec.set_defaults(func=_cmd_spectral)

    cls = sub.add_parser("classify", help="transience/recurrence verdict for a family")
    _add_common(cls, digraph_ok=False)
    cls.add_argument("--n-max", type=int, default=120)
    cls.add_argument("--p-max", type=int, default=1000)
    cls.add_argument("--vertex", type=int, default=None)
    cls.set_defaults(func=_cmd_classify)

    con = sub.add_parser("construct", help="build a named family and emit a truncation")
    con.add_argument("family", choices=BUILTIN_FAMILIES)
    con.add_argument("--params", help="JSON parameters")
    con.add_argument("--emit-truncation", type=int, required=True)
    con.add_argument("--mode", choices=("exact", "float"), default="exact")
    con.add_argument("--out", default=None)
    con.set_defaults(func=_cmd_construct)

    ver = sub.add_parser("verify", help="run a determinant-inequality suite")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--count", type=int, default=100)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--order-max", type=int, default=8)
    ver.add_argument("--mode", choices=("exact", "float"), default="exact")
    ver.add_argument("--k", type=int, default=None, help="sigma_k degree (default: all)")
    ver.add_argument("--out", default=None)
    ver.set_defaults(func=_cmd_verify)

    sw = sub.add_parser("sweep", help="per-n ladder/gain sweep over a family")
    sw.add_argument("--family", choices=BUILTIN_FAMILIES, required=True)
    sw.add_argument("--params", help="JSON parameters")
    sw.add_argument("--n-grid", help="comma-separated strictly increasing orders")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--mode", choices=("exact", "float"), default="float")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--no-fvs", action="store_true", help="skip the transversal column")
    sw.add_argument("--out", default=None)
    sw.set_defaults(func=_cmd_sweep)

    fit = sub.add_parser("fit", help="fit a decay exponent to (n, gap) pairs")
    fit.add_argument("--input", required=True, help="CSV of n,gap rows ('-' for stdin)")
    fit.add_argument("--x-col", default="n", help="x column name when a header is present")
    fit.add_argument("--y-col", default="gap_to_limit", help="y column name")
    fit.add_argument("--window", help="index range lo:hi")
    fit.add_argument("--log-correction", action="store_true")
    fit.add_argument("--out", default=None)
    fit.set_defaults(func=_cmd_fit)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceededError, MetadataError, ValueError, OSError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
