"""Command-line entry point: ``spectral-sketch <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .exact import ConvergenceError, DenseLimitError, exact_spectrum
from .graph import GraphError, RngStream, generate, load_edge_list, write_edge_list
from .io import (FormatError, format_distribution_csv, format_spectrum_csv,
                 read_distribution_file, write_text)
from .lp import LPError
from .partition import partition_spectrum_estimate
from .pipeline import estimate_spectrum
from .spectrum import discretize_spectrum, emd_w1
from .svg import cdf_svg

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _generate_sizes(kind: str, params: list[str]) -> list[int]:
    sizes = []
    for p in params:
        parts = p.lower().split("x") if kind == "grid2d" else [p]
        try:
            sizes.extend(int(x) for x in parts)
        except ValueError:
            raise UsageError(f"size parameter {p!r} is not an integer") from None
    if not sizes:
        raise UsageError(f"{kind} needs at least one size parameter")
    return sizes


def cmd_generate(args) -> int:
    kw = {}
    if args.kind == "ba":
        kw = {"attach": args.attach, "seed": args.seed}
    g = generate(args.kind, *_generate_sizes(args.kind, args.params), **kw)
    if args.out in (None, "-"):
        write_edge_list(g, sys.stdout)
    else:
        write_edge_list(g, args.out)
    return EXIT_OK


def cmd_exact(args) -> int:
    g = _load_graph(args.graph)
    spec = exact_spectrum(g, method=args.method)
    _emit(args.out, format_spectrum_csv(spec))
    return EXIT_OK


def cmd_estimate(args) -> int:
    g = _load_graph(args.graph)
    start = time.perf_counter()
    run = estimate_spectrum(g, walks=args.walks, length=args.length,
                            repeats=args.repeats, spacing=args.grid, seed=args.seed)
    elapsed = time.perf_counter() - start
    _emit(args.out, format_distribution_csv(run.distribution))
    if args.n_out:
        write_text(args.n_out, format_spectrum_csv(
            discretize_spectrum(g.n, run.distribution)))
    manifest = {
        "command": "estimate",
        "graph": str(args.graph),
        "n": g.n,
        "m": g.m,
        "walks": args.walks,
        "length": args.length,
        "repeats": args.repeats,
        "grid": args.grid,
        "seed": args.seed,
        "query_count": run.neighbor_queries,
        "vertex_queries": run.vertex_queries,
        "max_objective": max(run.objectives),
        "wall_time_s": round(elapsed, 6),
    }
    path = args.manifest or (None if args.out in (None, "-")
                             else f"{args.out}.manifest.json")
    if path:
        write_text(path, json.dumps(manifest, indent=2) + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    _, a = read_distribution_file(args.a)
    _, b = read_distribution_file(args.b)
    print(f"{emd_w1(a.normalized(), b.normalized()):.6f}")
    return EXIT_OK


def cmd_partition_estimate(args) -> int:
    g = _load_graph(args.graph)
    est = partition_spectrum_estimate(g, args.max_component, args.samples,
                                      RngStream(args.seed, 0))
    _emit(args.out, format_distribution_csv(est.distribution))
    cert = dict(est.certificate(), seed=args.seed)
    path = args.certificate or (None if args.out in (None, "-")
                                else f"{args.out}.certificate.json")
    if path:
        write_text(path, json.dumps(cert, indent=2) + "\n")
    if args.partition_out:
        write_text(args.partition_out, est.partition.to_csv())
    return EXIT_OK


def cmd_plot(args) -> int:
    curves = [("estimate", read_distribution_file(args.spectrum)[1].normalized())]
    if args.truth:
        curves.append(("truth", read_distribution_file(args.truth)[1].normalized()))
    write_text(args.out, cdf_svg(curves))
    return EXIT_OK


def _load_graph(path):
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def _emit(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        write_text(path, text)


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{s!r} must be at least 1")
    return v


def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{s!r} must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spectral-sketch",
                description="Estimate normalized-Laplacian spectra from random walks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    s.add_argument("kind", choices=["cycle", "complete", "path", "grid2d", "star", "ba"])
    s.add_argument("params", nargs="+",
                   help="sizes; grid2d takes ROWSxCOLS or ROWS COLS, star takes leaves")
    s.add_argument("--attach", type=_positive_int, default=3,
                   help="edges per new vertex for ba (default 3)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("exact", help="dense eigensolve of the normalized Laplacian")
    s.add_argument("graph")
    s.add_argument("--method", choices=["lapack", "jacobi"], default="lapack")
    s.add_argument("--out")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("estimate", help="random-walk moment estimate of the spectrum")
    s.add_argument("graph")
    s.add_argument("--walks", type=_positive_int, default=10_000)
    s.add_argument("--length", type=_positive_int, default=20)
    s.add_argument("--repeats", type=_positive_int, default=20)
    s.add_argument("--grid", type=_positive_float, default=0.01)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--n-out", help="also write the length-n discretized spectrum here")
    s.add_argument("--manifest", help="run manifest path (default OUT.manifest.json)")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("compare", help="print W1 between two spectrum files")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("partition-estimate",
                       help="spectrum from small connected pieces with a W1 certificate")
    s.add_argument("graph")
    s.add_argument("--max-component", type=_positive_int, default=100)
    s.add_argument("--samples", type=_positive_int, default=20_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--certificate",
                   help="certificate JSON path (default OUT.certificate.json)")
    s.add_argument("--partition-out", help="write the vertex,component CSV here")
    s.set_defaults(func=cmd_partition_estimate)

    s = sub.add_parser("plot", help="SVG of the spectral CDF")
    s.add_argument("spectrum")
    s.add_argument("--truth", help="second spectrum overlaid in red")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spectral-sketch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LPError, ConvergenceError) as exc:
        print(f"spectral-sketch: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DenseLimitError as exc:
        print(f"spectral-sketch: {exc}; use 'estimate' instead", file=sys.stderr)
        return EXIT_DATA
    except (GraphError, FormatError, ValueError, OSError) as exc:
        print(f"spectral-sketch: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
