"""zdg command line: graphs, spectra, characteristic polynomials, verification, census."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .construct import compressed_graph, extended_graph, weighted_quotient_matrix, zero_divisor_graph
from .graphs import to_csv, to_dot
from .linalg import charpoly, rank
from .rings import Locality, RingAxiomError, RingSpecError, build_ring, is_local, parse_ring_spec
from .spectra import GROUPING_TOL, VALUE_RTOL, spectrum_of_ring
from .verify import SUITES, SuiteOptions, aggregate, exit_code, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _default_threads() -> int:
    raw = os.environ.get("ZDG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise SystemExit(f"zdg: ZDG_THREADS must be an integer, got {raw!r}")


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _poly_json(p) -> list[str]:
    return [str(c) for c in p.coeffs]


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------


def cmd_graph(args) -> int:
    ring = build_ring(args.spec)
    name = str(parse_ring_spec(args.spec))
    if args.compressed and args.extended:
        raise ValueError("--compressed and --extended are mutually exclusive")
    sizes = None
    if args.compressed:
        cg = compressed_graph(ring)
        g, sizes = cg.as_graph(), list(cg.sizes)
        title = f"G_E({name})"
    elif args.extended:
        g = extended_graph(ring)
        title = f"EG({name})"
    else:
        g = zero_divisor_graph(ring)
        title = f"G({name})"
    if args.format == "dot":
        attrs = {i: {"size": s} for i, s in enumerate(sizes)} if sizes else None
        text = to_dot(g, name=title, vertex_attrs=attrs)
    elif args.format == "csv":
        text = to_csv(g.adjacency.astype(int), g.labels)
    else:
        obj = {"ring": name, "graph": title, "labels": list(g.labels), "adjacency": g.adjacency.astype(int).tolist()}
        if sizes:
            obj["sizes"] = sizes
        text = json.dumps(obj, ensure_ascii=False) + "\n"
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# spectrum / charpoly
# ---------------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    ring = build_ring(args.spec)
    g = zero_divisor_graph(ring)
    spec = spectrum_of_ring(ring, tol=args.tol)
    chi_q = charpoly(weighted_quotient_matrix(compressed_graph(ring)))
    chi = charpoly(g.adjacency)
    obj = {
        "ring": str(parse_ring_spec(args.spec)),
        "vertices": g.order,
        "spectrum": spec.to_json_obj(),
        "nullity": g.order - rank(g.adjacency),
        "charpoly": _poly_json(chi),
        "compressed_charpoly": _poly_json(chi_q),
    }
    _emit(json.dumps(obj, ensure_ascii=False) + "\n", args.output)
    return EXIT_OK


def cmd_charpoly(args) -> int:
    ring = build_ring(args.spec)
    if args.compressed and args.extended:
        raise ValueError("--compressed and --extended are mutually exclusive")
    if args.compressed:
        kind, m = "compressed-quotient", weighted_quotient_matrix(compressed_graph(ring))
    elif args.extended:
        kind, m = "extended", extended_graph(ring).adjacency
    else:
        kind, m = "adjacency", zero_divisor_graph(ring).adjacency
    p = charpoly(m)
    obj = {"ring": str(parse_ring_spec(args.spec)), "matrix": kind, "charpoly": _poly_json(p), "text": str(p)}
    _emit(json.dumps(obj, ensure_ascii=False) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    opts = SuiteOptions(max_size=args.max_size, ring=args.ring, threads=args.threads, value_tol=args.tol)
    reports = run_suite(args.suite, opts)
    shown = reports if (args.per_ring or args.ring) else aggregate(reports)
    _emit("".join(r.to_json() + "\n" for r in shown), args.output)
    return exit_code(reports, strict=args.strict)


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N_MIN..N_MAX, got {text!r}") from None
    if not 2 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"need 2 <= n_min <= n_max, got {lo}..{hi}")
    return lo, hi


_LOCALITY = {True: Locality.LOCAL.value, False: Locality.NONLOCAL.value, None: Locality.UNKNOWN.value}


def census_record(spec: str, timing: bool = False) -> dict:
    start = time.perf_counter()
    ring = build_ring(spec)
    g = zero_divisor_graph(ring)
    chi_q = charpoly(weighted_quotient_matrix(compressed_graph(ring)))
    record = {
        "ring": str(parse_ring_spec(spec)),
        "vertices": g.order,
        "compressed_vertices": len(ring.zero_divisor_classes),
        "nullity": g.order - rank(g.adjacency),
        "charpoly": _poly_json(chi_q),
        "loops": g.loop_count,
        "locality": _LOCALITY[is_local(ring)],
        "timing_ms": None,
    }
    if timing:
        record["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return record


def cmd_census(args) -> int:
    lo, hi = args.range
    specs = [f"Z{n}" for n in range(lo, hi + 1)] + list(args.spec or [])
    for s in specs:
        parse_ring_spec(s)
    # open first so an unwritable path fails before any work
    out = open(args.output, "w", encoding="utf-8") if args.output else None
    try:
        fn = lambda s: census_record(s, timing=args.timing)
        if args.threads > 1 and len(specs) > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                records = list(pool.map(fn, specs))
        else:
            records = [fn(s) for s in specs]
        text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
        (out or sys.stdout).write(text)
    finally:
        if out:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    threads = _default_threads()
    p = argparse.ArgumentParser(prog="zdg", description="Zero-divisor graphs of finite commutative rings.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="export Gamma(R), its compressed or extended graph")
    g.add_argument("spec", help='ring, e.g. Z8, "Z8xZ4", fixture:ex34, table:ring.json')
    g.add_argument("--format", choices=("dot", "csv", "json"), default="dot")
    g.add_argument("--compressed", action="store_true", help="annihilator-class graph with size attributes")
    g.add_argument("--extended", action="store_true", help="extended graph on all ring elements")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_graph)

    s = sub.add_parser("spectrum", help="eigenvalues with multiplicities, nullity and charpoly")
    s.add_argument("spec")
    s.add_argument("--tol", type=float, default=GROUPING_TOL, help="multiplicity grouping tolerance")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("charpoly", help="exact characteristic polynomial (ascending coefficients)")
    c.add_argument("spec")
    c.add_argument("--compressed", action="store_true", help="weighted quotient matrix of the compressed graph")
    c.add_argument("--extended", action="store_true", help="adjacency matrix of the extended graph")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_charpoly)

    v = sub.add_parser("verify", help="run verification suites, JSON Lines output")
    v.add_argument("suite", choices=("all",) + SUITES)
    v.add_argument("--ring", help="check a single ring instead of the corpus")
    v.add_argument("--max-size", type=int, help="largest ring size in the corpus")
    v.add_argument("--strict", action="store_true", help="errata verdicts also give exit code 1")
    v.add_argument("--per-ring", action="store_true", help="one line per instance instead of per claim")
    v.add_argument("--threads", type=int, default=threads)
    v.add_argument("--tol", type=float, default=VALUE_RTOL, help="relative tolerance for spectral comparisons")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("census", help="one JSON record per Z_n in a range")
    k.add_argument("range", type=_parse_range, metavar="N_MIN..N_MAX")
    k.add_argument("-o", "--output")
    k.add_argument("--spec", action="append", help="extra ring spec to include (repeatable)")
    k.add_argument("--threads", type=int, default=threads)
    k.add_argument("--timing", action="store_true", help="fill timing_ms (makes output nondeterministic)")
    k.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except (RingSpecError, RingAxiomError, ValueError, OSError, KeyError) as exc:
        print(f"zdg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
