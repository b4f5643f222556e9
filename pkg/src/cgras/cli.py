"""Command-line front end.

Sub-commands::

    validate  structural report for a scheme
    adg       deterministic orientation and factorisation
    tables    encoding/decoding error-event tables
    bounds    rate inequalities (--enc cl|mcl, --dec sd|jd)
    region    project to the achievable region over message rates
    eval      numeric region on a distribution file (+ vertices in <= 3 dims)
    compare   implication between two schemes' regions

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bounds import (
    binning_bounds_cl, binning_bounds_mcl,
    decoding_bounds_jd, decoding_bounds_sd, prune_non_error_bounds,
)
from .entropy import render
from .fixtures import FIXTURES, fixture
from .graph import check_assumptions, close_assumptions, equivalent_adg, factorization
from .network import MessageId
from .polyhedra import Region, assemble_region, region_implies
from .schemefile import Options, SchemeParseError, fixture_scheme_text, parse_scheme
from .tables import decoding_table, encoding_table


def _load(args):
    """Scheme from --fixture or a file path / stdin."""
    if getattr(args, "fixture", None):
        text = fixture_scheme_text(args.fixture)
    elif getattr(args, "scheme", None):
        if args.scheme == "-":
            text = sys.stdin.read()
        else:
            with open(args.scheme, "r", encoding="utf-8") as fh:
                text = fh.read()
    else:
        raise SchemeParseError("usage", "need --fixture NAME or a scheme file")
    net, g, split, options = parse_scheme(text)
    if getattr(args, "auto_close", False):
        g = close_assumptions(g)
    if getattr(args, "enc", None):
        options.encoder_mode = args.enc
    if getattr(args, "dec", None):
        options.decoder_mode = args.dec
    if getattr(args, "prune", None) is not None:
        options.prune = args.prune
    return net, g, split, options


def _region_of(args) -> Region:
    net, g, split, options = _load(args)
    og = equivalent_adg(g)
    return assemble_region(
        og, split,
        encoder_mode=options.encoder_mode,
        decoder_mode=options.decoder_mode,
        prune=options.prune,
    )


def _region_json(region: Region) -> dict:
    return {
        "variables": [str(v) for v in region.variables],
        "rows": [
            {
                "coeffs": {str(v): [c.numerator, c.denominator] for v, c in row.coeffs},
                "sense": "<=",
                "rhs": json.loads(render(row.rhs, "json")),
            }
            for row in region.sorted_rows()
        ],
    }


def _emit_region(region: Region, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_region_json(region), sort_keys=True, indent=2)
    lines = []
    for row in region.sorted_rows():
        if fmt == "latex":
            lhs = " + ".join(
                (f"{c} " if c != 1 else "") + f"R_{{{v.msg}}}" for v, c in row.coeffs
            )
            lines.append(f"{lhs} \\le {render(row.rhs, 'latex')} \\\\")
        else:
            lines.append(str(row))
    return "\n".join(lines)


def cmd_validate(args) -> int:
    net, g, split, options = _load(args)
    report = check_assumptions(g)
    print(f"vertices: {len(g.vertices)}  superposition edges: {len(g.s_edges)}  "
          f"binning edges: {len(g.b_edges)}")
    print(f"joint binning transitive: {report.joint_binning_transitive}")
    print(f"no directed cycles:       {report.no_directed_cycles}")
    print(f"equal parents in cliques: {report.equal_parents}")
    for line in report.offenders:
        print(f"  ! {line}")
    return 0 if report.ok else 1


def cmd_adg(args) -> int:
    net, g, split, options = _load(args)
    og = equivalent_adg(g)
    print("order: " + ", ".join(str(v) for v in og.order()))
    print(str(factorization(og)))
    return 0


def cmd_tables(args) -> int:
    net, g, split, options = _load(args)
    og = equivalent_adg(g)
    blocks = [encoding_table(og, options.encoder_mode)]
    for z in net.decoders():
        blocks.append(decoding_table(og, z, options.decoder_mode))
    for t in blocks:
        if args.format == "latex":
            print(t.to_latex())
        elif args.format == "json":
            print(t.to_json())
        else:
            print(t.to_text())
        print()
    return 0


def cmd_bounds(args) -> int:
    net, g, split, options = _load(args)
    og = equivalent_adg(g)
    enc = binning_bounds_cl(og) if options.encoder_mode == "cl" else binning_bounds_mcl(og)
    out = {"encoding": [], "decoding": []}
    for ineq in enc:
        out["encoding"].append(str(ineq))
    for z in net.decoders():
        dec = decoding_bounds_sd(og, z) if options.decoder_mode == "sd" else decoding_bounds_jd(og, z)
        if options.prune:
            dec = prune_non_error_bounds(dec, net, z)
        for ineq in dec:
            out["decoding"].append(str(ineq))
    if args.format == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(f"# encoding ({options.encoder_mode})")
        for line in out["encoding"]:
            print(line)
        print(f"# decoding ({options.decoder_mode})")
        for line in out["decoding"]:
            print(line)
    return 0


def cmd_region(args) -> int:
    region = _region_of(args)
    print(_emit_region(region, args.format))
    return 0


def cmd_eval(args) -> int:
    from .numeric import enumerate_vertices, instantiate_region, load_pmf

    region = _region_of(args)
    pmf = load_pmf(args.pmf, _load(args)[0])
    nr = instantiate_region(region, pmf)
    rows = [
        {
            "coeffs": {str(v): [c.numerator, c.denominator] for v, c in coeffs},
            "rhs": rhs,
        }
        for coeffs, rhs in nr.rows
    ]
    doc = {"rows": rows}
    if len(nr.variables) <= 3:
        try:
            doc["vertices"] = [list(v) for v in enumerate_vertices(nr)]
        except ValueError as exc:
            doc["vertices_error"] = str(exc)
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for row in rows:
            lhs = " + ".join(
                (f"{n}/{d}·{v}" if (n, d) != (1, 1) else v)
                for v, (n, d) in row["coeffs"].items()
            )
            print(f"{lhs} ≤ {row['rhs']:.9f}")
        for v in doc.get("vertices", []):
            print("vertex: " + ", ".join(f"{c:.6f}" for c in v))
    return 0


def cmd_compare(args) -> int:
    ns_a = argparse.Namespace(**{**vars(args), "fixture": args.a, "scheme": None})
    ns_b = argparse.Namespace(**{**vars(args), "fixture": args.b, "scheme": None})
    ra, rb = _region_of(ns_a), _region_of(ns_b)
    forward = region_implies(ra, rb)
    backward = region_implies(rb, ra)
    verdict = (
        "equivalent" if forward and backward
        else "first implies second" if forward
        else "second implies first" if backward
        else "incomparable"
    )
    if args.format == "json":
        print(json.dumps({"a_implies_b": forward, "b_implies_a": backward,
                          "verdict": verdict}, sort_keys=True))
    else:
        print(verdict)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cgras",
        description="Achievable rate regions from chain-graph coding schemes.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scheme=True):
        if scheme:
            sp.add_argument("scheme", nargs="?", help="scheme file ('-' for stdin)")
            sp.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in scheme")
            sp.add_argument("--auto-close", action="store_true", dest="auto_close",
                            help="repair assumption violations by adding binning edges")
        sp.add_argument("--enc", choices=["cl", "mcl"], help="encoding bound mode")
        sp.add_argument("--dec", choices=["sd", "jd"], help="decoding bound mode")
        sp.add_argument("--prune", action=argparse.BooleanOptionalAction, default=None,
                        help="drop decoding events with no genuinely demanded message")
        sp.add_argument("--format", choices=["text", "latex", "json"], default="text")

    for name, fn in [
        ("validate", cmd_validate), ("adg", cmd_adg), ("tables", cmd_tables),
        ("bounds", cmd_bounds), ("region", cmd_region),
    ]:
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("eval")
    common(sp)
    sp.add_argument("--pmf", required=True, help="distribution file (JSON)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("compare")
    sp.add_argument("a", choices=sorted(FIXTURES))
    sp.add_argument("b", choices=sorted(FIXTURES))
    common(sp, scheme=False)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    os.environ.setdefault("CGRAS_COLOR", "auto")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SchemeParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
