"""Command line: ``hhgeom {run,verify-all,list,dump}``.

Exit status is 0 when every comparison passes, 1 on a comparison failure and
2 on validation or domain errors.
"""

import argparse
import json
import sys

from . import catalog, runner
from .errors import GeometryError

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2

TABLE_KEYS = (
    ["norm_nablaJ.%d", "norm_F.%d", "norm_N.%d", "norm_theta.%d", "tau_star.%d"],
    ["tau", "max_R", "constant_k", "nu", "nu_star2", "flat", "einstein"],
)


def _points(text):
    """``"x,y,z,w;x,y,z,w"`` -> list of points."""
    try:
        pts = [[float(v) for v in chunk.split(",")] for chunk in text.split(";") if chunk.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point list {text!r}") from None
    if not pts or any(len(p) != 4 for p in pts):
        raise argparse.ArgumentTypeError("each point needs four comma-separated coordinates")
    return pts


def build_parser():
    p = argparse.ArgumentParser(prog="hhgeom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol-zero", type=float, default=None)
        sp.add_argument("--tol-match", type=float, default=None)
        sp.add_argument("--format", choices=("table", "records"), default="table")
        sp.add_argument("--reference", choices=("printed", "corrected"), default="printed",
                        help="expected values: as printed, or with the catalog errata applied")

    r = sub.add_parser("run", help="evaluate one example or manifold file")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--example", help="catalog id (see `hhgeom list`)")
    src.add_argument("--file", help="declarative manifold JSON file")
    r.add_argument("--points", type=_points, help='explicit points, e.g. "0.3,0.2,0.5,0.1;1,0,0,0"')
    r.add_argument("--grid", type=int, help="N points per axis across the sample box")
    r.add_argument("--random", type=int, help="N seeded random points from the sample box")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--compare", action="store_true", help="diff against the expected closed forms")
    r.add_argument("--fd-check", action="store_true", help="AD vs central-difference cross-check")
    common(r)

    v = sub.add_parser("verify-all", help="run every catalog entry with compare on")
    v.add_argument("--random", type=int, default=0, help="extra seeded random points per entry")
    v.add_argument("--seed", type=int, default=0)
    common(v)

    sub.add_parser("list", help="list catalog ids")

    d = sub.add_parser("dump", help="print a catalog entry in the declarative JSON format")
    d.add_argument("example")
    return p


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def render_table(result, out):
    for rec, cmp in zip(result.records, result.comparisons):
        where = "(left-invariant)" if rec["point"] is None else "point " + ", ".join(f"{x:g}" for x in rec["point"])
        print(f"== {rec['example']}  {where}", file=out)
        print(f"   {'':<14}" + "".join(f"{'a=%d' % a:>20}" for a in (1, 2, 3)), file=out)
        for pattern in TABLE_KEYS[0]:
            name = pattern.split(".")[0]
            print(f"   {name:<14}" + "".join(f"{_fmt(rec[pattern % a]):>20}" for a in (1, 2, 3)), file=out)
        print("   " + "  ".join(f"{k}: {_fmt(rec[k])}" for k in TABLE_KEYS[1]), file=out)
        classes = [k[6:] for k, v in rec.items() if k.startswith("class.") and v]
        print("   classes: " + (", ".join(classes) or "none"), file=out)
        fd = {k: v for k, v in rec.items() if k.startswith("fd.")}
        if fd:
            print("   fd-check: " + "  ".join(f"{k[3:]}={v:.3g}" for k, v in sorted(fd.items())), file=out)
        if cmp:
            bad = [c for c in cmp if not c.ok]
            print(f"   compare: {len(cmp) - len(bad)}/{len(cmp)} pass", file=out)
            for c in bad:
                print(f"     FAIL {c.key}: expected {_fmt(c.expected)}, got {_fmt(c.actual)}", file=out)


def render_matrix(summary, out):
    groups = [g for g in runner.GROUPS if any(g in row for row in summary.matrix.values())]
    width = max(len(ex) for ex in summary.matrix) + 2
    print(f"{'example':<{width}}" + "".join(f"{g:>12}" for g in groups), file=out)
    for ex in sorted(summary.matrix):
        row = summary.matrix[ex]
        print(f"{ex:<{width}}" + "".join(f"{row.get(g, '.'):>12}" for g in groups), file=out)
    print(file=out)
    for ex in sorted(summary.theorems):
        st = summary.theorems[ex]
        print(f"{ex:<{width}}theorems " + "  ".join(f"{t}:{s}" for t, s in sorted(st.items())), file=out)
    n, k = len(summary.results), len(summary.passed)
    print(f"\n{k}/{n} examples pass against the {summary.reference} reference", file=out)
    for ex in sorted(set(summary.results) - set(summary.passed)):
        for rec, cmp in zip(summary.results[ex].records, summary.results[ex].comparisons):
            for c in cmp:
                if not c.ok:
                    print(f"  FAIL {ex} point {rec['point_index']}: {c.key} expected {_fmt(c.expected)}, "
                          f"got {_fmt(c.actual)}", file=out)


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for ex in catalog.list_examples():
                spec = catalog.get_data(ex)
                print(f"{ex:<16}{spec['kind']:<13}{spec['title']}", file=out)
            return EXIT_OK
        if args.command == "dump":
            print(catalog.to_json(catalog.get_data(args.example)), file=out)
            return EXIT_OK
        if args.command == "verify-all":
            summary = runner.verify_all(args.reference, random=args.random, seed=args.seed)
            if args.format == "records":
                for rec in summary.records():
                    print(runner.to_json_line(rec), file=out)
                print(runner.to_json_line(summary.summary_record()), file=out)
            else:
                render_matrix(summary, out)
            return EXIT_OK if summary.ok else EXIT_MISMATCH
        cfg = runner.RunConfig(
            example_id=args.example, manifold_file=args.file, points=args.points,
            grid=args.grid, random=args.random, seed=args.seed, tol_zero=args.tol_zero,
            tol_match=args.tol_match, compare=args.compare, reference=args.reference,
            fd_check=args.fd_check,
        )
        result = runner.run(cfg)
    except (GeometryError, OSError, json.JSONDecodeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "records":
        for rec in result.records:
            print(runner.to_json_line(rec), file=out)
    else:
        render_table(result, out)
    if cfg.compare and not result.ok:
        for rec, cmp in zip(result.records, result.comparisons):
            for c in cmp:
                if not c.ok:
                    print(f"mismatch: {result.example_id} point {rec['point_index']} {c.key}: "
                          f"expected {_fmt(c.expected)}, got {_fmt(c.actual)}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
