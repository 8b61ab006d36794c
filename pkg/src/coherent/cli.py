"""Command-line front end.

Exit status: 0 on success, Equal, ModelEqualOnly, a path found or a unique
normal form; 1 on NotEqual, ModelDistinct, no path, or a failed check;
2 on usage, syntax or typing errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import coherence, confluence, polytope, rewrite
from .graphmodel import evaluate, format_links, graph_to_dot, graph_to_json
from .syntax import ParseError, TypeMismatch, infer_type, parse_arrow, parse_formula, show

OK, FAIL, ERROR = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _system(name: str) -> rewrite.RewriteSystem:
    return rewrite.SYSTEMS[name]


def _cmd_parse(args, out):
    try:
        term, kind = parse_formula(args.text), "formula"
    except ParseError as formula_error:
        try:
            term, kind = parse_arrow(args.text), "arrow"
        except ParseError:
            raise formula_error from None
    text = show(term) if kind == "formula" else str(term)
    if args.format == "json":
        out.write(_dump({"kind": kind, "text": text}) + "\n")
    else:
        out.write(text + "\n")
    return OK


def _cmd_type(args, out):
    src, tgt = infer_type(parse_arrow(args.arrow))
    if args.format == "json":
        out.write(_dump({"source": show(src), "target": show(tgt)}) + "\n")
    else:
        out.write(f"{show(src)} |- {show(tgt)}\n")
    return OK


def _cmd_graph(args, out):
    g = evaluate(parse_arrow(args.arrow))
    if args.format == "json":
        out.write(_dump(graph_to_json(g)) + "\n")
    elif args.format == "dot":
        out.write(graph_to_dot(g))
    else:
        out.write(f"{show(g.source)} |- {show(g.target)}\n{format_links(g)}\n")
    return OK


def _cmd_equal(args, out):
    th = coherence.THEORIES[args.theory]
    d = coherence.decide_equal(parse_arrow(args.f), parse_arrow(args.g), th)
    if args.format == "json":
        out.write(_dump(d.to_json()) + "\n")
    else:
        out.write(d.verdict.value + "\n")
        for label, (src, tgt), g in (("f", d.type_f, d.graph_f), ("g", d.type_g, d.graph_g)):
            out.write(f"  {label}: {show(src)} |- {show(tgt)}  {{{format_links(g)}}}\n")
    good = d.verdict in (coherence.Verdict.EQUAL, coherence.Verdict.MODEL_EQUAL_ONLY)
    return OK if good else FAIL


def _write_path(p: rewrite.Path, fmt: str, out, head: str = ""):
    if fmt == "json":
        out.write(_dump(rewrite.path_to_json(p)) + "\n")
        return
    if head:
        out.write(head + "\n")
    steps = ", ".join(str(s) for s in p.steps) or "(empty)"
    out.write(f"  path ({len(p)} step{'s' if len(p) != 1 else ''}): {steps}\n")


def _cmd_normalize(args, out):
    nf, path = rewrite.normalize(parse_formula(args.formula), _system(args.system),
                                 strategy=args.strategy)
    _write_path(path, args.format, out, head=show(nf))
    return OK


def _cmd_reachable(args, out):
    p = rewrite.reachable(parse_formula(args.source), parse_formula(args.target),
                          _system(args.system))
    if p is None:
        if args.format == "json":
            out.write(_dump(None) + "\n")
        else:
            out.write("unreachable\n")
        return FAIL
    _write_path(p, args.format, out, head="reachable")
    return OK


def _cmd_critical_pairs(args, out):
    rows = confluence.confluence_report(_system(args.system), args.bound, args.disjoint)
    if args.format == "json":
        out.write(_dump(rows) + "\n")
    else:
        for r in rows:
            ls, rs = r["left_step"], r["right_step"]
            out.write(f"{r['peak']}  [{ls['rule']}@{ls['position'] or 'ε'} | "
                      f"{rs['rule']}@{rs['position'] or 'ε'}]  "
                      f"joined={r['joined']} commutes={r['commutes']}\n")
    return OK if all(r["joined"] and r["commutes"] for r in rows) else FAIL


def _cmd_newman(args, out):
    res = confluence.newman_check(_system(args.system), parse_formula(args.formula), args.bound)
    if args.format == "json":
        out.write(_dump({
            "verdict": res.verdict.value,
            "nf": show(res.nf) if res.nf is not None else None,
            "witness": str(res.witness) if res.witness is not None else None,
            "longest": res.longest,
            "states": res.states,
        }) + "\n")
    else:
        line = res.verdict.value
        if res.nf is not None:
            line += f" {show(res.nf)}"
        if res.witness is not None:
            line += f" {res.witness}"
        out.write(line + "\n")
    return OK if res.verdict is confluence.Verdict.UNIQUE_NF else FAIL


def _complex(args):
    letters = args.letters.split(",") if getattr(args, "letters", None) else None
    return polytope.associahedron(args.n, letters)


def _cmd_associahedron(args, out):
    cx = _complex(args)
    if args.format == "json":
        out.write(_dump(polytope.complex_to_json(cx)) + "\n")
    elif args.format == "dot":
        out.write(polytope.complex_to_dot(cx))
    else:
        kinds = polytope.complex_to_json(cx)["faces_by_kind"]
        out.write(f"vertices {len(cx.vertices)}  edges {len(cx.edges)}  faces {len(cx.faces)} "
                  f"({kinds['pentagon']} pentagons, {kinds['square']} squares)  "
                  f"V-E+F {cx.euler()}\n")
        for v in cx.vertices:
            out.write(f"  {show(v)}\n")
    return OK


def _cmd_check_faces(args, out):
    cx = _complex(args)
    ok = polytope.check_faces_commute(cx)
    conn = polytope.connected(cx)
    if args.format == "json":
        out.write(_dump({"n": args.n, "faces": len(cx.faces), "commute": ok,
                         "connected": conn}) + "\n")
    else:
        out.write(f"{len(cx.faces)} faces: {'all commute' if ok else 'FAILED'}; "
                  f"{'connected' if conn else 'not connected'}\n")
    return OK if ok and conn else FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coherent", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("text", "json")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("parse", help="parse and reprint a formula or arrow term")
    p.add_argument("text")
    fmt(p)
    p.set_defaults(run=_cmd_parse)

    p = sub.add_parser("type", help="source and target of an arrow term")
    p.add_argument("arrow")
    fmt(p)
    p.set_defaults(run=_cmd_type)

    p = sub.add_parser("graph", help="linking graph of an arrow term")
    p.add_argument("arrow")
    fmt(p, ("text", "json", "dot"))
    p.set_defaults(run=_cmd_graph)

    p = sub.add_parser("equal", help="decide equality of two arrow terms")
    p.add_argument("--theory", choices=sorted(coherence.THEORIES), required=True)
    p.add_argument("f")
    p.add_argument("g")
    fmt(p)
    p.set_defaults(run=_cmd_equal)

    systems = sorted(n for n in rewrite.SYSTEMS)
    p = sub.add_parser("normalize", help="normal form of a formula")
    p.add_argument("--system", choices=systems, default="monoidal-nf")
    p.add_argument("--strategy", choices=sorted(rewrite.STRATEGIES), default="innermost")
    p.add_argument("formula")
    fmt(p)
    p.set_defaults(run=_cmd_normalize)

    p = sub.add_parser("reachable", help="shortest rewrite path between two formulas")
    p.add_argument("--system", choices=systems, default="dissoc")
    p.add_argument("source")
    p.add_argument("target")
    fmt(p)
    p.set_defaults(run=_cmd_reachable)

    p = sub.add_parser("critical-pairs", help="critical pairs, their tiles and model checks")
    p.add_argument("--system", choices=systems, default="monoidal-nf")
    p.add_argument("--bound", type=int, default=confluence.DEFAULT_JOIN_BOUND)
    p.add_argument("--disjoint", action="store_true", help="add disjoint-position pairs")
    fmt(p)
    p.set_defaults(run=_cmd_critical_pairs)

    p = sub.add_parser("newman", help="bounded termination + local confluence from a formula")
    p.add_argument("--system", choices=systems, default="monoidal-nf")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("formula")
    fmt(p)
    p.set_defaults(run=_cmd_newman)

    for name, run, choices in (("associahedron", _cmd_associahedron, ("text", "json", "dot")),
                                ("check-faces", _cmd_check_faces, ("text", "json"))):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--letters", help="comma-separated letters, one per leaf")
        fmt(p, choices)
        p.set_defaults(run=run)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else OK
    try:
        return args.run(args, out)
    except (ParseError, TypeMismatch, coherence.FragmentError, rewrite.RewriteError,
            ValueError) as e:
        err.write(f"coherent {args.command}: {e}\n")
        return ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
