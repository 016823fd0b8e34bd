"""Command-line interface.

Exit codes: 0 the property holds (or the command succeeded), 1 it fails
(a JSON witness is printed), 2 usage or input error, 3 an exploration
budget or enumeration cap was exceeded, so the answer is inconclusive.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import families, hyperplane as hp, io, periagroup as pg, recognition as rec, rotation as rot
from .errors import (
    AngleMismatchError, BudgetExceededError, CapExceededError, MediangleError, VerificationError,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _json_arg(value):
    """Inline JSON text, or the path of a JSON file."""
    path = Path(value)
    if path.exists():
        return io.read_json(path)
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        raise argparse.ArgumentTypeError(f"{value!r} is neither a file nor valid JSON") from None


def _int_list(value: str) -> list:
    if not value:
        return []
    try:
        return sorted({int(x) for x in value.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def _emit(args, obj) -> None:
    sys.stdout.write(io.dumps(obj))


def _graph(args):
    if args.input is None:
        raise argparse.ArgumentTypeError("--in is required")
    return io.read_graph(args.input)


def _presentation(args):
    if args.presentation is None:
        raise argparse.ArgumentTypeError("--presentation is required")
    return io.read_presentation(args.presentation)


def _word(p, value, flag):
    if value is None:
        raise argparse.ArgumentTypeError(f"{flag} is required")
    obj = _json_arg(value)
    if not isinstance(obj, list):
        raise argparse.ArgumentTypeError(f"{flag}: a word is a JSON list of syllables")
    return p.word(obj)


def cmd_recognize(args):
    g = _graph(args)
    if args.cls == "all":
        labels = rec.classify(g, args.max_cycle_len)
        _emit(args, {"labels": sorted(labels)})
        return EXIT_OK
    if args.cls == rec.MEDIANGLE:
        v = rec.is_mediangle(g, args.max_cycle_len, args.margin)
    else:
        v = rec.recognize(g, args.cls, args.max_cycle_len)
    _emit(args, v.to_json())
    return EXIT_OK if v.holds else EXIT_FAIL


def cmd_hyperplanes(args):
    g = _graph(args)
    hs = hp.system(g, args.max_cycle_len)
    if args.format == "dot":
        sys.stdout.write(io.to_dot(g, colouring=hs.edge_colouring()))
        return EXIT_OK
    out = []
    for h in hs.hyperplanes:
        car = hs.carrier(h.id)
        out.append({"id": h.id, "edges": [list(e) for e in h.edges],
                    "sectors": [list(s) for s in hs.sectors(h.id).sectors],
                    "carrier": {"vertices": list(car.vertices), "fibres": [list(f) for f in car.fibres],
                                "degenerate": car.degenerate}})
    _emit(args, {"cap_used": hs.max_len, "hyperplanes": out})
    return EXIT_OK


def cmd_angles(args):
    g = _graph(args)
    hs = hp.system(g, args.max_cycle_len)
    try:
        table = hs.angle_table()
    except AngleMismatchError as exc:
        _emit(args, {"holds": False, "witness": str(exc)})
        return EXIT_FAIL
    _emit(args, {"holds": True, "cap_used": hs.max_len,
                 "angles": [{"hyperplanes": [a, b], **ang.to_json()} for (a, b), ang in sorted(table.items())]})
    return EXIT_OK


def cmd_verify_bighyp(args):
    g = _graph(args)
    report = hp.verify_bighyp(g, args.max_cycle_len, seed=args.seed)
    out = report.to_json()
    try:
        emb = hp.verify_isometric_embedding(g, args.max_cycle_len)
        out["embedding"] = emb.to_json()
    except MediangleError as exc:
        out["embedding"] = {"holds": False, "error": str(exc)}
    _emit(args, out)
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_normal_form(args):
    p = _presentation(args)
    w = _word(p, args.word, "--word")
    cf = pg.canonical_form(p, w, args.budget)
    _emit(args, {"word": pg.word_to_json(cf), "length": len(cf)})
    return EXIT_OK


def cmd_word_equal(args):
    p = _presentation(args)
    w1 = _word(p, args.word, "--word")
    w2 = _word(p, args.word2, "--word2")
    eq = pg.words_equal(p, w1, w2, args.budget)
    _emit(args, {"equal": eq, "normal_forms": [pg.word_to_json(pg.canonical_form(p, w, args.budget))
                                               for w in (w1, w2)]})
    return EXIT_OK if eq else EXIT_FAIL


def cmd_cayley_ball(args):
    p = _presentation(args)
    ball = pg.cayley_ball(p, args.radius, args.cap, args.budget)
    if args.format == "dot":
        labels = {e: f"{s.vertex}:{s.element}" for e, s in ball.labels.items()}
        sys.stdout.write(io.to_dot(ball.graph, labels=labels))
    elif args.format == "edgelist":
        sys.stdout.write(io.edge_list(ball.graph))
    else:
        _emit(args, ball.to_json())
    return EXIT_OK


def cmd_coset_rep(args):
    p = _presentation(args)
    w = _word(p, args.word, "--word")
    rep = pg.coset_min_rep(p, w, args.subset, args.budget)
    _emit(args, {"word": pg.word_to_json(rep), "length": len(rep)})
    return EXIT_OK


def cmd_semidirect(args):
    p = _presentation(args)
    report = pg.verify_semidirect(p, pg.cayley_ball(p, vertex_cap=args.cap, budget=args.budget))
    _emit(args, report)
    return EXIT_OK if report["holds"] else EXIT_FAIL


def cmd_parabolic_intersect(args):
    p = _presentation(args)
    ball = pg.cayley_ball(p, vertex_cap=args.cap, budget=args.budget)
    g = _word(p, args.g or "[]", "--g")
    h = _word(p, args.h or "[]", "--h")
    try:
        res = pg.parabolic_intersection(p, ball, (g, args.phi), (h, args.psi))
    except VerificationError as exc:
        _emit(args, {"holds": False, "witness": str(exc)})
        return EXIT_FAIL
    _emit(args, {"holds": True, "k": pg.word_to_json(res.k), "xi": list(res.xi),
                 "order": len(res.elements), "projection": list(res.projection)})
    return EXIT_OK


def _action(args):
    if args.input is None:
        raise argparse.ArgumentTypeError("--in is required")
    return rot.GroupAction.from_json(io.read_json(args.input))


def cmd_rotation_verify(args):
    action, subs = _action(args)
    report = rot.verify_rotation_system(action, subs)
    _emit(args, report.to_json())
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_rotation_extract(args):
    action, subs = _action(args)
    report = rot.verify_rotation_system(action, subs)
    if not report.holds:
        _emit(args, report.to_json())
        return EXIT_FAIL
    try:
        p = rot.extract_periagroup(action, subs, args.basepoint)
    except VerificationError as exc:
        _emit(args, {"holds": False, "witness": str(exc)})
        return EXIT_FAIL
    _emit(args, p.to_json())
    return EXIT_OK


def cmd_rotation_subgroup(args):
    if args.presentation is not None:
        p = _presentation(args)
        source = pg.cayley_ball(p, vertex_cap=args.cap, budget=args.budget)
    else:
        source, _ = _action(args)
    dec = rot.rotation_subgroup(source, args.seed, args.basepoint, args.max_cycle_len)
    _emit(args, dec.to_json())
    return EXIT_OK if dec.holds else EXIT_FAIL


def cmd_generate(args):
    spec = args.family if not args.params else f"{args.family}:{','.join(args.params)}"
    p = io.read_presentation(args.presentation) if args.presentation else None
    g = families.generate(spec, presentation=p)
    if args.format == "dot":
        sys.stdout.write(io.to_dot(g))
    elif args.format == "edgelist":
        sys.stdout.write(io.edge_list(g))
    else:
        _emit(args, io.graph_to_json(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mediangle", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text, *flags):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("json", "dot", "edgelist"), default="json")
        if "graph" in flags:
            sp.add_argument("--in", dest="input", help="graph file (JSON or edge list) or action JSON")
            sp.add_argument("--max-cycle-len", type=int, default=None,
                            help="longest convex cycle searched (default: twice the diameter)")
        if "presentation" in flags:
            sp.add_argument("--presentation", help="presentation JSON file")
            sp.add_argument("--budget", type=int, default=None,
                            help="flip-closure node budget (default 1e6 or $MEDIANGLE_BUDGET)")
        if "word" in flags:
            sp.add_argument("--word", help="word JSON file or inline JSON")
        if "cap" in flags:
            sp.add_argument("--cap", type=int, default=pg.DEFAULT_VERTEX_CAP, help="group element cap")
        return sp

    sp = add("recognize", cmd_recognize, "decide membership in a graph class", "graph")
    sp.add_argument("--class", dest="cls", default="mediangle", choices=rec.LABELS + ("all",))
    sp.add_argument("--margin", type=int, default=None, help="boundary margin for graphs flagged as balls")
    add("hyperplanes", cmd_hyperplanes, "list hyperplanes with sectors and carriers", "graph")
    add("angles", cmd_angles, "exact angles between transverse hyperplanes", "graph")
    sp = add("verify-bighyp", cmd_verify_bighyp, "check sector convexity and separation counts", "graph")
    sp.add_argument("--seed", type=int, default=0, help="seed for random geodesic trees")
    add("normal-form", cmd_normal_form, "canonical reduced word", "presentation", "word")
    sp = add("word-equal", cmd_word_equal, "decide whether two words are equal", "presentation", "word")
    sp.add_argument("--word2", help="second word JSON file or inline JSON")
    sp = add("cayley-ball", cmd_cayley_ball, "Cayley graph ball around the identity", "presentation", "cap")
    sp.add_argument("--radius", type=int, default=None)
    sp = add("coset-rep", cmd_coset_rep, "shortest coset representative in a Coxeter group",
             "presentation", "word")
    sp.add_argument("--subset", type=_int_list, default=[], help="comma-separated vertex ids")
    add("semidirect", cmd_semidirect, "verify the Coxeter-part semidirect splitting", "presentation", "cap")
    sp = add("parabolic-intersect", cmd_parabolic_intersect, "intersect two parabolic conjugates",
             "presentation", "cap")
    sp.add_argument("--g", help="word conjugating the first parabolic")
    sp.add_argument("--phi", type=_int_list, default=[], help="vertices of the first parabolic")
    sp.add_argument("--h", help="word conjugating the second parabolic")
    sp.add_argument("--psi", type=_int_list, default=[], help="vertices of the second parabolic")
    add("rotation-verify", cmd_rotation_verify, "check the rotation-system axioms of an action", "graph")
    sp = add("rotation-extract", cmd_rotation_extract, "read a presentation off a rotation system", "graph")
    sp.add_argument("--basepoint", type=int, default=0)
    sp = add("rotation-subgroup", cmd_rotation_subgroup, "rotation subgroup of a hyperplane family",
             "graph", "presentation", "cap")
    sp.add_argument("--seed", type=_int_list, default=[], help="comma-separated seed hyperplane ids")
    sp.add_argument("--basepoint", type=int, default=0)
    sp = add("generate", cmd_generate, f"generate a family member ({', '.join(families.FAMILIES)})")
    sp.add_argument("family")
    sp.add_argument("params", nargs="*")
    sp.add_argument("--presentation", help="presentation JSON for coxeter_cayley / graph_product_ball")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (BudgetExceededError, CapExceededError) as exc:
        _emit(args, {"inconclusive": True, "reason": str(exc)})
        return EXIT_BUDGET
    except (MediangleError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
