"""Command-line interface: ``cambrian <command> [options]``.

Exit codes: 0 success, 2 bad input, 3 a verification failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .coxeter import build_system, enumerate_group, group_order, parse_word
from .errors import (
    BadLabel,
    BadMatrix,
    CambrianError,
    CapExceeded,
    CyclicOrientation,
    InfiniteType,
    NotADiagonal,
    NotSortable,
    RankUnsupported,
)
from .export import congruence_to_dot, dumps, lattice_to_dot, lattice_to_json, search_tree_to_dot
from .fan import (
    cambrian_fan_by_classes,
    cambrian_fan_by_cvectors,
    coxeter_fan,
    render_stereographic_svg,
)
from .lattice import congruence_from_edges, is_lattice, local_forcing_closure
from .sortable import (
    cambrian_congruence,
    cambrian_lattice,
    parse_coxeter_element,
    sortable_elements,
    sortable_record,
    sorting_word,
)
from .type_a import (
    build_polygon,
    coxeter_element_of_polygon,
    element_of_perm,
    eta,
    fiber_extremes,
    tamari_like_lattice,
    triangulation_svg,
    verify_eta_is_quotient_map,
)
from .verify import catalogue, format_report, run_suite

log = logging.getLogger("cambrian")

BAD_INPUT = 2
VERIFY_FAILED = 3

_INPUT_ERRORS = (BadLabel, BadMatrix, InfiniteType, CapExceeded, CyclicOrientation,
                 NotSortable, RankUnsupported, NotADiagonal, ValueError, OSError)


class VerificationFailed(Exception):
    pass


# --------------------------------------------------------------------------
# input helpers


def load_matrix(path):
    """A Coxeter matrix from a JSON list of rows or whitespace-separated rows."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        rows = [line.split() for line in text.splitlines() if line.strip()]
        return [[float(x) if x.lower() in ("inf", "infinity") else int(x) for x in row] for row in rows]


def system_from_args(args):
    if getattr(args, "matrix", None):
        return build_system(load_matrix(args.matrix))
    if not getattr(args, "type", None):
        raise ValueError("give --type or --matrix")
    return build_system(args.type)


def coxeter_element_from_args(system, args, required=True):
    if args.c is None:
        if required:
            raise ValueError("give a Coxeter element with --c")
        return None
    return parse_coxeter_element(system, args.c)


def parse_group_element(system, text):
    """A word ``s1s2``; for type A also a permutation in one-line notation."""
    text = text.strip()
    size = system.rank + 1
    if text.isdigit() and len(text) == size and sorted(text) == [str(i) for i in range(1, size + 1)]:
        return element_of_perm(system, tuple(int(ch) for ch in text))
    return system.element(parse_word(text, system.rank))


def emit(text, out):
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def fmt(args, default="text"):
    return args.export or default


# --------------------------------------------------------------------------
# commands


def cmd_group(args):
    system = system_from_args(args)
    order = group_order(system)
    report = system.to_json(order=order)
    w0 = system.longest_element()
    report["longest_element_length"] = w0.length
    report["longest_element"] = w0.label()
    kind = fmt(args)
    if kind == "text":
        emit("".join(f"{k}: {report[k]}\n" for k in
                     ("name", "rank", "order", "positive_root_count", "longest_element_length",
                      "longest_element")), args.out)
    elif kind == "json":
        emit(dumps(report), args.out)
    elif kind == "dot":
        weak = enumerate_group(system)
        emit(lattice_to_dot(weak, name=f"weak order {system.name}"), args.out)
    else:
        raise ValueError(f"group cannot export {kind}")


def cmd_congruence(args):
    system = system_from_args(args)
    weak = enumerate_group(system)
    if args.edges:
        seed = set()
        for item in args.edges.split(","):
            lo, sep, hi = item.partition("<")
            if not sep:
                raise ValueError(f"edge {item!r} must look like 'lower<upper'")
            a, b = parse_group_element(system, lo), parse_group_element(system, hi)
            key = (weak.index_of(a), weak.index_of(b))
            if key not in weak.edge_index:
                raise ValueError(f"{item} is not a cover relation of the weak order")
            seed.add(weak.edge_index[key])
        theta = congruence_from_edges(weak, local_forcing_closure(weak, seed))
    else:
        theta = cambrian_congruence(weak, coxeter_element_from_args(system, args))
    labels = [w.label() for w in weak.elements]
    kind = fmt(args)
    if kind == "text":
        lines = [f"classes: {len(theta)}", f"contracted edges: {len(theta.edges)}"]
        lines += ["{" + ", ".join(labels[x] for x in cls) + "}" for cls in theta.classes]
        emit("\n".join(lines) + "\n", args.out)
    elif kind == "json":
        data = theta.to_json()
        data["labels"] = labels
        emit(dumps(data), args.out)
    elif kind == "dot":
        emit(congruence_to_dot(theta, name=f"congruence {system.name}"), args.out)
    else:
        raise ValueError(f"congruence cannot export {kind}")


def cmd_cambrian(args):
    system = system_from_args(args)
    c = coxeter_element_from_args(system, args)
    weak = enumerate_group(system)
    try:
        lat = cambrian_lattice(weak, c, verify=args.verify)
    except AssertionError as exc:
        raise VerificationFailed(str(exc)) from exc
    checks = {}
    if args.verify:
        theta = cambrian_congruence(weak, c)
        bottoms = set(theta.bottoms)
        sub = all(weak.meet(a, b) in bottoms and weak.join(a, b) in bottoms
                  for a in bottoms for b in bottoms if a < b)
        degrees = set(lat.undirected_degrees())
        checks = {
            "sortables_are_class_bottoms": True,
            "quotient_isomorphic_to_sortables": True,
            "is_lattice": is_lattice(lat),
            "sublattice_of_weak_order": sub,
            "hasse_regular": degrees == {system.rank},
        }
        if not all(checks.values()):
            failed = next(k for k, v in checks.items() if not v)
            raise VerificationFailed(f"check {failed} failed")
    kind = fmt(args)
    if kind == "text":
        lines = [f"group: {system.name}", f"c: {c}", f"elements: {len(lat)}",
                 f"covers: {len(lat.covers)}"]
        lines += [f"check {k}: {'PASS' if v else 'FAIL'}" for k, v in checks.items()]
        emit("\n".join(lines) + "\n", args.out)
    elif kind == "json":
        data = lattice_to_json(lat)
        data.update({"group": system.name, "c": str(c), "checks": checks})
        emit(dumps(data), args.out)
    elif kind == "dot":
        emit(lattice_to_dot(lat, name=f"{c}-Cambrian lattice"), args.out)
    else:
        raise ValueError(f"cambrian cannot export {kind}")


def cmd_sortable(args):
    system = system_from_args(args)
    c = coxeter_element_from_args(system, args)
    kind = fmt(args)
    if args.element is not None:
        w = parse_group_element(system, args.element)
        rec = sortable_record(w, c)
        rec["sortable"] = sorting_word(w, c.word).is_decreasing()
        if kind == "json":
            emit(dumps(rec), args.out)
        else:
            lines = [f"element: {rec['element']}", f"sorting word: {rec['sorting_word']}",
                     f"sortable: {rec['sortable']}"]
            for s, v in rec.get("c_vectors", {}).items():
                lines.append(f"C^{s}: {v}")
            emit("\n".join(lines) + "\n", args.out)
        return
    tree = sortable_elements(system, c)
    if kind == "text":
        lines = [f"{len(tree)} {c}-sortable elements"]
        lines += [str(tree.words[v.act]) for v in tree.nodes]
        emit("\n".join(lines) + "\n", args.out)
    elif kind == "json":
        emit(dumps({"c": str(c), "sortables": [sortable_record(v, c) for v in tree.nodes]}), args.out)
    elif kind == "dot":
        emit(search_tree_to_dot(tree, name=f"{c}-sortable search tree"), args.out)
    else:
        raise ValueError(f"sortable cannot export {kind}")


def cmd_fan(args):
    system = system_from_args(args)
    c = coxeter_element_from_args(system, args, required=False)
    weak = enumerate_group(system)
    if c is None:
        fan, title = coxeter_fan(weak), f"Coxeter fan {system.name}"
    else:
        class_fan = cambrian_fan_by_classes(weak, c, seed=args.seed)
        fan = cambrian_fan_by_cvectors(weak, c, class_fan, samples=args.samples, seed=args.seed)
        title = f"{c}-Cambrian fan {system.name}"
    kind = args.export or ("svg" if args.out and args.out.endswith(".svg") else "json")
    if kind == "svg":
        emit(render_stereographic_svg(fan, title=title), args.out)
    elif kind == "json":
        emit(dumps(fan.to_json()), args.out)
    else:
        raise ValueError(f"fan cannot export {kind}")


def cmd_tamari(args):
    if args.n is None:
        raise ValueError("give --n")
    barring = args.barring or "d" * (args.n + 1)
    Q = build_polygon(args.n, barring)
    kind = fmt(args)
    if kind == "svg":
        perm = tuple(int(ch) for ch in args.perm) if args.perm else tuple(range(1, args.n + 2))
        if sorted(perm) != list(range(1, args.n + 2)):
            raise ValueError(f"--perm must be a permutation of 1..{args.n + 1}")
        emit(triangulation_svg(eta(perm, Q)), args.out)
        return
    lat = tamari_like_lattice(Q)
    c = coxeter_element_of_polygon(Q)
    if kind == "dot":
        emit(lattice_to_dot(lat, name=f"triangulations n={args.n} barring={barring}"), args.out)
        return
    if kind == "json":
        data = {
            "n": args.n,
            "barring": barring,
            "coxeter_element": str(c),
            "triangulations": [T.to_json()["diagonals"] for T in lat.elements],
            "covers": [list(e) for e in lat.covers],
        }
        if args.perm:
            data["eta"] = eta(tuple(int(ch) for ch in args.perm), Q).to_json()
        emit(dumps(data), args.out)
        return
    if kind != "text":
        raise ValueError(f"tamari cannot export {kind}")
    lines = [f"n: {args.n}", f"barring: {barring}", f"coxeter element: {c}",
             f"triangulations: {len(lat)}", f"flip covers: {len(lat.covers)}"]
    if args.verify:
        rep = fiber_extremes(Q)
        quot = verify_eta_is_quotient_map(Q)
        lines.append(f"check fibers are intervals: {'PASS' if rep.intervals else 'FAIL'}")
        lines.append(f"check minima avoid patterns: {'PASS' if rep.minima_match_patterns else 'FAIL'}")
        lines.append(f"check eta is the Cambrian quotient map: {'PASS' if quot else 'FAIL'}")
        emit("\n".join(lines) + "\n", args.out)
        if not (rep.intervals and rep.minima_match_patterns and quot):
            raise VerificationFailed("type-A checks failed")
        return
    emit("\n".join(lines) + "\n", args.out)


def cmd_verify(args):
    if args.all:
        groups = catalogue(args.max_rank)
    elif args.type:
        groups = list(args.type)
    else:
        raise ValueError("give --all or at least one --type")
    results = run_suite(groups, samples=args.samples, seed=args.seed,
                        type_a_max=min(args.max_rank, 4), fan_max_rank=args.max_rank)
    emit(format_report(results), args.out)
    failed = [r for r in results if not r.ok]
    if failed:
        raise VerificationFailed(failed[0].line())


# --------------------------------------------------------------------------
# parser


def _group_options(p, c=True):
    p.add_argument("--type", help="group label, e.g. A3, B2, H3, I2(5), A1xA2")
    p.add_argument("--matrix", help="file holding a Coxeter matrix (JSON rows or whitespace rows)")
    if c:
        p.add_argument("--c", "--coxeter-element", dest="c",
                       help="Coxeter element as a word 's1s3s2' or orientation '1>2,3>2'")


def _output_options(p, formats):
    p.add_argument("--export", "--format", dest="export", choices=formats,
                   help="output format (default: text report)")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="cambrian", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="order, roots and weak order of a Coxeter group")
    _group_options(p, c=False)
    _output_options(p, ["text", "json", "dot"])
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("congruence", help="congruence generated by cover edges (or a Cambrian one)")
    _group_options(p)
    p.add_argument("--edges", help="comma-separated covers 'lower<upper', words or permutations")
    _output_options(p, ["text", "json", "dot"])
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("cambrian", help="Cambrian lattice of a Coxeter element")
    _group_options(p)
    p.add_argument("--verify", action="store_true", help="run the cross-checks")
    _output_options(p, ["text", "json", "dot"])
    p.set_defaults(func=cmd_cambrian)

    p = sub.add_parser("sortable", help="c-sortable elements, sorting words and C-vectors")
    _group_options(p)
    p.add_argument("--element", help="report on one element (word, or permutation in type A)")
    _output_options(p, ["text", "json", "dot"])
    p.set_defaults(func=cmd_sortable)

    p = sub.add_parser("fan", help="Coxeter fan, or Cambrian fan when --c is given")
    _group_options(p)
    p.add_argument("--samples", type=int, default=2000, help="sample points for fan checks")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    _output_options(p, ["json", "svg"])
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("tamari", help="triangulations of a barred polygon and their flip lattice")
    p.add_argument("--n", type=int, help="rank n; the polygon has n+3 vertices")
    p.add_argument("--barring", help="string over u/d of length n+1 (default all d)")
    p.add_argument("--perm", help="permutation in one-line notation, e.g. 3124")
    p.add_argument("--verify", action="store_true", help="check eta against the Cambrian congruence")
    _output_options(p, ["text", "json", "dot", "svg"])
    p.set_defaults(func=cmd_tamari)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--type", action="append", help="group label (repeatable)")
    p.add_argument("--all", action="store_true", help="every catalogued group up to --max-rank")
    p.add_argument("--max-rank", type=int, default=3, help="rank limit for --all and fan checks")
    p.add_argument("--samples", type=int, default=2000, help="sample points per fan check")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--out", help="write the report to this file")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return VERIFY_FAILED
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except CambrianError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return VERIFY_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
