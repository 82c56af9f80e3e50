"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import cantor, circle
from .cantor import CantorError, Membership
from .circle import CircleError
from .freecert import (
    CYCLIC_ON_SAMPLE,
    TRIVIAL,
    attracting_census,
    centralizer_probe,
    discontinuity_stabilizer_check,
    free_certificate,
    stabilizer_probe,
)
from .numerics import format_rational, parse_rational
from .pingpong import build_system, verify_pingpong


class UsageError(Exception):
    pass


def _arity(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n must be an integer, got {text!r}")
    if n < 2:
        raise argparse.ArgumentTypeError(f"--n must be >= 2, got {n}")
    return n


def _positive(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if k < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {k}")
    return k


def _rational(text: str):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}")


def _emit(args, payload: dict, text_lines: List[str]) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _load_json(path: str, field: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{field}: cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{field}: {path} is not valid JSON ({exc.msg})")


def _load_element(path: str, field: str) -> cantor.VElement:
    try:
        return cantor.element_from_json(_load_json(path, field))
    except CantorError as exc:
        raise UsageError(f"{field}: {exc}")


# -- commands -------------------------------------------------------------------


def cmd_verify_pingpong(args) -> int:
    cert = verify_pingpong(build_system(args.n))
    data = cert.to_json()
    lines = [f"ping-pong certificate for n={args.n}: {data['verdict']}"]
    for c, r in data["attractors"].items():
        lines.append(f"  attractor {c}: {r['attracting']} in P({c})={circle.Arc(parse_rational(r['arc']['start']), parse_rational(r['arc']['length']))} {'ok' if r['ok'] else 'FAIL'}")
    for name, ok in data["disjointness"].items():
        lines.append(f"  disjoint {name}: {'ok' if ok else 'FAIL'}")
    for q in data["inequalities"] + data["containment_inequalities"]:
        lines.append(f"  {q['name']}: {q['lhs']} {q['op']} {q['rhs']} {'ok' if q['holds'] else 'FAIL'}")
    for c, r in data["containments"].items():
        lines.append(f"  containment {c}: image [{r['image']['start']}, {r['image']['end']}] inside [{r['target']['start']}, {r['target']['end']}] {'ok' if r['ok'] else 'FAIL'}")
    for c, r in data["contractions"].items():
        lines.append(f"  contraction {c}: slope {r['max_slope']}, length {r['arc_length']}, {r['lhs']} < {r['rhs']} {r['verdict']}")
    if data["failed"]:
        lines.append("failed: " + ", ".join(data["failed"]))
    _emit(args, data, lines)
    return 0 if cert.passed else 1


def cmd_free_cert(args) -> int:
    report = free_certificate(build_system(args.n), args.max_len, check_elements=args.elements)
    data = report.to_json()
    lines = [f"free certificate n={args.n} max-len={args.max_len}: {report.words_checked} words, {data['verdict']}"]
    lines += [f"  {v.word}: {v.check} {v.detail}" for v in report.violations]
    _emit(args, data, lines)
    return 0 if report.passed else 1


def cmd_census(args) -> int:
    entries = attracting_census(build_system(args.n), args.max_len, include_all=args.all)
    bad = [e for e in entries if not e.ok]
    data = {
        "n": args.n,
        "max_len": args.max_len,
        "words": len(entries),
        "verdict": "pass" if not bad else "fail",
        "entries": [e.to_json() for e in entries],
    }
    lines = [f"attracting census n={args.n} max-len={args.max_len}: {len(entries)} words, {data['verdict']}"]
    for e in entries:
        pts = ", ".join(f"{format_rational(p.location)} {p.kind.value}" for p in e.report.points)
        lines.append(f"  {e.word}: {pts}" + ("" if e.ok else "  <- " + "; ".join(e.problems)))
    _emit(args, data, lines)
    return 0 if not bad else 1


def cmd_centralizer(args) -> int:
    alpha = _load_element(args.alpha, "--alpha")
    if alpha.n != args.n:
        raise UsageError(f"--alpha: element has arity {alpha.n} but --n is {args.n}")
    sys_ = build_system(args.n)
    if cantor.classify(alpha) is Membership.IN_V_NOT_T:
        disc = discontinuity_stabilizer_check(sys_, alpha, args.max_len)
        probe = centralizer_probe(sys_, alpha, args.max_len)
        data = {**probe.to_json(), "discontinuities": [format_rational(x) for x in disc.points], "permutation_violations": disc.violations}
        ok = probe.structure in (TRIVIAL, CYCLIC_ON_SAMPLE) and disc.passed
    else:
        probe = centralizer_probe(sys_, alpha, args.max_len)
        data = probe.to_json()
        ok = probe.structure in (TRIVIAL, CYCLIC_ON_SAMPLE)
    data["verdict"] = "pass" if ok else "fail"
    lines = [
        f"centralizer probe n={args.n} max-len={args.max_len}: {probe.structure}, {len(probe.words)} commuting words",
        "  " + (" ".join(probe.words) or "(none)"),
    ]
    _emit(args, data, lines)
    return 0 if ok else 1


def cmd_stabilizer(args) -> int:
    probe = stabilizer_probe(build_system(args.n), args.point, args.max_len)
    data = probe.to_json()
    ok = probe.structure in (TRIVIAL, CYCLIC_ON_SAMPLE)
    data["verdict"] = "pass" if ok else "fail"
    lines = [
        f"stabilizer of {format_rational(args.point)} n={args.n} max-len={args.max_len}: {probe.structure}, {len(probe.words)} words",
        "  " + (" ".join(probe.words) or "(none)"),
    ]
    _emit(args, data, lines)
    return 0 if ok else 1


def cmd_element(args) -> int:
    if not args.inputs:
        raise UsageError("--in: at least one element file is required")
    elems = [_load_element(p, "--in") for p in args.inputs]
    g = elems[0]
    op = args.op
    if op == "compose":
        if len(elems) < 2:
            raise UsageError("--in: compose needs two or more files (the last one acts first)")
        result = elems[-1]
        for h in reversed(elems[:-1]):
            if h.n != result.n:
                raise UsageError("--in: elements have different arities")
            result = cantor.compose(h, result)
        _emit(args, cantor.element_to_json(result), [str(result)])
    elif op == "invert":
        result = cantor.invert(g)
        _emit(args, cantor.element_to_json(result), [str(result)])
    elif op == "classify":
        cls = cantor.classify(g).value
        _emit(args, {"class": cls}, [cls])
    elif op == "order":
        k = cantor.order_of(g, args.bound)
        _emit(args, {"order": k if k is not None else "exceeded", "bound": args.bound}, [str(k) if k is not None else f"exceeded (bound {args.bound})"])
    elif op == "discontinuities":
        pts = [format_rational(x) for x in cantor.discontinuity_points(g)]
        _emit(args, {"discontinuities": pts}, [json.dumps(pts)])
    elif op == "apply":
        if args.point is not None:
            kappa = cantor.circle_to_cantor(args.point, g.n)
        elif args.per is not None:
            try:
                kappa = cantor.point_from_json({"pre": args.pre or "", "per": args.per}, g.n)
            except CantorError as exc:
                raise UsageError(f"--pre/--per: {exc}")
        else:
            raise UsageError("apply needs --point p/q or --pre/--per")
        image = cantor.apply_point(g, kappa)
        data = {"point": cantor.point_to_json(image), "circle": format_rational(cantor.cantor_to_circle(image))}
        _emit(args, data, [f"{image} = {data['circle']}"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="htlab", description="Exact computations in the Higman-Thompson groups F_n, T_n, V_n.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, max_len=True):
        p.add_argument("--n", type=_arity, required=True, help="arity n >= 2")
        if max_len:
            p.add_argument("--max-len", type=_positive, required=True, help="word length bound")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("verify-pingpong", help="certify the ping-pong hypotheses for a, b")
    common(p, max_len=False)
    p.set_defaults(func=cmd_verify_pingpong)

    p = sub.add_parser("free-cert", help="no reduced word up to max-len is the identity")
    common(p)
    p.add_argument("--elements", action="store_true", help="also compose V_n elements and cross-check")
    p.set_defaults(func=cmd_free_cert)

    p = sub.add_parser("census", help="fixed-point census of cyclically reduced words")
    common(p)
    p.add_argument("--all", action="store_true", help="include words that are not cyclically reduced")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("centralizer", help="words commuting with an element")
    common(p)
    p.add_argument("--alpha", required=True, help="element JSON file")
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("stabilizer", help="words fixing a circle point")
    common(p)
    p.add_argument("--point", type=_rational, required=True, help="circle point p/q")
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("element", help="operations on elements read from JSON files")
    p.add_argument("op", choices=("compose", "invert", "classify", "order", "discontinuities", "apply"))
    p.add_argument("--in", dest="inputs", action="append", help="element JSON file (repeat for compose)")
    p.add_argument("--bound", type=_positive, default=100)
    p.add_argument("--point", type=_rational, help="circle point p/q for apply")
    p.add_argument("--pre", help="preperiod digits for apply")
    p.add_argument("--per", help="period digits for apply")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_element)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"htlab: error: {exc}", file=sys.stderr)
        return 2
    except (CantorError, CircleError) as exc:
        print(f"htlab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"htlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
