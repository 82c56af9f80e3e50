"""The explicit ping-pong pair a, b in T_n and its exact certificate.

``a`` is a map ``f`` of ``[0, 1/n]`` (slopes n^3, 1, 1/n^3) glued to its
conjugate ``h f h^-1`` on ``[1/n, 1]`` with ``h(x) = 1 - (n-1)x``; ``b`` is
``a`` conjugated by the rotation through ``1/n^2``.  Each of the four
letters gets a closed arc of length ``1/n^3`` around its attracting fixed
point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .cantor import VElement, invert
from .circle import (
    Arc,
    ContractionCertificate,
    PLCircleMap,
    arc_contains,
    arc_to_json,
    arcs_disjoint,
    complement_arc,
    compose_maps,
    contraction_certificate,
    fixed_points,
    from_circle_map,
    from_points,
    image_of_arc,
    invert_map,
    rotation_map,
)
from .numerics import NRational, Q, format_rational

LETTERS = "aAbB"
INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


@dataclass(frozen=True)
class IntervalMap:
    """A continuous piecewise-affine map given by ``(lo, hi, slope, intercept)`` pieces."""

    pieces: Tuple[Tuple[NRational, NRational, NRational, NRational], ...]

    @property
    def breaks(self) -> List[NRational]:
        return [p[0] for p in self.pieces] + [self.pieces[-1][1]]

    def __call__(self, x: NRational) -> NRational:
        for lo, hi, s, t in self.pieces:
            if lo <= x <= hi:
                return s * x + t
        raise ValueError(f"{x} outside [{self.pieces[0][0]}, {self.pieces[-1][1]}]")


def build_f(n: int) -> IntervalMap:
    if n < 2:
        raise ValueError(f"arity must be >= 2, got {n}")
    n = Q(n)
    b1, b2 = (n**3 - 1) / n**7, 1 / n**4
    f = IntervalMap(
        (
            (Q(0), b1, n**3, Q(0)),
            (b1, b2, Q(1), (n**6 - 2 * n**3 + 1) / n**7),
            (b2, 1 / n, 1 / n**3, (n**3 - 1) / n**4),
        )
    )
    for (_, hi, s, t), (lo, _, s2, t2) in zip(f.pieces, f.pieces[1:]):
        assert s * hi + t == s2 * lo + t2, "f is discontinuous"
    assert f(Q(0)) == 0 and f(1 / n) == 1 / n
    return f


def build_generators(n: int) -> Tuple[PLCircleMap, PLCircleMap]:
    f = build_f(n)
    h = lambda x: 1 - (n - 1) * x  # noqa: E731
    xs, ys = [], []
    for x in f.breaks:
        # f on [0, 1/n] and h f h^-1 on [1/n, 1]; the two agree at 1/n
        xs += [x, h(x)]
        ys += [f(x), h(f(x))]
    a = from_points(xs, ys)
    r = rotation_map(Q(1, n**2))
    b = compose_maps(r, compose_maps(a, invert_map(r)))
    return a, b


def build_arcs(n: int) -> Dict[str, Arc]:
    """``P(c)`` for each letter c, keyed by 'a', 'A' (a^-1), 'b', 'B' (b^-1)."""
    q = Q(1, n**4)
    return {
        "A": Arc.from_endpoints(-(n - 1) * q, q),
        "B": Arc.from_endpoints((n**2 - n + 1) * q, (n**2 + 1) * q),
        "a": Arc.from_endpoints((n**3 - 1) * q, (n**3 + n - 1) * q),
        "b": Arc.from_endpoints((n**3 + n**2 - 1) * q, (n**3 + n**2 + n - 1) * q),
    }


@dataclass(frozen=True)
class PingPongSystem:
    n: int
    a: PLCircleMap
    b: PLCircleMap
    a_element: VElement
    b_element: VElement
    arcs: Dict[str, Arc] = field(hash=False)

    def maps(self) -> Dict[str, PLCircleMap]:
        return {"a": self.a, "A": invert_map(self.a), "b": self.b, "B": invert_map(self.b)}

    def elements(self) -> Dict[str, VElement]:
        return {"a": self.a_element, "A": invert(self.a_element), "b": self.b_element, "B": invert(self.b_element)}


def build_system(n: int) -> PingPongSystem:
    a, b = build_generators(n)
    # NotNAdic / NotPowerOfN here would be a construction bug, so let it raise
    return PingPongSystem(n, a, b, from_circle_map(a, n), from_circle_map(b, n), build_arcs(n))


def replace_b(sys: PingPongSystem, b: PLCircleMap) -> PingPongSystem:
    """Same arcs and ``a``, different second generator (for negative controls)."""
    return PingPongSystem(sys.n, sys.a, b, sys.a_element, from_circle_map(b, sys.n), dict(sys.arcs))


# -- certificate ----------------------------------------------------------------


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: NRational
    rhs: NRational
    strict: bool = True

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs if self.strict else self.lhs <= self.rhs

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "op": "<" if self.strict else "<=",
            "rhs": format_rational(self.rhs),
            "holds": self.holds,
        }


def _unwrap(arcs: Dict[str, Arc]):
    # lift circle points into the turn that starts at the left end of P(a^-1)
    base = arcs["A"].start - 1
    return lambda x: base + (x - base) % 1


def separation_inequalities(arcs: Dict[str, Arc]) -> List[Inequality]:
    """Gaps between cyclically consecutive arcs, named by their closed forms."""
    lift = _unwrap(arcs)
    order = [
        ("A", "B", "1/n^4 < (n^2-n+1)/n^4"),
        ("B", "a", "(n^2+1)/n^4 < (n^3-1)/n^4"),
        ("a", "b", "(n^3+n-1)/n^4 < (n^3+n^2-1)/n^4"),
        ("b", "A", "(n^3+n^2+n-1)/n^4 < 1-(n-1)/n^4"),
    ]
    out = []
    for left, right, name in order:
        rhs = lift(arcs[right].start) + (1 if right == "A" else 0)
        out.append(Inequality(name, lift(arcs[left].start) + arcs[left].length, rhs))
    return out


def containment_inequalities(arcs: Dict[str, Arc], image: Arc) -> List[Inequality]:
    """Endpoint comparisons placing the image of S^1 \\ P(a^-1) under a inside P(a)."""
    lift = _unwrap(arcs)
    target = arcs["a"]
    return [
        Inequality("(n^3-1)/n^4 <= (n^6-n^3+1)/n^7", lift(target.start), lift(image.start), strict=False),
        Inequality(
            "1-(n-1)(n^6-n^3+1)/n^7 <= (n^3+n-1)/n^4",
            lift(image.start) + image.length,
            lift(target.start) + target.length,
            strict=False,
        ),
    ]


@dataclass
class PingPongCertificate:
    n: int
    attractors: Dict[str, dict]
    disjointness: Dict[str, bool]
    inequalities: List[Inequality]
    containments: Dict[str, dict]
    containment_inequalities: List[Inequality]
    contractions: Dict[str, ContractionCertificate]

    def failed_checks(self) -> List[str]:
        failed = [f"attractor[{c}]" for c, r in self.attractors.items() if not r["ok"]]
        failed += [f"disjoint[{k}]" for k, ok in self.disjointness.items() if not ok]
        failed += [f"inequality[{q.name}]" for q in self.inequalities if not q.holds]
        failed += [f"containment[{c}]" for c, r in self.containments.items() if not r["ok"]]
        failed += [f"containment-inequality[{q.name}]" for q in self.containment_inequalities if not q.holds]
        failed += [f"contraction[{c}]" for c, cc in self.contractions.items() if not cc.certified]
        return failed

    @property
    def passed(self) -> bool:
        return not self.failed_checks()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "verdict": "pass" if self.passed else "fail",
            "failed": self.failed_checks(),
            "attractors": self.attractors,
            "disjointness": self.disjointness,
            "inequalities": [q.to_json() for q in self.inequalities],
            "containments": self.containments,
            "containment_inequalities": [q.to_json() for q in self.containment_inequalities],
            "contractions": {
                c: {
                    "arc": arc_to_json(cc.arc),
                    "max_slope": format_rational(cc.max_slope),
                    "arc_length": format_rational(cc.arc_length),
                    "lhs": format_rational(cc.max_slope * cc.arc_length),
                    "rhs": format_rational(1 - cc.arc_length),
                    "verdict": cc.verdict,
                }
                for c, cc in self.contractions.items()
            },
        }


def verify_pingpong(sys: PingPongSystem) -> PingPongCertificate:
    maps = sys.maps()
    arcs = sys.arcs
    attractors = {}
    for c in LETTERS:
        att = fixed_points(maps[c]).attracting
        ok = len(att) == 1 and arcs[c].contains_point(att[0].location)
        attractors[c] = {
            "attracting": [format_rational(p.location) for p in att],
            "arc": arc_to_json(arcs[c]),
            "ok": ok,
        }
    disjoint = {}
    for i, c in enumerate(LETTERS):
        for d in LETTERS[i + 1:]:
            disjoint[f"P({c}),P({d})"] = arcs_disjoint(arcs[c], arcs[d])
    containments = {}
    contractions = {}
    for c in LETTERS:
        outside = complement_arc(arcs[INVERSE[c]])
        image = image_of_arc(maps[c], outside)
        containments[c] = {
            "image": arc_to_json(image),
            "target": arc_to_json(arcs[c]),
            "ok": arc_contains(arcs[c], image, strictly=True),
        }
        contractions[c] = contraction_certificate(maps[c], outside)
    return PingPongCertificate(
        sys.n,
        attractors,
        disjoint,
        separation_inequalities(arcs),
        containments,
        containment_inequalities(arcs, image_of_arc(sys.a, complement_arc(arcs["A"]))),
        contractions,
    )
