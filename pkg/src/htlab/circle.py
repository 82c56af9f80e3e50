"""Piecewise-linear orientation-preserving homeomorphisms of R/Z.

A :class:`PLCircleMap` stores its breakpoints ``x_0 < ... < x_{m-1}`` in
``[0, 1)`` together with lift values ``F(x_i)``, where ``F`` is the lift
with ``F(x_0)`` in ``[0, 1)``.  Segment ``i`` runs from ``x_i`` to
``x_{i+1}`` (and the last one from ``x_{m-1}`` to ``x_0 + 1``).  Maps are
canonical: only genuine slope changes are kept, and a rotation is stored
with the single breakpoint 0.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from math import floor
from typing import Dict, List, Sequence, Tuple

from .cantor import (
    ArityMismatch,
    Membership,
    VElement,
    classify,
    cone_interval,
    make_element,
)
from .numerics import NRational, Q, format_rational, is_n_adic, parse_rational, power_of_n_exponent


class CircleError(ValueError):
    pass


class NotInT(CircleError):
    pass


class NotNAdic(CircleError):
    pass


class NotPowerOfN(CircleError):
    pass


@dataclass(frozen=True)
class PLCircleMap:
    breaks: Tuple[NRational, ...]
    images: Tuple[NRational, ...]

    @property
    def segments(self) -> List[Tuple[NRational, NRational, NRational, NRational]]:
        """``(x, x_next, y, y_next)`` for every segment, as lift values."""
        xs = self.breaks + (self.breaks[0] + 1,)
        ys = self.images + (self.images[0] + 1,)
        return [(xs[i], xs[i + 1], ys[i], ys[i + 1]) for i in range(len(self.breaks))]

    @property
    def slopes(self) -> List[NRational]:
        return [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in self.segments]

    def lift(self, x: NRational) -> NRational:
        """The lift F evaluated at any rational x."""
        k = floor(x - self.breaks[0])
        x = x - k
        i = bisect_right(self.breaks, x) - 1
        x0, y0 = self.breaks[i], self.images[i]
        if i + 1 < len(self.breaks):
            x1, y1 = self.breaks[i + 1], self.images[i + 1]
        else:
            x1, y1 = self.breaks[0] + 1, self.images[0] + 1
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0) + k

    def inverse_lift(self, y: NRational) -> NRational:
        """The x with F(x) = y."""
        k = floor(y - self.images[0])
        y = y - k
        i = bisect_right(self.images, y) - 1
        x0, y0 = self.breaks[i], self.images[i]
        if i + 1 < len(self.images):
            x1, y1 = self.breaks[i + 1], self.images[i + 1]
        else:
            x1, y1 = self.breaks[0] + 1, self.images[0] + 1
        return x0 + (y - y0) * (x1 - x0) / (y1 - y0) + k

    def __call__(self, x: NRational) -> NRational:
        return self.lift(Q(x)) % 1

    def is_identity(self) -> bool:
        return self == IDENTITY


def from_points(xs: Sequence[NRational], ys: Sequence[NRational]) -> PLCircleMap:
    """Canonical map through the lift points ``(xs[i], ys[i])``.

    The points may be any lift values covering one turn (distinct mod 1);
    the map is linear between cyclically consecutive points.
    """
    pts: Dict[NRational, NRational] = {}
    for x, y in zip(xs, ys):
        k = floor(x)
        pts.setdefault(x - k, y - k)
    bx = sorted(pts)
    by = [pts[x] for x in bx]
    shift = floor(by[0])
    by = [y - shift for y in by]
    m = len(bx)
    if any(by[i + 1] <= by[i] for i in range(m - 1)) or by[-1] >= by[0] + 1:
        raise CircleError("points do not describe an orientation-preserving homeomorphism")
    xx = bx + [bx[0] + 1]
    yy = by + [by[0] + 1]
    slopes = [(yy[i + 1] - yy[i]) / (xx[i + 1] - xx[i]) for i in range(m)]
    keep = [i for i in range(m) if slopes[i] != slopes[i - 1]]
    if not keep:
        # rotation: the lift is x -> x + t
        t = by[0] - bx[0]
        t -= floor(t)
        return PLCircleMap((Q(0),), (t,))
    kx = tuple(bx[i] for i in keep)
    ky = [by[i] for i in keep]
    shift = floor(ky[0])
    return PLCircleMap(kx, tuple(y - shift for y in ky))


IDENTITY = PLCircleMap((Q(0),), (Q(0),))


def rotation_map(t: NRational) -> PLCircleMap:
    return PLCircleMap((Q(0),), (Q(t) % 1,))


def evaluate(m: PLCircleMap, x: NRational) -> NRational:
    return m(x)


def compose_maps(g: PLCircleMap, h: PLCircleMap) -> PLCircleMap:
    """``g o h``: apply h, then g."""
    xs = list(h.breaks) + [h.inverse_lift(b) for b in g.breaks]
    ys = [g.lift(y) for y in h.images] + list(g.images)
    return from_points(xs, ys)


def invert_map(m: PLCircleMap) -> PLCircleMap:
    return from_points(m.images, m.breaks)


def power_map(m: PLCircleMap, k: int) -> PLCircleMap:
    base = m if k >= 0 else invert_map(m)
    result = IDENTITY
    for _ in range(abs(k)):
        result = compose_maps(base, result)
    return result


# -- conversion to and from V_n elements -----------------------------------


def to_circle_map(g: VElement) -> PLCircleMap:
    """Circle homeomorphism of an element of T_n."""
    if classify(g) is Membership.IN_V_NOT_T:
        raise NotInT(f"{g} is not in T_{g.n}")
    xs, ys = [], []
    y = cone_interval(g.pairs[0][1], g.n)[0]
    for w, v in g.pairs:
        xs.append(cone_interval(w, g.n)[0])
        ys.append(y)
        y += cone_interval(v, g.n)[1]
    return from_points(xs, ys)


def _digits_of(x: NRational, n: int, depth: int) -> Tuple[int, ...]:
    # prefix of the standard interval [x, x + n^-depth)
    k = x * n**depth
    assert k.denominator == 1
    k = int(k.numerator)
    out = []
    for _ in range(depth):
        k, d = divmod(k, n)
        out.append(d + 1)
    return tuple(reversed(out))


def _standard_pieces(x0: NRational, x1: NRational, n: int):
    """Maximal standard n-adic intervals tiling [x0, x1]."""
    x = x0
    while x < x1:
        j = 0
        while (x * n**j).denominator != 1 or x + Q(1, n**j) > x1:
            j += 1
        yield x, j
        x += Q(1, n**j)


def from_circle_map(m: PLCircleMap, n: int) -> VElement:
    """The T_n element whose circle model is m."""
    if n < 2:
        raise ArityMismatch(f"arity must be >= 2, got {n}")
    for v in m.breaks + m.images:
        if not is_n_adic(v, n):
            raise NotNAdic(f"{format_rational(v)} is not {n}-adic")
    exps = []
    for s in m.slopes:
        k = power_of_n_exponent(s, n)
        if k is None:
            raise NotPowerOfN(f"slope {format_rational(s)} is not a power of {n}")
        exps.append(k)
    pairs = []

    def emit(x: NRational, j: int, y: NRational, k: int) -> None:
        # [x, x + n^-j] maps onto [y, y + n^-(j-k)]; subdivide until both are standard
        i = j - k
        if i >= 0 and (y * n**i).denominator == 1:
            pairs.append((_digits_of(x, n, j), _digits_of(y, n, i)))
            return
        for d in range(n):
            emit(x + Q(d, n ** (j + 1)), j + 1, (y + Q(d, n ** (j + 1 - k))) % 1, k)

    for (x0, x1, y0, _), k in zip(m.segments, exps):
        slope = Q(n) ** k
        cuts = [x0] + ([Q(1)] if x1 > 1 else []) + [x1]
        for lo, hi in zip(cuts, cuts[1:]):
            base = floor(lo)
            for x, j in _standard_pieces(lo - base, hi - base, n):
                emit(x, j, (y0 + (x + base - x0) * slope) % 1, k)
    return make_element(n, pairs)


# -- fixed points -------------------------------------------------------------


class FixedKind(enum.Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"
    SEMI_STABLE = "SemiStable"
    INTERIOR_OF_FIXED_INTERVAL = "InteriorOfFixedInterval"


@dataclass(frozen=True)
class FixedPoint:
    location: NRational
    kind: FixedKind
    left_slope: NRational
    right_slope: NRational


@dataclass(frozen=True)
class FixedInterval:
    """A closed arc of fixed points; length 1 means the whole circle."""

    start: NRational
    length: NRational


@dataclass(frozen=True)
class FixedPointReport:
    points: Tuple[FixedPoint, ...]
    fixed_intervals: Tuple[FixedInterval, ...] = ()

    def of_kind(self, kind: FixedKind) -> List[FixedPoint]:
        return [p for p in self.points if p.kind is kind]

    @property
    def attracting(self) -> List[FixedPoint]:
        return self.of_kind(FixedKind.ATTRACTING)

    @property
    def repelling(self) -> List[FixedPoint]:
        return self.of_kind(FixedKind.REPELLING)


def _kind(left: NRational, right: NRational, left_fixed: bool, right_fixed: bool) -> FixedKind:
    if left < 1 and right < 1:
        return FixedKind.ATTRACTING
    if left > 1 and right > 1:
        return FixedKind.REPELLING
    if left == right == 1 and left_fixed and right_fixed:
        return FixedKind.INTERIOR_OF_FIXED_INTERVAL
    return FixedKind.SEMI_STABLE


def fixed_points(m: PLCircleMap) -> FixedPointReport:
    segs = m.segments
    slopes = m.slopes
    count = len(segs)
    # a segment is "fixed" when it has slope 1 and integer displacement
    seg_fixed = [s == 1 and (y0 - x0).denominator == 1 for (x0, _, y0, _), s in zip(segs, slopes)]
    if all(seg_fixed):
        return FixedPointReport((), (FixedInterval(Q(0), Q(1)),))

    found: Dict[NRational, Tuple[int, int]] = {}
    for i, ((x0, x1, y0, y1), s) in enumerate(zip(segs, slopes)):
        if seg_fixed[i]:
            found.setdefault(x0 % 1, (i - 1, i))
            found.setdefault(x1 % 1, (i, (i + 1) % count))
            continue
        d0, d1 = y0 - x0, y1 - x1
        lo, hi = min(d0, d1), max(d0, d1)
        for k in range(floor(lo), floor(hi) + 1):
            if not lo <= k <= hi or s == 1:
                continue
            x = x0 + (k - d0) / (s - 1)
            if x == x0:
                found[x % 1] = ((i - 1) % count, i)
            elif x == x1:
                found[x % 1] = (i, (i + 1) % count)
            else:
                found.setdefault(x % 1, (i, i))
    points = []
    for loc in sorted(found):
        li, ri = found[loc]
        li %= count
        points.append(FixedPoint(loc, _kind(slopes[li], slopes[ri], seg_fixed[li], seg_fixed[ri]), slopes[li], slopes[ri]))

    intervals = []
    # walk maximal runs of fixed segments, starting just after a non-fixed one
    start = next(j for j in range(count) if not seg_fixed[j])
    run = None
    for step in range(1, count + 1):
        j = (start + step) % count
        if seg_fixed[j]:
            x0, x1 = segs[j][0], segs[j][1]
            run = (x0 % 1, x1 - x0) if run is None else (run[0], run[1] + x1 - x0)
        elif run is not None:
            intervals.append(FixedInterval(*run))
            run = None
    if run is not None:
        intervals.append(FixedInterval(*run))
    return FixedPointReport(tuple(points), tuple(sorted(intervals, key=lambda a: a.start)))


# -- arcs ---------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """The closed arc ``[start, start + length]`` mod 1, with 0 < length < 1."""

    start: NRational
    length: NRational

    def __post_init__(self):
        if not 0 < self.length < 1:
            raise CircleError(f"arc length {self.length} outside (0, 1)")
        object.__setattr__(self, "start", Q(self.start) % 1)
        object.__setattr__(self, "length", Q(self.length))

    @classmethod
    def from_endpoints(cls, lo: NRational, hi: NRational) -> "Arc":
        """The arc running counterclockwise from lo to hi."""
        return cls(lo, (Q(hi) - Q(lo)) % 1)

    @property
    def end(self) -> NRational:
        return (self.start + self.length) % 1

    def contains_point(self, x: NRational, strictly: bool = False) -> bool:
        off = (Q(x) - self.start) % 1
        if strictly:
            return 0 < off < self.length
        return off <= self.length

    def __str__(self) -> str:
        return f"[{format_rational(self.start)}, {format_rational(self.end)}]"


def complement_arc(a: Arc) -> Arc:
    """Closure of the complement."""
    return Arc(a.end, 1 - a.length)


def image_of_arc(m: PLCircleMap, a: Arc) -> Arc:
    y0 = m.lift(a.start)
    return Arc(y0, m.lift(a.start + a.length) - y0)


def arc_contains(outer: Arc, inner: Arc, strictly: bool = False) -> bool:
    off = (inner.start - outer.start) % 1
    if strictly:
        return 0 < off and off + inner.length < outer.length
    return off + inner.length <= outer.length


def arcs_disjoint(a: Arc, b: Arc) -> bool:
    return not a.contains_point(b.start) and not b.contains_point(a.start)


# -- contraction ----------------------------------------------------------------


@dataclass(frozen=True)
class ContractionCertificate:
    arc: Arc
    max_slope: NRational
    arc_length: NRational
    certified: bool

    @property
    def verdict(self) -> str:
        return "Certified" if self.certified else "NotCertified"


def max_slope_on_arc(m: PLCircleMap, a: Arc) -> NRational:
    """Largest slope among segments meeting the interior of the arc."""
    lo, hi = a.start, a.start + a.length
    best = None
    for (x0, x1, _, _), s in zip(m.segments, m.slopes):
        for shift in (-1, 0, 1):
            if max(x0 + shift, lo) < min(x1 + shift, hi):
                best = s if best is None else max(best, s)
    return best


def contraction_certificate(m: PLCircleMap, a: Arc) -> ContractionCertificate:
    """Sufficient test that m restricted to a is contracting for arclength.

    Two points of the arc at in-arc distance l have circle distance
    min(l, 1 - l) and image distance at most lam * l.  Hence lam < 1 settles
    l <= 1/2, and lam * L < 1 - L settles the rest.  A negative verdict is
    inconclusive.
    """
    lam = max_slope_on_arc(m, a)
    L = a.length
    ok = lam < 1 and (L <= Q(1, 2) or lam * L < 1 - L)
    return ContractionCertificate(a, lam, L, ok)


# -- serialization ------------------------------------------------------------


def map_to_json(m: PLCircleMap) -> dict:
    return {"breaks": [format_rational(x) for x in m.breaks], "images": [format_rational(y) for y in m.images]}


def map_from_json(data) -> PLCircleMap:
    if not isinstance(data, dict) or "breaks" not in data or "images" not in data:
        raise CircleError("map JSON needs fields 'breaks' and 'images'")
    xs = [parse_rational(s) for s in data["breaks"]]
    ys = [parse_rational(s) for s in data["images"]]
    if not xs or len(xs) != len(ys):
        raise CircleError("'breaks' and 'images' must be nonempty and of equal length")
    if any(not 0 <= x < 1 for x in xs) or sorted(set(xs)) != xs:
        raise CircleError("'breaks' must be strictly increasing in [0, 1)")
    return from_points(xs, ys)


def arc_to_json(a: Arc) -> dict:
    return {"start": format_rational(a.start), "end": format_rational(a.end), "length": format_rational(a.length)}
