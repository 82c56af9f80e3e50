"""Elements of the Higman-Thompson group V_n as prefix-replacement tables.

A prefix is a tuple of digits in ``1..n``.  An element is a bijection
between two complete antichains of prefixes; the cone ``w.kappa`` is sent
to ``v.kappa``.  Elements are kept in the unique caret-reduced form, so
``==`` is group equality.

Composition follows the word convention ``compose(g, h) = g o h``:
``h`` acts first.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from dataclasses import dataclass
from math import lcm
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .numerics import NRational, Q

Prefix = Tuple[int, ...]
Pair = Tuple[Prefix, Prefix]


class CantorError(ValueError):
    pass


class NotAntichain(CantorError):
    pass


class IncompletePartition(CantorError):
    pass


class ArityMismatch(CantorError):
    pass


class Membership(enum.Enum):
    IN_F = "F"
    IN_T_NOT_F = "T\\F"
    IN_V_NOT_T = "V\\T"


def _check_digits(w: Sequence[int], n: int) -> None:
    for d in w:
        if not 1 <= d <= n:
            raise ArityMismatch(f"digit {d} outside 1..{n} in prefix {format_prefix(w, n)!r}")


def _check_complete_antichain(prefixes: Sequence[Prefix], n: int, side: str) -> None:
    ordered = sorted(prefixes)
    for u, w in zip(ordered, ordered[1:]):
        # lexicographic sort puts every extension of u directly after u
        if w[: len(u)] == u:
            raise NotAntichain(f"{side} prefix {format_prefix(u, n)!r} is an initial segment of {format_prefix(w, n)!r}")
    depth = max(len(w) for w in ordered)
    if sum(n ** (depth - len(w)) for w in ordered) != n**depth:
        raise IncompletePartition(f"{side} cones do not cover the Cantor set")


@dataclass(frozen=True)
class VElement:
    """A reduced prefix-replacement table; build with :func:`make_element`."""

    n: int
    pairs: Tuple[Pair, ...]

    def table(self) -> Dict[Prefix, Prefix]:
        return dict(self.pairs)

    @property
    def domain(self) -> List[Prefix]:
        return [w for w, _ in self.pairs]

    @property
    def range(self) -> List[Prefix]:
        return [v for _, v in self.pairs]

    def is_identity(self) -> bool:
        return self.pairs == (((), ()),)

    def __mul__(self, other: "VElement") -> "VElement":
        return compose(self, other)

    def __str__(self) -> str:
        body = ", ".join(f"{format_prefix(w, self.n) or 'e'}->{format_prefix(v, self.n) or 'e'}" for w, v in self.pairs)
        return f"V_{self.n}[{body}]"


def _reduce(table: Dict[Prefix, Prefix], n: int) -> Dict[Prefix, Prefix]:
    changed = True
    while changed:
        changed = False
        parents = {w[:-1] for w in table if w and w[-1] == 1}
        for p in parents:
            v1 = table.get(p + (1,))
            if v1 is None or not v1 or v1[-1] != 1:
                continue
            root = v1[:-1]
            if all(table.get(p + (i,)) == root + (i,) for i in range(2, n + 1)):
                for i in range(1, n + 1):
                    del table[p + (i,)]
                table[p] = root
                changed = True
    return table


def _from_table(n: int, table: Dict[Prefix, Prefix]) -> VElement:
    return VElement(n, tuple(sorted(_reduce(table, n).items())))


def make_element(n: int, pairs: Iterable[Tuple[Sequence[int], Sequence[int]]]) -> VElement:
    """Validate a prefix-replacement table and return its reduced form."""
    if n < 2:
        raise ArityMismatch(f"arity must be >= 2, got {n}")
    pairs = [(tuple(w), tuple(v)) for w, v in pairs]
    if not pairs:
        raise IncompletePartition("an element needs at least one pair")
    for w, v in pairs:
        _check_digits(w, n)
        _check_digits(v, n)
    _check_complete_antichain([w for w, _ in pairs], n, "domain")
    _check_complete_antichain([v for _, v in pairs], n, "range")
    return _from_table(n, dict(pairs))


def identity(n: int) -> VElement:
    return VElement(n, (((), ()),))


def rotation(n: int) -> VElement:
    """The top-level rotation ``i -> i+1 (mod n)``, of order n."""
    return VElement(n, tuple(((i,), (i % n + 1,)) for i in range(1, n + 1)))


def canonicalize(g: VElement) -> VElement:
    return _from_table(g.n, g.table())


def expand(g: VElement, index: int) -> VElement:
    """Split pair ``index`` into its n children; the result is *not* reduced."""
    w, v = g.pairs[index]
    table = g.table()
    del table[w]
    for i in range(1, g.n + 1):
        table[w + (i,)] = v + (i,)
    return VElement(g.n, tuple(sorted(table.items())))


class _Lookup:
    """Prefix search in a complete antichain."""

    def __init__(self, table: Dict[Prefix, Prefix]):
        self.table = table
        self.keys = sorted(table)

    def covering(self, v: Prefix) -> Optional[Prefix]:
        # the antichain element that is an initial segment of v, if any
        table = self.table
        for k in range(len(v) + 1):
            if v[:k] in table:
                return v[:k]
        return None

    def extensions(self, v: Prefix) -> Iterator[Prefix]:
        keys = self.keys
        i = bisect_left(keys, v)
        m = len(v)
        while i < len(keys) and keys[i][:m] == v:
            yield keys[i]
            i += 1


def compose(g: VElement, h: VElement) -> VElement:
    """``g o h``: apply h, then g."""
    if g.n != h.n:
        raise ArityMismatch(f"cannot compose arities {g.n} and {h.n}")
    look = _Lookup(g.table())
    out: Dict[Prefix, Prefix] = {}
    for w, v in h.pairs:
        u = look.covering(v)
        if u is not None:
            out[w] = look.table[u] + v[len(u):]
        else:
            for u in look.extensions(v):
                out[w + u[len(v):]] = look.table[u]
    return _from_table(g.n, out)


def invert(g: VElement) -> VElement:
    return _from_table(g.n, {v: w for w, v in g.pairs})


def power(g: VElement, k: int) -> VElement:
    base = g if k >= 0 else invert(g)
    result = identity(g.n)
    for _ in range(abs(k)):
        result = compose(base, result)
    return result


def classify(g: VElement) -> Membership:
    """Place g in F_n, T_n \\ F_n or V_n \\ T_n by the induced index map."""
    by_range = {v: i for i, v in enumerate(sorted(g.range))}
    perm = [by_range[v] for _, v in sorted(g.pairs)]
    k = len(perm)
    shift = perm[0]
    if any(perm[i] != (i + shift) % k for i in range(k)):
        return Membership.IN_V_NOT_T
    return Membership.IN_F if shift == 0 else Membership.IN_T_NOT_F


def _orbit_length(g: VElement, kappa: "CantorPoint", bound: int) -> Optional[int]:
    x = kappa
    for k in range(1, bound + 1):
        x = apply_point(g, x)
        if x == kappa:
            return k
    return None


def order_of(g: VElement, bound: int) -> Optional[int]:
    """Least k <= bound with g^k = 1, or None when the bound is exceeded.

    The order is a multiple of every orbit length, so a few probe orbits
    either rule out all k <= bound or leave only multiples of their lcm.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    one = identity(g.n)
    if g == one:
        return 1
    step = 1
    for per in ((1, 2), (2, 1, 1), (g.n, 1)):
        k = _orbit_length(g, CantorPoint(g.n, (), per), bound)
        if k is None:
            return None
        step = lcm(step, k)
        if step > bound:
            return None
    base = power(g, step)
    current = base
    for k in range(step, bound + 1, step):
        if current == one:
            return k
        current = compose(base, current)
    return None


def cone_interval(w: Sequence[int], n: int) -> Tuple[NRational, NRational]:
    """Left endpoint and length of the interval ``[x, x + n^-|w|)`` of a cone."""
    x = 0
    for d in w:
        x = x * n + (d - 1)
    scale = n ** len(w)
    return Q(x, scale), Q(1, scale)


def discontinuity_points(g: VElement) -> List[NRational]:
    """Points of [0,1) where the interval-exchange model of g jumps.

    The model is right-continuous: each cone interval is sent affinely onto
    its image interval.  A boundary point counts when the left limit there
    differs mod 1 from the value.
    """
    n = g.n
    pieces = []
    for w, v in g.pairs:
        x, dx = cone_interval(w, n)
        y, dy = cone_interval(v, n)
        pieces.append((x, y, y + dy))
    points = []
    for i, (x, y, _) in enumerate(pieces):
        left_limit = pieces[i - 1][2]
        if (left_limit - y) % 1 != 0:
            points.append(x)
    return sorted(points)


# -- eventually periodic Cantor points ---------------------------------------


def _primitive_root(per: Prefix) -> Prefix:
    m = len(per)
    for d in range(1, m + 1):
        if m % d == 0 and per[:d] * (m // d) == per:
            return per[:d]
    return per


@dataclass(frozen=True)
class CantorPoint:
    """The infinite word ``pre . per . per . ...``, stored canonically."""

    n: int
    pre: Prefix
    per: Prefix

    def __post_init__(self):
        if not self.per:
            raise CantorError("period must be nonempty")
        _check_digits(self.pre, self.n)
        _check_digits(self.per, self.n)
        pre, per = tuple(self.pre), _primitive_root(tuple(self.per))
        while pre and pre[-1] == per[-1]:
            pre, per = pre[:-1], per[-1:] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    def digits(self, count: int) -> Prefix:
        out = list(self.pre[:count])
        while len(out) < count:
            out.extend(self.per)
        return tuple(out[:count])

    def shift(self, k: int) -> "CantorPoint":
        """Drop the first k digits."""
        if k <= len(self.pre):
            return CantorPoint(self.n, self.pre[k:], self.per)
        r = (k - len(self.pre)) % len(self.per)
        return CantorPoint(self.n, (), self.per[r:] + self.per[:r])

    def __str__(self) -> str:
        return f"{format_prefix(self.pre, self.n)}({format_prefix(self.per, self.n)})^inf"


def apply_point(g: VElement, kappa: CantorPoint) -> CantorPoint:
    if g.n != kappa.n:
        raise ArityMismatch(f"element has arity {g.n}, point has arity {kappa.n}")
    depth = max(len(w) for w, _ in g.pairs)
    head = kappa.digits(depth)
    table = g.table()
    for k in range(depth + 1):
        v = table.get(head[:k])
        if v is not None:
            rest = kappa.shift(k)
            return CantorPoint(g.n, v + rest.pre, rest.per)
    raise AssertionError("domain antichain is not complete")


def cantor_to_circle(kappa: CantorPoint) -> NRational:
    """The circle point ``sum (d_i - 1) n^-i`` of an infinite word, mod 1."""
    n = kappa.n
    x, _ = cone_interval(kappa.pre, n)
    p, span = cone_interval(kappa.per, n)
    tail = p / (1 - span)
    return (x + tail / n ** len(kappa.pre)) % 1


def circle_to_cantor(x: NRational, n: int) -> CantorPoint:
    """Greedy base-n expansion of a rational circle point.

    n-adic points get the expansion ending in ``111...`` so that x lies in
    the half-open interval of every prefix of its word.
    """
    x = Q(x) % 1
    p, q = int(x.numerator), int(x.denominator)
    seen: Dict[int, int] = {}
    digits: List[int] = []
    while p not in seen:
        seen[p] = len(digits)
        d, p = divmod(p * n, q)
        digits.append(d + 1)
    start = seen[p]
    return CantorPoint(n, tuple(digits[:start]), tuple(digits[start:]))


# -- serialization ------------------------------------------------------------


def format_prefix(w: Sequence[int], n: int):
    """Digit string for n <= 9, list of ints otherwise."""
    if n <= 9:
        return "".join(str(d) for d in w)
    return list(w)


def parse_prefix(raw, n: int) -> Prefix:
    if isinstance(raw, str):
        if n > 9 and raw:
            raise ArityMismatch(f"arity {n} prefixes must be integer lists, got {raw!r}")
        if not all(c.isdigit() for c in raw):
            raise ArityMismatch(f"prefix {raw!r} is not a digit string")
        w = tuple(int(c) for c in raw)
    elif isinstance(raw, list) and all(isinstance(d, int) for d in raw):
        w = tuple(raw)
    else:
        raise CantorError(f"cannot read prefix {raw!r}")
    _check_digits(w, n)
    return w


def element_to_json(g: VElement) -> dict:
    return {"n": g.n, "pairs": [[format_prefix(w, g.n), format_prefix(v, g.n)] for w, v in g.pairs]}


def element_from_json(data) -> VElement:
    if not isinstance(data, dict) or "n" not in data or "pairs" not in data:
        raise CantorError("element JSON needs fields 'n' and 'pairs'")
    n = data["n"]
    if not isinstance(n, int) or n < 2:
        raise ArityMismatch(f"field 'n' must be an integer >= 2, got {n!r}")
    pairs = data["pairs"]
    if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise CantorError("field 'pairs' must be a list of [domain, range] prefixes")
    return make_element(n, [(parse_prefix(w, n), parse_prefix(v, n)) for w, v in pairs])


def point_to_json(kappa: CantorPoint) -> dict:
    return {"pre": format_prefix(kappa.pre, kappa.n), "per": format_prefix(kappa.per, kappa.n)}


def point_from_json(data, n: int) -> CantorPoint:
    if not isinstance(data, dict) or "per" not in data:
        raise CantorError("point JSON needs fields 'pre' and 'per'")
    return CantorPoint(n, parse_prefix(data.get("pre", ""), n), parse_prefix(data["per"], n))
