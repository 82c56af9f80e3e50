"""Bounded checks over reduced words in the ping-pong generators.

Words are strings over ``aAbB`` (capitals are inverses) and act right to
left: ``"ab"`` is ``a o b``, so ``b`` is applied first.  Every enumeration
is reported in length-then-lexicographic order with ``a < A < b < B``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, TypeVar

from .cantor import ArityMismatch, Membership, VElement, classify, compose, discontinuity_points, element_to_json
from .circle import (
    FixedKind,
    FixedPointReport,
    PLCircleMap,
    arc_contains,
    arcs_disjoint,
    compose_maps,
    fixed_points,
    image_of_arc,
    to_circle_map,
)
from .numerics import NRational, Q, format_rational
from .pingpong import INVERSE, LETTERS, PingPongSystem, verify_pingpong

T = TypeVar("T")

_RANK = {c: i for i, c in enumerate(LETTERS)}


class PingPongNotVerified(RuntimeError):
    pass


class NotInVMinusT(ValueError):
    pass


# -- words --------------------------------------------------------------------


def word_key(w: str) -> Tuple[int, Tuple[int, ...]]:
    return len(w), tuple(_RANK[c] for c in w)


def is_reduced(w: str) -> bool:
    return all(c in _RANK for c in w) and all(INVERSE[x] != y for x, y in zip(w, w[1:]))


def is_cyclically_reduced(w: str) -> bool:
    return is_reduced(w) and bool(w) and (len(w) == 1 or INVERSE[w[0]] != w[-1])


def inverse_word(w: str) -> str:
    return "".join(INVERSE[c] for c in reversed(w))


def free_reduce(w: str) -> str:
    out: List[str] = []
    for c in w:
        if out and out[-1] == INVERSE[c]:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def cyclic_core(w: str) -> Tuple[str, str]:
    """Split a reduced word as ``u . core . u^-1`` with core cyclically reduced."""
    i = 0
    while len(w) - 2 * i > 1 and INVERSE[w[i]] == w[len(w) - 1 - i]:
        i += 1
    return w[:i], w[i:len(w) - i]


def enumerate_reduced(max_len: int) -> Iterator[str]:
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    level = list(LETTERS)
    for length in range(1, max_len + 1):
        yield from level
        if length < max_len:
            level = [w + c for w in level for c in LETTERS if INVERSE[w[-1]] != c]


def _walk(gens: Dict[str, T], max_len: int, mul: Callable[[T, T], T], roots: Sequence[str] = LETTERS) -> Iterator[Tuple[str, T]]:
    # depth-first over words grown on the left, so each value costs one product
    stack = [(c, gens[c]) for c in roots]
    while stack:
        w, value = stack.pop()
        yield w, value
        if len(w) < max_len:
            for c in LETTERS:
                if c != INVERSE[w[0]]:
                    stack.append((c + w, mul(gens[c], value)))


def apply_word(sys: PingPongSystem, w: str, x: NRational, maps: Optional[Dict[str, PLCircleMap]] = None) -> NRational:
    maps = maps or sys.maps()
    for c in reversed(w):
        x = maps[c](x)
    return x


def evaluate_word(sys: PingPongSystem, w: str) -> Tuple[PLCircleMap, VElement]:
    """Circle map and V_n element of a reduced word, cross-checked."""
    if not w or not is_reduced(w):
        raise ValueError(f"{w!r} is not a nonempty reduced word")
    maps, elems = sys.maps(), sys.elements()
    m, g = maps[w[-1]], elems[w[-1]]
    for c in reversed(w[:-1]):
        m = compose_maps(maps[c], m)
        g = compose(elems[c], g)
    assert to_circle_map(g) == m, f"representations disagree on {w}"
    return m, g


def _workers() -> int:
    env = os.environ.get("HTLAB_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cpus))
        except ValueError:
            pass
    return cpus


def _require_verified(sys: PingPongSystem) -> None:
    cert = verify_pingpong(sys)
    if not cert.passed:
        raise PingPongNotVerified("ping-pong hypotheses fail: " + ", ".join(cert.failed_checks()))


# -- freeness -------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    word: str
    check: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"word": self.word, "check": self.check, "detail": self.detail}


@dataclass
class FreeReport:
    n: int
    max_len: int
    words_checked: int
    violations: List[Violation]
    elements_checked: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_len": self.max_len,
            "words_checked": self.words_checked,
            "elements_checked": self.elements_checked,
            "verdict": "pass" if self.passed else "fail",
            "violations": [v.to_json() for v in self.violations],
        }


def witness_letter(w: str) -> str:
    """A letter e outside {c^-1, d} for ``w = d ... c``."""
    return next(e for e in LETTERS if e not in (INVERSE[w[-1]], w[0]))


def _free_subtree(sys: PingPongSystem, max_len: int, root: str, check_elements: bool) -> Tuple[int, List[Violation]]:
    arcs = sys.arcs
    count = 0
    bad = []
    words = _walk(sys.maps(), max_len, compose_maps, roots=root)
    elems = _walk(sys.elements(), max_len, compose, roots=root) if check_elements else None
    for w, m in words:
        count += 1
        if m.is_identity():
            bad.append(Violation(w, "identity", "circle map is the identity"))
        if elems is not None:
            we, g = next(elems)
            assert we == w
            if g.is_identity():
                bad.append(Violation(w, "identity-element", "V_n element is the identity"))
            elif to_circle_map(g) != m:
                bad.append(Violation(w, "representation", "element and circle map disagree"))
        d, e = w[0], witness_letter(w)
        image = image_of_arc(m, arcs[e])
        if not arc_contains(arcs[d], image):
            bad.append(Violation(w, "containment", f"g(P({e})) = {image} not inside P({d}) = {arcs[d]}"))
        if not arcs_disjoint(arcs[d], arcs[e]):
            bad.append(Violation(w, "disjointness", f"P({d}) meets P({e})"))
    return count, bad


def free_certificate(
    sys: PingPongSystem,
    max_len: int,
    check_hypotheses: bool = True,
    check_elements: bool = False,
    workers: Optional[int] = None,
) -> FreeReport:
    """Check every nonempty reduced word up to max_len is not the identity.

    Each word ``g = d ... c`` also gets the ping-pong witness: for a letter
    ``e`` outside ``{c^-1, d}``, ``g(P(e))`` lies in ``P(d)`` and
    ``P(d)`` misses ``P(e)``.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if check_hypotheses:
        _require_verified(sys)
    workers = workers or _workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(LETTERS))) as pool:
            parts = list(pool.map(_free_subtree, *zip(*[(sys, max_len, r, check_elements) for r in LETTERS])))
    else:
        parts = [_free_subtree(sys, max_len, r, check_elements) for r in LETTERS]
    count = sum(c for c, _ in parts)
    violations = sorted((v for _, bad in parts for v in bad), key=lambda v: (word_key(v.word), v.check))
    return FreeReport(sys.n, max_len, count, violations, check_elements)


# -- attracting fixed points ------------------------------------------------------


@dataclass
class CensusEntry:
    word: str
    is_identity: bool
    report: FixedPointReport
    localization_ok: bool
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {
            "word": self.word,
            "is_identity": self.is_identity,
            "fixed_points": [
                {
                    "location": format_rational(p.location),
                    "kind": p.kind.value,
                    "left_slope": format_rational(p.left_slope),
                    "right_slope": format_rational(p.right_slope),
                }
                for p in self.report.points
            ],
            "fixed_intervals": [
                {"start": format_rational(i.start), "length": format_rational(i.length)} for i in self.report.fixed_intervals
            ],
            "localization_ok": self.localization_ok,
            "problems": self.problems,
        }


def census_entry(sys: PingPongSystem, w: str, m: PLCircleMap) -> CensusEntry:
    """Fixed-point structure of one word, with the arc localization test.

    For ``w = u . core . u^-1`` the fixed points are pulled back by u before
    testing them against ``P(d)`` and ``P(c^-1)`` of the core.
    """
    arcs = sys.arcs
    report = fixed_points(m)
    problems = []
    att, rep = report.attracting, report.repelling
    semi = [p for p in report.points if p.kind not in (FixedKind.ATTRACTING, FixedKind.REPELLING)]
    if len(att) != 1:
        problems.append(f"{len(att)} attracting fixed points")
    if len(rep) != 1:
        problems.append(f"{len(rep)} repelling fixed points")
    if semi:
        problems.append(f"{len(semi)} semi-stable fixed points")
    if report.fixed_intervals:
        problems.append(f"{len(report.fixed_intervals)} fixed intervals")
    u, core = cyclic_core(w)
    maps = sys.maps()
    pull = lambda x: apply_word(sys, inverse_word(u), x, maps)  # noqa: E731
    d, c_inv = core[0], INVERSE[core[-1]]
    localization_ok = all(arcs[d].contains_point(pull(p.location)) or arcs[c_inv].contains_point(pull(p.location)) for p in report.points)
    if not localization_ok:
        problems.append(f"a fixed point lies outside P({d}) and P({c_inv})")
    if len(att) == 1 and not arcs[d].contains_point(pull(att[0].location)):
        problems.append(f"attracting point not in P({d})")
    if len(rep) == 1 and not arcs[c_inv].contains_point(pull(rep[0].location)):
        problems.append(f"repelling point not in P({c_inv})")
    return CensusEntry(w, m.is_identity(), report, localization_ok, problems)


def attracting_census(sys: PingPongSystem, max_len: int, include_all: bool = False, check_hypotheses: bool = True) -> List[CensusEntry]:
    """Census over cyclically reduced words (all reduced words if include_all)."""
    if check_hypotheses:
        _require_verified(sys)
    entries = [
        census_entry(sys, w, m)
        for w, m in _walk(sys.maps(), max_len, compose_maps)
        if include_all or is_cyclically_reduced(w)
    ]
    entries.sort(key=lambda e: word_key(e.word))
    return entries


# -- stabilizers and centralizers -------------------------------------------------

TRIVIAL = "Trivial"
CYCLIC_ON_SAMPLE = "CyclicOnSample"
NOT_CYCLIC = "NotCyclic"


def powers_within(root: str, max_len: int) -> List[str]:
    """Nontrivial powers of a reduced word whose reduced length is at most max_len."""
    out = []
    for base in (root, inverse_word(root)):
        k = 1
        while True:
            p = free_reduce(base * k)
            if len(p) > max_len:
                break
            out.append(p)
            k += 1
    return sorted(set(out), key=word_key)


def sample_structure(words: Sequence[str], max_len: int) -> str:
    if not words:
        return TRIVIAL
    root = min(words, key=word_key)
    return CYCLIC_ON_SAMPLE if set(words) == set(powers_within(root, max_len)) else NOT_CYCLIC


@dataclass
class ProbeResult:
    n: int
    max_len: int
    words: List[str]
    structure: str
    subject: dict

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_len": self.max_len,
            **self.subject,
            "words": self.words,
            "structure": self.structure,
        }


def stabilizer_probe(sys: PingPongSystem, p: NRational, max_len: int) -> ProbeResult:
    p = Q(p) % 1
    maps = sys.maps()
    # track only the image of p along each word
    words = []
    stack = [(c, maps[c](p)) for c in LETTERS]
    while stack:
        w, x = stack.pop()
        if x == p:
            words.append(w)
        if len(w) < max_len:
            for c in LETTERS:
                if c != INVERSE[w[0]]:
                    stack.append((c + w, maps[c](x)))
    words.sort(key=word_key)
    return ProbeResult(sys.n, max_len, words, sample_structure(words, max_len), {"point": format_rational(p)})


def commutes(g: VElement, alpha: VElement) -> bool:
    return compose(g, alpha) == compose(alpha, g)


def centralizer_probe(sys: PingPongSystem, alpha: VElement, max_len: int) -> ProbeResult:
    if alpha.n != sys.n:
        raise ArityMismatch(f"alpha has arity {alpha.n}, system has arity {sys.n}")
    words = [w for w, g in _walk(sys.elements(), max_len, compose) if commutes(g, alpha)]
    words.sort(key=word_key)
    return ProbeResult(sys.n, max_len, words, sample_structure(words, max_len), {"alpha": element_to_json(alpha)})


def permutes_points(m: PLCircleMap, points: Sequence[NRational]) -> bool:
    return sorted(m(x) for x in points) == sorted(points)


@dataclass
class DiscontinuityReport:
    n: int
    max_len: int
    alpha: VElement
    points: List[NRational]
    commuting_words: List[str]
    violations: List[str]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_len": self.max_len,
            "alpha": element_to_json(self.alpha),
            "discontinuities": [format_rational(x) for x in self.points],
            "commuting_words": self.commuting_words,
            "violations": self.violations,
            "verdict": "pass" if self.passed else "fail",
        }


def discontinuity_stabilizer_check(sys: PingPongSystem, alpha: VElement, max_len: int) -> DiscontinuityReport:
    """Every sampled word commuting with alpha must permute alpha's jump set."""
    if classify(alpha) is not Membership.IN_V_NOT_T:
        raise NotInVMinusT(f"{alpha} is continuous on the circle")
    points = discontinuity_points(alpha)
    probe = centralizer_probe(sys, alpha, max_len)
    violations = [w for w in probe.words if not permutes_points(evaluate_word(sys, w)[0], points)]
    return DiscontinuityReport(sys.n, max_len, alpha, points, probe.words, violations)
