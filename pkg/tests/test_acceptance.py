"""One test per acceptance criterion; the summary lines come from conftest."""

import time
from dataclasses import replace

import pytest

from conftest import random_element, random_point
from htlab.cantor import (
    Membership,
    apply_point,
    canonicalize,
    classify,
    compose,
    discontinuity_points,
    expand,
    identity,
    invert,
    order_of,
    rotation,
)
from htlab.circle import Arc, FixedKind, from_circle_map, invert_map, to_circle_map
from htlab.freecert import (
    CYCLIC_ON_SAMPLE,
    TRIVIAL,
    PingPongNotVerified,
    attracting_census,
    centralizer_probe,
    discontinuity_stabilizer_check,
    free_certificate,
    is_cyclically_reduced,
    powers_within,
    stabilizer_probe,
)
from htlab.numerics import Q, is_n_adic
from htlab.pingpong import build_system, replace_b, verify_pingpong


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.criterion(1, "ping-pong certificate for n = 2..10, exact, < 1 s each")
def test_criterion_1_pingpong_certificate():
    for n in range(2, 11):
        with Clock() as clock:
            cert = verify_pingpong(build_system(n))
        assert cert.failed_checks() == [], n
        assert len(cert.attractors) == 4 and len(cert.disjointness) == 6
        assert len(cert.inequalities) == 4 and all(q.holds for q in cert.inequalities)
        assert all(r["ok"] for r in cert.containments.values()) and len(cert.containments) == 4
        assert all(c.certified for c in cert.contractions.values())
        assert clock.elapsed < 1, (n, clock.elapsed)
    data = verify_pingpong(build_system(2)).to_json()
    image, target = data["containments"]["a"]["image"], data["containments"]["a"]["target"]
    assert (image["start"], image["end"]) == ("57/128", "71/128")
    assert (target["start"], target["end"]) == ("7/16", "9/16")
    c = data["contractions"]["a"]
    assert (c["max_slope"], c["arc_length"], c["lhs"], c["rhs"]) == ("1/8", "7/8", "7/64", "1/8")


@pytest.mark.criterion(2, "no reduced word of length <= 10 is the identity, n in {2,3}")
def test_criterion_2_freeness():
    for n in (2, 3):
        report = free_certificate(build_system(n), 10)
        assert report.words_checked == 118096
        assert report.violations == [], report.violations[:5]


@pytest.mark.criterion(3, "attracting census of cyclically reduced words, length <= 6, n in {2,3}, < 1 min")
def test_criterion_3_census():
    with Clock() as clock:
        for n in (2, 3):
            entries = attracting_census(build_system(n), 6)
            # cyclically reduced words of length L over a free group of rank 2: 3^L + 1 + 2 [L even]
            assert len(entries) == sum(3**k + 1 + 2 * (k % 2 == 0) for k in range(1, 7))
            for e in entries:
                assert is_cyclically_reduced(e.word)
                kinds = [p.kind for p in e.report.points]
                assert kinds.count(FixedKind.ATTRACTING) == 1 and kinds.count(FixedKind.REPELLING) == 1, e.word
                assert len(kinds) == 2 and not e.report.fixed_intervals, e.word
                assert e.localization_ok and e.ok, (e.word, e.problems)
    assert clock.elapsed < 60


@pytest.mark.criterion(4, "group-algebra properties, 500 random cases each, n in {2,3,5}, < 30 s")
def test_criterion_4_group_algebra(rng):
    cases = 500
    with Clock() as clock:
        for n in (2, 3, 5):
            for _ in range(cases):
                f, g, h = (random_element(rng, n) for _ in range(3))
                assert compose(f, compose(g, h)) == compose(compose(f, g), h)
                assert compose(g, invert(g)) == identity(n) == compose(invert(g), g)
                assert canonicalize(canonicalize(g)) == canonicalize(g)
                assert canonicalize(expand(g, rng.randrange(len(g.pairs)))) == g
                x = random_point(rng, n)
                assert apply_point(compose(g, h), x) == apply_point(g, apply_point(h, x))
                t = random_element(rng, n, rng.choice("FT"))
                assert from_circle_map(to_circle_map(t), n) == t
    assert clock.elapsed < 30


@pytest.mark.criterion(5, "stabilizer of 0 for n = 2 up to length 8 is the powers of a, < 1 min")
def test_criterion_5_stabilizer():
    with Clock() as clock:
        probe = stabilizer_probe(build_system(2), Q(0), 8)
    assert probe.words == powers_within("a", 8)
    assert probe.structure == CYCLIC_ON_SAMPLE
    assert clock.elapsed < 60


@pytest.mark.criterion(6, "centralizers of the rotation and of a up to length 6, n in {2,3}, < 2 min")
def test_criterion_6_centralizer():
    with Clock() as clock:
        for n in (2, 3):
            sys = build_system(n)
            rho = centralizer_probe(sys, rotation(n), 6)
            assert rho.words == [] and rho.structure == TRIVIAL
            a = centralizer_probe(sys, sys.a_element, 6)
            assert a.words == powers_within("a", 6) and a.structure == CYCLIC_ON_SAMPLE
    assert clock.elapsed < 120


@pytest.mark.criterion(7, "discontinuity set of the transposition is preserved by its commuting words, < 1 min")
def test_criterion_7_discontinuities(sigma2):
    with Clock() as clock:
        points = discontinuity_points(sigma2)
        assert points == [Q(1, 4), Q(1, 2), Q(3, 4)]
        assert all(is_n_adic(x, 2) for x in points)
        report = discontinuity_stabilizer_check(build_system(2), sigma2, 5)
        assert report.passed and report.violations == []
    assert clock.elapsed < 60


@pytest.mark.criterion(8, "orders and membership, < 10 s")
def test_criterion_8_order_membership(sigma2):
    with Clock() as clock:
        for n in range(2, 7):
            assert order_of(rotation(n), 100) == n
        assert classify(identity(2)) is Membership.IN_F
        assert classify(rotation(2)) is Membership.IN_T_NOT_F
        assert classify(sigma2) is Membership.IN_V_NOT_T
        for n in (2, 3):
            sys = build_system(n)
            assert order_of(sys.a_element, 500) is None
            assert order_of(sys.b_element, 500) is None
    assert clock.elapsed < 10


@pytest.mark.criterion(9, "negative controls fail with the failed check named, < 1 s")
def test_criterion_9_negative_controls():
    with Clock() as clock:
        sys = build_system(2)
        moved = Arc((sys.arcs["a"].start + Q(1, 2)) % 1, sys.arcs["a"].length)
        cert = verify_pingpong(replace(sys, arcs={**sys.arcs, "a": moved}))
        assert not cert.passed and "attractor[a]" in cert.failed_checks()
        bad = replace_b(sys, invert_map(sys.a))
        with pytest.raises(PingPongNotVerified, match=r"attractor\[b\]"):
            free_certificate(bad, 3)
        report = free_certificate(bad, 3, check_hypotheses=False, workers=1)
        assert ("ab", "identity") in {(v.word, v.check) for v in report.violations}
    assert clock.elapsed < 1
