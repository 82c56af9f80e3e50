import random

import pytest

from htlab.cantor import CantorPoint, make_element
from htlab.numerics import Q

ACCEPTANCE = []


def random_antichain(rng, n, expansions):
    leaves = [()]
    for _ in range(expansions):
        w = leaves.pop(rng.randrange(len(leaves)))
        leaves.extend(w + (d,) for d in range(1, n + 1))
    return sorted(leaves)


def random_element(rng, n, kind="V", max_expansions=4):
    """Random element of F_n, T_n or V_n (kind 'F', 'T', 'V')."""
    k = rng.randint(0, max_expansions)
    dom = random_antichain(rng, n, k)
    ran = random_antichain(rng, n, k)
    m = len(dom)
    if kind == "F":
        idx = list(range(m))
    elif kind == "T":
        s = rng.randrange(m)
        idx = [(i + s) % m for i in range(m)]
    else:
        idx = list(range(m))
        rng.shuffle(idx)
    return make_element(n, [(dom[i], ran[idx[i]]) for i in range(m)])


def random_point(rng, n, max_pre=5, max_per=3):
    pre = tuple(rng.randint(1, n) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.randint(1, n) for _ in range(rng.randint(1, max_per)))
    return CantorPoint(n, pre, per)


def random_n_adic(rng, n, depth=6):
    k = rng.randint(0, depth)
    return Q(rng.randrange(n**k), n**k)


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture
def f2_generator():
    return make_element(2, [((1,), (1, 1)), ((2, 1), (1, 2)), ((2, 2), (2,))])


@pytest.fixture
def rho2():
    return make_element(2, [((1,), (2,)), ((2,), (1,))])


@pytest.fixture
def sigma2():
    return make_element(2, [((1, 1), (1, 1)), ((1, 2), (2, 1)), ((2, 1), (1, 2)), ((2, 2), (2, 2))])


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is not None and call.when == "call":
        ACCEPTANCE.append((marker.args[0], marker.args[1], call.excinfo is None))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
