import random

import pytest
from hypothesis import strategies as st

from multiperm.relcore import Multipermutation, Relation


def repair(n, rows):
    """Patch zero rows and zero columns so the matrix is a multipermutation."""
    rows = list(rows)
    for i in range(n):
        if rows[i] == 0:
            rows[i] = 1 << i
    cols = 0
    for r in rows:
        cols |= r
    for j in range(n):
        if not cols >> j & 1:
            rows[j] |= 1 << j
    return Multipermutation(n, tuple(rows))


@st.composite
def multiperms(draw, n=None, max_n=6):
    if n is None:
        n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return repair(n, rows)


@st.composite
def relations(draw, n=None, max_n=5):
    if n is None:
        n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return Relation(n, tuple(rows))


@st.composite
def same_n(draw, k=2, max_n=6, strategy=multiperms):
    n = draw(st.integers(1, max_n))
    return tuple(draw(strategy(n=n)) for _ in range(k))


def random_multiperm(rng: random.Random, n: int, density: float = 0.35):
    rows = [sum(1 << j for j in range(n) if rng.random() < density) for _ in range(n)]
    return repair(n, rows)


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion

_RESULTS: dict[int, list[bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _RESULTS.setdefault(k, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RESULTS):
        ok = all(_RESULTS[k])
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}"
                                    f"  ({sum(_RESULTS[k])}/{len(_RESULTS[k])} checks)")
