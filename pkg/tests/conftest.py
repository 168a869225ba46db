import itertools

import pytest
from hypothesis import settings, strategies as st

from kaninj import FinPoset, MonotoneMap
from kaninj.poset import monotone_tuples

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def antichain2():
    return FinPoset.antichain(["a", "b"])


def vee():
    return FinPoset.from_pairs(["a", "b", "t"], [("a", "t"), ("b", "t")])


def diamond():
    return FinPoset.from_pairs(
        ["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")]
    )


def emb_2_v():
    return MonotoneMap(antichain2(), vee(), {"a": "a", "b": "b"})


def collapse_2_1():
    return MonotoneMap.constant(antichain2(), FinPoset.point("t"), "t")


@pytest.fixture
def A2():
    return antichain2()


@pytest.fixture
def V():
    return vee()


@pytest.fixture
def D4():
    return diamond()


@pytest.fixture
def emb():
    return emb_2_v()


def all_maps(A, X):
    return [MonotoneMap._raw(A, X, t) for t in monotone_tuples(A, X)]


@st.composite
def posets(draw, max_size=4, min_size=0):
    """Random naturally labelled poset on ``p0, p1, ...``."""
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    names = [f"p{i}" for i in range(n)]
    return FinPoset.from_pairs(names, [(names[i], names[j]) for i, j in chosen])


@st.composite
def monotone_maps(draw, dom=None, cod=None, max_size=3):
    """A random monotone map, drawn uniformly from the full enumeration."""
    while True:
        A = dom if dom is not None else draw(posets(max_size))
        X = cod if cod is not None else draw(posets(max_size, min_size=1 if len(A) else 0))
        maps = all_maps(A, X)
        if maps:
            return draw(st.sampled_from(maps))


def pairs_of(xs):
    return itertools.product(xs, repeat=2)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
