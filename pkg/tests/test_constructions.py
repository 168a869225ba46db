import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kaninj import (
    BaseMismatch,
    DomainMismatch,
    FinPoset,
    MonotoneMap,
    NotParallel,
    classify_morphism,
    cocomma,
    coinserter,
    coproduct,
    equalizer,
    inserter,
    pairing,
    product,
    pushout,
    wide_pushout,
)
from kaninj.oracles import find_isomorphism, is_isomorphic, posets_up_to

from conftest import all_maps, antichain2, posets, vee

SMALL = posets_up_to(2)
TARGETS = posets_up_to(3)


def parallel_pairs(max_size=2):
    for A in posets_up_to(max_size):
        for X in posets_up_to(max_size):
            maps = all_maps(A, X)
            yield from itertools.product(maps, repeat=2)


def spans(max_size=2):
    for A in posets_up_to(max_size):
        for B in posets_up_to(max_size):
            for C in posets_up_to(max_size):
                for f in all_maps(A, B):
                    for h in all_maps(A, C):
                        yield f, h


# inserters and equalizers ---------------------------------------------------------


def test_inserter_examples():
    two = FinPoset.chain(["0", "1"])
    ins = inserter(MonotoneMap.identity(two), MonotoneMap.identity(two))
    assert ins.arrow.is_iso()
    ins = inserter(MonotoneMap.identity(two), MonotoneMap.constant(two, two, "0"))
    assert ins.object.elements == ("0",)
    one, A = FinPoset.point(), antichain2()
    ins = inserter(MonotoneMap.constant(one, A, "a"), MonotoneMap.constant(one, A, "b"))
    assert len(ins.object) == 0


def test_inserter_rejects_non_parallel():
    two = FinPoset.chain(["0", "1"])
    with pytest.raises(NotParallel):
        inserter(MonotoneMap.identity(two), MonotoneMap.identity(vee()))


@pytest.mark.parametrize("u, v", list(parallel_pairs()))
def test_inserter_universal_property(u, v):
    ins = inserter(u, v)
    i = ins.arrow
    assert classify_morphism(i).order_mono
    assert u.compose(i).leq(v.compose(i))
    for Z in TARGETS:
        for g in all_maps(Z, u.dom):
            through = [k for k in all_maps(Z, ins.object) if i.compose(k) == g]
            assert len(through) == (1 if u.compose(g).leq(v.compose(g)) else 0)


def test_equalizer_examples(A2):
    idA = MonotoneMap.identity(A2)
    assert equalizer(idA, idA).arrow.is_iso()
    ca = MonotoneMap.constant(A2, A2, "a")
    assert equalizer(idA, ca).object.elements == ("a",)
    cb = MonotoneMap.constant(A2, A2, "b")
    assert len(equalizer(ca, cb).object) == 0


@pytest.mark.parametrize("f, g", list(parallel_pairs()))
def test_equalizer_is_inserter_of_pairings(f, g):
    P = product([f.cod, f.cod])
    fg, gf = pairing([f, g], P), pairing([g, f], P)
    via = inserter(fg, gf)
    eq = equalizer(f, g)
    assert via.object == eq.object
    assert classify_morphism(eq.arrow).order_mono


# products and coproducts -----------------------------------------------------------


def test_product_examples():
    assert len(product([]).object) == 1
    two = FinPoset.chain(["0", "1"])
    grid = product([two, two]).object
    D = FinPoset.from_pairs(["b", "x", "y", "t"], [("b", "x"), ("b", "y"), ("x", "t"), ("y", "t")])
    assert is_isomorphic(grid, D)
    one = FinPoset.point()
    assert is_isomorphic(coproduct([one, one]).object, antichain2())


@pytest.mark.parametrize("P, Q", list(itertools.product(SMALL, repeat=2)))
def test_product_and_coproduct_are_conical(P, Q):
    pr = product([P, Q])
    for Z in posets_up_to(2):
        maps = all_maps(Z, pr.object)
        for s, t in itertools.product(maps, repeat=2):
            jointly = all(p.compose(s).leq(p.compose(t)) for p in pr.projections)
            assert jointly == s.leq(t)
        for a in all_maps(Z, P):
            for b in all_maps(Z, Q):
                assert [m for m in maps if pr.projections[0].compose(m) == a and pr.projections[1].compose(m) == b] == [pairing([a, b], pr)]
    co = coproduct([P, Q])
    for Z in posets_up_to(2):
        maps = all_maps(co.object, Z)
        for s, t in itertools.product(maps, repeat=2):
            jointly = all(s.compose(j).leq(t.compose(j)) for j in co.injections)
            assert jointly == s.leq(t)
        copairs = {(s.compose(co.injections[0]), s.compose(co.injections[1])) for s in maps}
        assert len(copairs) == len(maps) == len(all_maps(P, Z)) * len(all_maps(Q, Z))


# coinserters, pushouts, cocommas -----------------------------------------------------------


def test_coinserter_examples(A2):
    one = FinPoset.point()
    idA = MonotoneMap.identity(A2)
    assert coinserter(idA, idA).projection.is_iso()
    res = coinserter(MonotoneMap.constant(one, A2, "a"), MonotoneMap.constant(one, A2, "b"))
    assert res.quotient.leq("a", "b") and len(res.quotient) == 2
    two = FinPoset.chain(["0", "1"])
    res = coinserter(MonotoneMap.constant(one, two, "1"), MonotoneMap.constant(one, two, "0"))
    assert len(res.quotient) == 1


@pytest.mark.parametrize("u, v", list(parallel_pairs()))
def test_coinserter_couniversal(u, v):
    res = coinserter(u, v)
    c = res.projection
    assert classify_morphism(c).order_epi
    assert c.compose(u).leq(c.compose(v))
    for Z in TARGETS:
        for d in all_maps(u.cod, Z):
            through = [k for k in all_maps(res.quotient, Z) if k.compose(c) == d]
            assert len(through) == (1 if d.compose(u).leq(d.compose(v)) else 0)


def test_pushout_examples(A2, V, emb):
    one = FinPoset.point()
    for f in (MonotoneMap.identity(V), MonotoneMap.constant(A2, one, "x")):
        sq = pushout(f, MonotoneMap.identity(f.dom))
        assert sq.left_leg.is_iso()
    sq = pushout(MonotoneMap.identity(A2), emb)
    assert find_isomorphism(sq.apex, V) is not None
    assert sq.left_leg.is_embedding()
    E = FinPoset.empty()
    e1 = MonotoneMap(E, one, {})
    assert is_isomorphic(pushout(e1, e1).apex, A2)
    with pytest.raises(DomainMismatch):
        pushout(emb, MonotoneMap.identity(V))


def _square_check(sq, f, h, lax):
    # commuting (or lax) squares into Z factor uniquely through the apex
    for Z in TARGETS:
        for a in all_maps(f.cod, Z):
            for b in all_maps(h.cod, Z):
                ok = a.compose(f).leq(b.compose(h)) if lax else a.compose(f) == b.compose(h)
                through = [k for k in all_maps(sq.apex, Z)
                           if k.compose(sq.left_leg) == a and k.compose(sq.right_leg) == b]
                assert len(through) == (1 if ok else 0)


@pytest.mark.parametrize("f, h", list(spans()))
def test_pushout_universal_property(f, h):
    sq = pushout(f, h)
    assert sq.left_leg.compose(f) == sq.right_leg.compose(h)
    _square_check(sq, f, h, lax=False)


@pytest.mark.parametrize("p, q", list(spans()))
def test_cocomma_couniversal(p, q):
    sq = cocomma(p, q)
    assert sq.left_leg.compose(p).leq(sq.right_leg.compose(q))
    _square_check(sq, p, q, lax=True)


def test_cocomma_examples(A2):
    one = FinPoset.point()
    i1 = MonotoneMap.identity(one)
    sq = cocomma(i1, i1)
    assert len(sq.apex) == 2 and sq.apex.leq(sq.left_leg("x"), sq.right_leg("x"))
    E = FinPoset.empty()
    sq = cocomma(MonotoneMap(E, A2, {}), MonotoneMap(E, one, {}))
    assert len(sq.apex) == 3 and sq.apex.is_discrete()


# wide pushouts --------------------------------------------------------------------------


def test_wide_pushout_examples(A2, V, emb):
    assert wide_pushout(A2, []).base_leg.is_iso()
    sq = pushout(MonotoneMap.identity(A2), emb)
    single = wide_pushout(A2, [sq])
    assert is_isomorphic(single.apex, sq.apex)
    same = MonotoneMap.constant(A2, A2, "a")
    sq2 = pushout(same, emb)
    wp = wide_pushout(A2, [sq, sq2])
    fresh = [x for x in wp.apex.elements if x not in A2]
    assert len(fresh) == 2
    above_both = [x for x in fresh if wp.apex.leq("a", x) and wp.apex.leq("b", x)]
    assert len(above_both) == 1
    with pytest.raises(BaseMismatch):
        wide_pushout(V, [sq])


@pytest.mark.parametrize("X", posets_up_to(2))
def test_wide_pushout_universal_property(X):
    V = vee()
    emb = MonotoneMap(antichain2(), V, {"a": "a", "b": "b"})
    legs = [pushout(f, emb) for f in all_maps(antichain2(), X)][:3]
    wp = wide_pushout(X, legs)
    for sq, c in zip(legs, wp.cocone_legs):
        assert c.compose(sq.left_leg) == wp.base_leg
    image = wp.base_leg.image_mask()
    for c in wp.cocone_legs:
        image |= c.image_mask()
    assert image == (1 << len(wp.apex)) - 1  # jointly surjective
    for Z in posets_up_to(3):
        for base in all_maps(X, Z):
            choices = []
            for sq in legs:
                choices.append([b for b in all_maps(sq.apex, Z) if b.compose(sq.left_leg) == base])
            for pick in itertools.product(*choices):
                through = [k for k in all_maps(wp.apex, Z)
                           if k.compose(wp.base_leg) == base
                           and all(k.compose(c) == b for c, b in zip(wp.cocone_legs, pick))]
                assert len(through) == 1


# random inputs up to size 3 ----------------------------------------------------------

@st.composite
def parallel(draw):
    A = draw(posets(3))
    X = draw(posets(3, min_size=1 if len(A) else 0))
    maps = all_maps(A, X)
    return draw(st.sampled_from(maps)), draw(st.sampled_from(maps))


@st.composite
def span(draw):
    A = draw(posets(3))
    B = draw(posets(3, min_size=1 if len(A) else 0))
    C = draw(posets(3, min_size=1 if len(A) else 0))
    return draw(st.sampled_from(all_maps(A, B))), draw(st.sampled_from(all_maps(A, C)))


@settings(max_examples=25)
@given(parallel())
def test_inserter_and_coinserter_size_three(uv):
    test_inserter_universal_property(*uv)
    test_coinserter_couniversal(*uv)


@settings(max_examples=15)
@given(span())
def test_pushout_and_cocomma_size_three(fh):
    test_pushout_universal_property(*fh)
    test_cocomma_couniversal(*fh)
