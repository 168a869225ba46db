"""The lowerset monad on finite posets and the KZ machinery around it.

``T X`` is the poset of all downsets of ``X`` (the empty one included) under
inclusion, ``η`` sends ``x`` to ``↓x`` and ``μ`` takes unions.  Downsets are
handled internally as bitmasks over the element indices of the poset they
live in.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .kan import Verdict, is_left_kan_injective_morphism, is_left_kan_injective_object, membership
from .poset import (
    FinPoset,
    MonotoneMap,
    downsets,
    enumerate_monotone_maps,
    iter_bits,
    monotone_tuples,
    unique_names,
)

# Full associativity is checked on every element of T T T X while T T X stays
# at or below this size; above it only the principal downsets are evaluated,
# which is still exact because both sides preserve unions.
FULL_ASSOCIATIVITY_LIMIT = 20


@dataclass(frozen=True)
class LowersetAlgebra:
    base: FinPoset
    TX: FinPoset
    unit: MonotoneMap  # X -> TX
    mult: MonotoneMap  # TTX -> TX
    algebra: MonotoneMap | None = None  # TX -> X
    masks: tuple[int, ...] = ()  # TX element -> downset of base

    def downset(self, element: str) -> list[str]:
        return self.base.names(self.masks[self.TX.idx(element)])


def _name(P: FinPoset, mask: int) -> str:
    return "_".join(["L"] + [P.elements[i] for i in iter_bits(mask)])


def _carrier(P: FinPoset) -> tuple[FinPoset, tuple[int, ...]]:
    masks = tuple(downsets(P))
    names = unique_names(_name(P, m) for m in masks)
    up = [sum(1 << k for k, m2 in enumerate(masks) if m & ~m2 == 0) for m in masks]
    return FinPoset(names, up), masks


@lru_cache(maxsize=64)
def _T(P: FinPoset) -> tuple[FinPoset, tuple[int, ...], dict]:
    TP, masks = _carrier(P)
    return TP, masks, {m: k for k, m in enumerate(masks)}


def _eta(P: FinPoset) -> MonotoneMap:
    TP, _, pos = _T(P)
    return MonotoneMap._raw(P, TP, [pos[P.down[i]] for i in range(len(P))])


def _mu(P: FinPoset) -> MonotoneMap:
    TP, masks, pos = _T(P)
    TTP, outer, _ = _T(TP)
    out = []
    for m in outer:
        u = 0
        for k in iter_bits(m):
            u |= masks[k]
        out.append(pos[u])
    return MonotoneMap._raw(TTP, TP, out)


@lru_cache(maxsize=64)
def lowerset(X: FinPoset) -> LowersetAlgebra:
    """Monad data ``(TX, η_X, μ_X)``; no algebra structure is attached."""
    TX, masks, _ = _T(X)
    return LowersetAlgebra(X, TX, _eta(X), _mu(X), None, masks)


def lowerset_on_map(f: MonotoneMap) -> MonotoneMap:
    """``Tf``: a downset ``D`` goes to the down-closure of ``f[D]``."""
    TA, amasks, _ = _T(f.dom)
    TB, _, bpos = _T(f.cod)
    out = []
    for m in amasks:
        img = 0
        for i in iter_bits(m):
            img |= 1 << f.idx[i]
        out.append(bpos[f.cod.down_closure(img)])
    return MonotoneMap._raw(TA, TB, out)


def functor_laws_check(f: MonotoneMap, g: MonotoneMap | None = None) -> Verdict:
    """``T id = id`` on both ends of ``f`` and, given ``g``, ``T(g∘f) = Tg∘Tf``."""
    for P in (f.dom, f.cod):
        if lowerset_on_map(MonotoneMap.identity(P)) != MonotoneMap.identity(_T(P)[0]):
            return Verdict(False, P, "T(id) is not the identity")
    if g is not None and lowerset_on_map(g.compose(f)) != lowerset_on_map(g).compose(lowerset_on_map(f)):
        return Verdict(False, (g, f), "T does not preserve composition")
    return Verdict(True)


def monad_laws_check(X: FinPoset) -> Verdict:
    """Unit laws ``μ∘η_T = id = μ∘Tη`` and associativity ``μ∘μ_T = μ∘Tμ``."""
    L = lowerset(X)
    ident = MonotoneMap.identity(L.TX)
    if L.mult.compose(_eta(L.TX)) != ident:
        return Verdict(False, None, "μ∘ηT is not the identity")
    if L.mult.compose(lowerset_on_map(L.unit)) != ident:
        return Verdict(False, None, "μ∘Tη is not the identity")
    # elements of TTTX are downsets z of TTX, kept as masks so TTTX is never built
    TTX = L.mult.dom
    _, inner, pos = _T(L.TX)  # TTX element -> mask over TX
    if len(TTX) <= FULL_ASSOCIATIVITY_LIMIT:
        probes = downsets(TTX)
    else:
        probes = [0] + [TTX.down[s] for s in range(len(TTX))]
    mu = L.mult.idx
    for z in probes:
        union = 0
        for s in iter_bits(z):
            union |= inner[s]
        lhs = mu[pos[union]]  # μ∘μT
        img = 0
        for s in iter_bits(z):
            img |= 1 << mu[s]
        rhs = mu[pos[L.TX.down_closure(img)]]  # μ∘Tμ
        if lhs != rhs:
            return Verdict(False, TTX.names(z), "associativity fails")
    return Verdict(True)


def kz_check(X: FinPoset) -> Verdict:
    """``Tη_X <= η_{TX}`` pointwise in ``TTX``."""
    L = lowerset(X)
    left = lowerset_on_map(L.unit)
    right = _eta(L.TX)
    for d, (a, b) in enumerate(zip(left.idx, right.idx)):
        if not left.cod.leq_idx(a, b):
            return Verdict(False, L.TX.elements[d], "Tη is not below ηT")
    return Verdict(True)


@dataclass(frozen=True)
class AlgebraVerdict:
    algebra: MonotoneMap | None
    witness: tuple[str, ...] | None = None  # a downset without a join

    def __bool__(self) -> bool:
        return self.algebra is not None


def algebra_structure(X: FinPoset) -> AlgebraVerdict:
    """``α: TX -> X`` sending each downset to its join, or a join-less downset.

    Nonempty downsets are searched first (by size), so a missing bottom is
    only reported when every other join exists.
    """
    TX, masks, _ = _T(X)  # μ is not needed, so TTX is never built
    out = [X.join_idx(m) for m in masks]
    if None in out:
        bad = [m for m, j in zip(masks, out) if j is None]
        m = min(bad, key=lambda m: (m == 0, bin(m).count("1"), m))
        return AlgebraVerdict(None, tuple(X.names(m)))
    return AlgebraVerdict(MonotoneMap._raw(TX, X, out, check=True))


def with_algebra(X: FinPoset) -> LowersetAlgebra:
    L = lowerset(X)
    a = algebra_structure(X)
    return LowersetAlgebra(L.base, L.TX, L.unit, L.mult, a.algebra, L.masks)


def algebra_laws_check(X: FinPoset, alpha: MonotoneMap) -> Verdict:
    """``α∘η = id``, ``id <= η∘α`` and ``α∘Tα = α∘μ``."""
    L = lowerset(X)
    if alpha.compose(L.unit) != MonotoneMap.identity(X):
        return Verdict(False, None, "α∘η is not the identity")
    if not MonotoneMap.identity(L.TX).leq(L.unit.compose(alpha)):
        return Verdict(False, None, "id is not below η∘α")
    if alpha.compose(lowerset_on_map(alpha)) != alpha.compose(L.mult):
        return Verdict(False, None, "α∘Tα differs from α∘μ")
    return Verdict(True)


def is_algebra_morphism(p: MonotoneMap) -> bool:
    """``p∘α_X = α_Y∘Tp`` for algebras ``X = dom p`` and ``Y = cod p``."""
    ax, ay = algebra_structure(p.dom), algebra_structure(p.cod)
    if not (ax and ay):
        raise ValueError("both ends must carry an algebra structure")
    return p.compose(ax.algebra) == ay.algebra.compose(lowerset_on_map(p))


# coprojections -----------------------------------------------------------------------


@dataclass(frozen=True)
class CoprojectionWitness:
    r: MonotoneMap  # C -> X
    s: MonotoneMap  # X -> C

    def laws_hold(self) -> bool:
        r, s = self.r, self.s
        if s.dom != r.cod or s.cod != r.dom:
            return False
        return r.compose(s) == MonotoneMap.identity(r.cod) and MonotoneMap.identity(r.dom).leq(s.compose(r))


def find_section(r: MonotoneMap) -> MonotoneMap | None:
    """A monotone ``s`` with ``r∘s = id`` and ``id <= s∘r``, if one exists."""
    C, X = r.dom, r.cod
    if not r.is_surjective():
        return None
    allowed = [0] * len(X)
    for c, x in enumerate(r.idx):
        allowed[x] |= 1 << c
    for t in monotone_tuples(X, C, allowed):
        w = CoprojectionWitness(r, MonotoneMap._raw(X, C, t))
        if w.laws_hold():
            return w.s
    return None


def is_coprojection(w) -> bool:
    if isinstance(w, CoprojectionWitness):
        return w.laws_hold()
    return find_section(w) is not None


def coprojections(C: FinPoset, X: FinPoset):
    """Every coprojection ``C -> X`` paired with one section."""
    for r in enumerate_monotone_maps(C, X):
        s = find_section(r)
        if s is not None:
            yield CoprojectionWitness(r, s)


def coprojection_closure_check(H: Sequence[MonotoneMap], family: Iterable[FinPoset],
                               squares: bool = True) -> Verdict:
    """Closure of LInj(H) under coprojections, over all coprojections between members of ``family``.

    (a) ``C`` a member and ``r: C -> X`` a coprojection make ``X`` a member;
    (b) for a commuting square ``r2∘f = g∘r1`` with ``f`` a member morphism
    and ``r1, r2`` coprojections, ``g`` is a member morphism.
    """
    family = list(family)
    obj = {P: bool(membership(P, H)) for P in family}
    cop = {(C, X): list(coprojections(C, X)) for C in family for X in family}
    for (C, X), ws in cop.items():
        if ws and obj[C] and not obj[X]:
            return Verdict(False, ws[0], "coprojection out of a member lands outside")
    if not squares:
        return Verdict(True)
    for (C1, X1), ws1 in cop.items():
        if not obj[C1]:
            continue
        for (C2, X2), ws2 in cop.items():
            if not ws1 or not ws2 or not obj[C2]:
                continue
            for f in enumerate_monotone_maps(C1, C2):
                if not all(is_left_kan_injective_morphism(f, h) for h in H):
                    continue
                for w1 in ws1:
                    for w2 in ws2:
                        # g is forced: g = g∘r1∘s1 = r2∘f∘s1
                        g = w2.r.compose(f).compose(w1.s)
                        if g.compose(w1.r) != w2.r.compose(f):
                            continue
                        if not all(is_left_kan_injective_morphism(g, h) for h in H):
                            return Verdict(False, (f, w1, w2, g), "square condition fails")
    return Verdict(True)


# algebras as Kan-injectives w.r.t. units -------------------------------------------------


@dataclass
class CrosscheckRow:
    subject: FinPoset
    is_algebra: bool
    injective_to_all_units: bool
    defeated_by: FinPoset | None = None  # some Y whose unit η_Y defeats the subject


@dataclass
class CrosscheckReport:
    rows: list
    algebras_injective: bool  # exact over the family
    non_algebras_defeated: bool  # relative to the family only
    converse_scope: str = "family-relative"

    def __bool__(self) -> bool:
        return self.algebras_injective and self.non_algebras_defeated


def units_injectivity_crosscheck(family: Iterable[FinPoset]) -> CrosscheckReport:
    """Algebras against the units ``η_Y`` for every ``Y`` in ``family``."""
    family = list(family)
    units = [(Y, lowerset(Y).unit) for Y in family]
    rows = []
    for X in family:
        alg = bool(algebra_structure(X))
        defeat = next((Y for Y, u in units if not is_left_kan_injective_object(X, u)), None)
        rows.append(CrosscheckRow(X, alg, defeat is None, defeat))
    return CrosscheckReport(
        rows,
        all(r.injective_to_all_units for r in rows if r.is_algebra),
        all(r.defeated_by is not None for r in rows if not r.is_algebra),
    )
