"""Weighted limits and colimits in Pos.

Every colimit here funnels through :func:`quotient_by_relations`: build a
disjoint union, force the required inequalities, collapse order-cycles.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import BaseMismatch, DomainMismatch, NotParallel
from .poset import (
    FinPoset,
    MonotoneMap,
    QuotientResult,
    _quotient_idx,
    iter_bits,
    unique_names,
)


@dataclass(frozen=True)
class InserterResult:
    object: FinPoset
    arrow: MonotoneMap


@dataclass(frozen=True)
class ColimitSquare:
    """A pushout or cocomma square.

    ``left_leg`` starts at the base (codomain of the first map of the span),
    ``right_leg`` at the attached object.
    """

    apex: FinPoset
    left_leg: MonotoneMap
    right_leg: MonotoneMap
    kind: str


@dataclass(frozen=True)
class WidePushoutResult:
    apex: FinPoset
    base_leg: MonotoneMap
    cocone_legs: tuple


@dataclass(frozen=True)
class ProductResult:
    object: FinPoset
    projections: tuple


@dataclass(frozen=True)
class CoproductResult:
    object: FinPoset
    injections: tuple


def _parallel(u: MonotoneMap, v: MonotoneMap) -> None:
    if u.dom != v.dom or u.cod != v.cod:
        raise NotParallel("inserter/coinserter needs a parallel pair")


def _subobject(X: FinPoset, keep: list[int]) -> InserterResult:
    I = X._induced(keep)
    return InserterResult(I, MonotoneMap._raw(I, X, keep))


def inserter(u: MonotoneMap, v: MonotoneMap) -> InserterResult:
    """Subposet of ``dom`` on all ``x`` with ``u(x) <= v(x)``."""
    _parallel(u, v)
    up = u.cod.up
    keep = [i for i in range(len(u.dom)) if up[u.idx[i]] >> v.idx[i] & 1]
    return _subobject(u.dom, keep)


def equalizer(f: MonotoneMap, g: MonotoneMap) -> InserterResult:
    _parallel(f, g)
    keep = [i for i in range(len(f.dom)) if f.idx[i] == g.idx[i]]
    return _subobject(f.dom, keep)


def product(factors: Sequence[FinPoset]) -> ProductResult:
    factors = list(factors)
    tuples = list(itertools.product(*[range(len(P)) for P in factors]))
    pos = {t: k for k, t in enumerate(tuples)}
    up = []
    for t in tuples:
        m = 0
        for s in tuples:
            if all(P.up[a] >> b & 1 for P, a, b in zip(factors, t, s)):
                m |= 1 << pos[s]
        up.append(m)
    names = unique_names("_".join(P.elements[a] for P, a in zip(factors, t)) or "unit" for t in tuples)
    X = FinPoset(names, up)
    projs = tuple(MonotoneMap._raw(X, P, [t[k] for t in tuples]) for k, P in enumerate(factors))
    return ProductResult(X, projs)


def pairing(maps: Sequence[MonotoneMap], prod: ProductResult) -> MonotoneMap:
    """The map ``<f_1, ..., f_n>`` into a product."""
    dom = maps[0].dom
    index = {}
    for k, x in enumerate(prod.object.elements):
        index[tuple(p.idx[k] for p in prod.projections)] = k
    return MonotoneMap._raw(dom, prod.object, [index[tuple(f.idx[i] for f in maps)] for i in range(len(dom))])


def _sum(parts: Sequence[FinPoset], names: Sequence[str]) -> tuple[FinPoset, list[int]]:
    offsets, up, off = [], [], 0
    for P in parts:
        offsets.append(off)
        for m in P.up:
            up.append(sum(1 << (off + j) for j in iter_bits(m)))
        off += len(P)
    return FinPoset(names, up), offsets


def coproduct(summands: Sequence[FinPoset]) -> CoproductResult:
    summands = list(summands)
    names = unique_names(x for P in summands for x in P.elements)
    S, offsets = _sum(summands, names)
    inj = tuple(MonotoneMap._raw(P, S, [o + i for i in range(len(P))]) for P, o in zip(summands, offsets))
    return CoproductResult(S, inj)


def coinserter(u: MonotoneMap, v: MonotoneMap) -> QuotientResult:
    """Couniversal ``c`` with ``c∘u <= c∘v``."""
    _parallel(u, v)
    return _quotient_idx(u.cod, zip(u.idx, v.idx))


def _glue(base: FinPoset, other: FinPoset, pairs, both_ways: bool, kind: str) -> ColimitSquare:
    names = unique_names(other.elements, base.elements)
    S, (_, off) = _sum([base, other], list(base.elements) + names)
    forced = []
    for a, b in pairs:
        forced.append((a, off + b))
        if both_ways:
            forced.append((off + b, a))
    prio = {x: 1 for x in names}
    q = _quotient_idx(S, forced, prio)
    proj = q.projection.idx
    left = MonotoneMap._raw(base, q.quotient, proj[:off])
    right = MonotoneMap._raw(other, q.quotient, proj[off:])
    return ColimitSquare(q.quotient, left, right, kind)


def pushout(f: MonotoneMap, h: MonotoneMap) -> ColimitSquare:
    """Pushout of the span ``cod(f) <-f- A -h-> cod(h)``.

    ``left_leg: cod(f) -> apex`` and ``right_leg: cod(h) -> apex`` with
    ``left_leg∘f == right_leg∘h``.  Elements of ``cod(f)`` keep their names.
    """
    if f.dom != h.dom:
        raise DomainMismatch("pushout needs a span with a common domain")
    return _glue(f.cod, h.cod, zip(f.idx, h.idx), True, "pushout")


def cocomma(p: MonotoneMap, q: MonotoneMap) -> ColimitSquare:
    """Couniversal square with ``left_leg∘p <= right_leg∘q``."""
    if p.dom != q.dom:
        raise DomainMismatch("cocomma needs a span with a common domain")
    return _glue(p.cod, q.cod, zip(p.idx, q.idx), False, "cocomma")


def wide_pushout(base: FinPoset, legs: Sequence[ColimitSquare], prefix: str = "l") -> WidePushoutResult:
    """Colimit of the maps ``leg.left_leg: base -> leg.apex`` computed as one quotient.

    Base elements keep their names; an element of the ``k``-th apex that is
    not identified with a base element is renamed ``{prefix}{k}_{name}``.
    """
    for sq in legs:
        if sq.left_leg.dom != base:
            raise BaseMismatch("every leg must start at the shared base")
    parts = [base] + [sq.apex for sq in legs]
    raw = [f"{prefix}{k}_{x}" for k, sq in enumerate(legs) for x in sq.apex.elements]
    names = list(base.elements) + unique_names(raw, base.elements)
    S, offsets = _sum(parts, names)
    forced = []
    for sq, off in zip(legs, offsets[1:]):
        for b, c in enumerate(sq.left_leg.idx):
            forced.append((b, off + c))
            forced.append((off + c, b))
    prio = {x: 1 for x in names[len(base):]}
    q = _quotient_idx(S, forced, prio)
    proj = q.projection.idx
    base_leg = MonotoneMap._raw(base, q.quotient, proj[: len(base)])
    cocone = tuple(
        MonotoneMap._raw(sq.apex, q.quotient, proj[off : off + len(sq.apex)]) for sq, off in zip(legs, offsets[1:])
    )
    return WidePushoutResult(q.quotient, base_leg, cocone)
