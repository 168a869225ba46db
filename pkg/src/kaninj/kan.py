"""Kan extensions in Pos and Kan-injectivity of objects and morphisms.

Extensions are found by exhaustive search over monotone maps; the closed
join formula in :func:`pointwise_join_extension` is kept separate so the two
can be played against each other.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

from .errors import DomainMismatch
from .poset import (
    FinPoset,
    MonotoneMap,
    dualize,
    enumerate_monotone_maps,
    iter_bits,
    monotone_tuples,
)

LEAST = "least"
NO_EXTENSION = "no_extension"
NO_LEAST = "no_least"


@dataclass(frozen=True)
class ExtensionVerdict:
    exists: bool
    extension: MonotoneMap | None
    strict: bool
    outcome: str

    def __bool__(self) -> bool:
        return self.exists


@dataclass(frozen=True)
class Verdict:
    """Boolean answer plus the first witness of failure, if any."""

    ok: bool
    counterexample: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_span(h: MonotoneMap, f: MonotoneMap) -> None:
    if h.dom != f.dom:
        raise DomainMismatch("h and f must share their domain")


def extension_bounds(h: MonotoneMap, f: MonotoneMap) -> list[int]:
    """For each ``b`` in ``cod(h)``, the mask of values ``g(b)`` compatible with ``f <= g∘h``."""
    X = f.cod
    full = (1 << len(X)) - 1
    allowed = [full] * len(h.cod)
    hup = h.cod.up
    for a in range(len(h.dom)):
        fa_up = X.up[f.idx[a]]
        for b in iter_bits(hup[h.idx[a]]):
            allowed[b] &= fa_up
    return allowed


def _pointwise_leq(up, s, t) -> bool:
    return all(up[x] >> y & 1 for x, y in zip(s, t))


@lru_cache(maxsize=1 << 17)
def least_extension(h: MonotoneMap, f: MonotoneMap) -> ExtensionVerdict:
    """Least monotone ``g: cod(h) -> cod(f)`` with ``f <= g∘h``, by brute force."""
    _check_span(h, f)
    X = f.cod
    cands = list(monotone_tuples(h.cod, X, extension_bounds(h, f)))
    if not cands:
        return ExtensionVerdict(False, None, False, NO_EXTENSION)
    up = X.up
    best = cands[0]
    for c in cands[1:]:
        if _pointwise_leq(up, c, best):
            best = c
    if not all(_pointwise_leq(up, best, c) for c in cands):
        return ExtensionVerdict(False, None, False, NO_LEAST)
    g = MonotoneMap._raw(h.cod, X, best)
    strict = all(best[h.idx[a]] == f.idx[a] for a in range(len(h.dom)))
    return ExtensionVerdict(True, g, strict, LEAST)


def greatest_extension(h: MonotoneMap, f: MonotoneMap) -> ExtensionVerdict:
    """Right Kan extension: the least extension computed in the order-dual."""
    v = least_extension(dualize(h), dualize(f))
    if not v.exists:
        return v
    return ExtensionVerdict(True, dualize(v.extension), v.strict, v.outcome)


def pointwise_join_extension(h: MonotoneMap, f: MonotoneMap) -> MonotoneMap | None:
    """``b ↦ join{ f(a) | h(a) <= b }``, or ``None`` when a required join is missing."""
    _check_span(h, f)
    X = f.cod
    hdown = h.cod.down
    out = []
    for b in range(len(h.cod)):
        below = 0
        for a in range(len(h.dom)):
            if hdown[b] >> h.idx[a] & 1:
                below |= 1 << f.idx[a]
        j = X.join_idx(below)
        if j is None:
            return None
        out.append(j)
    return MonotoneMap._raw(h.cod, X, out)


def _lan(h: MonotoneMap, f: MonotoneMap, weak: bool) -> MonotoneMap | None:
    v = least_extension(h, f)
    if not v.exists or not (weak or v.strict):
        return None
    return v.extension


def _object_failure(X: FinPoset, h: MonotoneMap, weak: bool) -> MonotoneMap | None:
    for f in enumerate_monotone_maps(h.dom, X):
        if _lan(h, f, weak) is None:
            return f
    return None


def is_left_kan_injective_object(X: FinPoset, h: MonotoneMap) -> Verdict:
    """Every ``f: dom(h) -> X`` has a least extension along ``h`` restricting back to ``f``."""
    cex = _object_failure(X, h, weak=False)
    return Verdict(cex is None, cex)


def _morphism_check(p: MonotoneMap, h: MonotoneMap, weak: bool) -> Verdict:
    for end, X in (("domain", p.dom), ("codomain", p.cod)):
        cex = _object_failure(X, h, weak)
        if cex is not None:
            return Verdict(False, cex, f"{end} is not Kan-injective")
    for f in enumerate_monotone_maps(h.dom, p.dom):
        lan = _lan(h, f, weak)
        lan_pf = _lan(h, p.compose(f), weak)
        if p.compose(lan) != lan_pf:
            return Verdict(False, f, "Kan extension not preserved")
    return Verdict(True)


def is_left_kan_injective_morphism(p: MonotoneMap, h: MonotoneMap) -> Verdict:
    return _morphism_check(p, h, weak=False)


def is_weakly_left_kan_injective(subject, h: MonotoneMap) -> Verdict:
    if isinstance(subject, MonotoneMap):
        return _morphism_check(subject, h, weak=True)
    cex = _object_failure(subject, h, weak=True)
    return Verdict(cex is None, cex)


def is_orthogonal(X: FinPoset, h: MonotoneMap) -> Verdict:
    """Every ``f: dom(h) -> X`` has exactly one ``g`` with ``g∘h == f``."""
    full = (1 << len(X)) - 1
    for f in enumerate_monotone_maps(h.dom, X):
        allowed = [full] * len(h.cod)
        for a, b in enumerate(h.idx):
            allowed[b] &= 1 << f.idx[a]
        count = 0
        for _ in monotone_tuples(h.cod, X, allowed):
            count += 1
            if count > 1:
                break
        if count != 1:
            return Verdict(False, f, "no filler" if count == 0 else "several fillers")
    return Verdict(True)


# membership in LInj / RInj / wLInj ----------------------------------------------


@dataclass(frozen=True)
class HVerdict:
    h: MonotoneMap
    object_ok: bool
    morphism_ok: bool | None
    weak_ok: bool
    counterexample: MonotoneMap | None = None
    detail: str = ""


@dataclass(frozen=True)
class InjectivityReport:
    subject: Any
    side: str
    verdicts: tuple = field(default_factory=tuple)
    member: bool = True

    def __bool__(self) -> bool:
        return self.member

    @property
    def counterexample(self):
        for v in self.verdicts:
            if v.counterexample is not None:
                return v.counterexample
        return None


SIDES = ("left", "right", "weak-left")


def _left_verdict(subject, h: MonotoneMap) -> HVerdict:
    if isinstance(subject, MonotoneMap):
        strong = is_left_kan_injective_morphism(subject, h)
        weak = is_weakly_left_kan_injective(subject, h)
        obj_ok = all(_object_failure(X, h, weak=False) is None for X in (subject.dom, subject.cod))
        return HVerdict(h, obj_ok, strong.ok, weak.ok, strong.counterexample or weak.counterexample, strong.detail)
    strong = is_left_kan_injective_object(subject, h)
    weak = strong if strong.ok else is_weakly_left_kan_injective(subject, h)
    return HVerdict(h, strong.ok, None, weak.ok, strong.counterexample)


def _holds(v: HVerdict, side: str, is_map: bool) -> bool:
    if side == "weak-left":
        return v.weak_ok
    return v.morphism_ok if is_map else v.object_ok


def membership(subject, H: Sequence[MonotoneMap], side: str = "left") -> InjectivityReport:
    """Aggregate Kan-injectivity of an object or morphism against every ``h`` in ``H``.

    ``side="right"`` is answered entirely by dualizing subject and ``H``.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    is_map = isinstance(subject, MonotoneMap)
    if side == "right":
        dual = membership(dualize(subject), [dualize(h) for h in H], "left")
        verdicts = tuple(
            HVerdict(
                h,
                v.object_ok,
                v.morphism_ok,
                v.weak_ok,
                None if v.counterexample is None else dualize(v.counterexample),
                v.detail,
            )
            for h, v in zip(H, dual.verdicts)
        )
        return InjectivityReport(subject, side, verdicts, dual.member)
    verdicts = tuple(_left_verdict(subject, h) for h in H)
    member = all(_holds(v, side, is_map) for v in verdicts)
    return InjectivityReport(subject, side, verdicts, member)
