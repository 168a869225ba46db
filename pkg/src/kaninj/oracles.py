"""Independent ground truth: small-poset catalogues, isomorphism, free
constructions and brute-force checks of universal properties."""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .kan import Verdict, is_left_kan_injective_morphism, is_weakly_left_kan_injective, membership
from .poset import FinPoset, MonotoneMap, downsets, iter_bits, monotone_tuples, unique_names
from .reflection import DEFAULT_BUDGET, DEFAULT_MAX_STAGE_SIZE, run_reflection

# catalogue of small posets ------------------------------------------------------


def _canonical_code(n: int, rel: frozenset) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        code = tuple(sorted((perm[a], perm[b]) for a, b in rel))
        if best is None or code < best:
            best = code
    return best


@lru_cache(maxsize=None)
def all_posets(n: int) -> tuple[FinPoset, ...]:
    """One representative of every isomorphism class of ``n``-element posets.

    Elements are named ``a, b, c, ...``; each representative is naturally
    labelled (``x_i < x_j`` only if ``i < j``).
    """
    names = list(string.ascii_lowercase[:n])
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = {}
    for bits in range(1 << len(pairs)):
        rel = frozenset(p for k, p in enumerate(pairs) if bits >> k & 1)
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        code = _canonical_code(n, rel)
        if code not in seen:
            seen[code] = rel
    out = []
    for rel in sorted(seen.values(), key=lambda r: (len(r), sorted(r))):
        up = [1 << i for i in range(n)]
        for a, b in rel:
            up[a] |= 1 << b
        out.append(FinPoset(names, up))
    return tuple(out)


def posets_up_to(n: int) -> list[FinPoset]:
    return [P for k in range(n + 1) for P in all_posets(k)]


# isomorphism ----------------------------------------------------------------------


def _profile(P: FinPoset, i: int) -> tuple[int, int]:
    return (bin(P.up[i]).count("1"), bin(P.down[i]).count("1"))


def find_isomorphism(P: FinPoset, Q: FinPoset) -> MonotoneMap | None:
    """An order isomorphism ``P -> Q`` by backtracking over degree profiles."""
    n = len(P)
    if n != len(Q):
        return None
    pp = [_profile(P, i) for i in range(n)]
    qp = [_profile(Q, j) for j in range(n)]
    if sorted(pp) != sorted(qp):
        return None
    order = sorted(range(n), key=lambda i: pp[i])
    img = [-1] * n
    used = 0

    def rec(k):
        nonlocal used
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used >> j & 1 or qp[j] != pp[i]:
                continue
            if all(P.leq_idx(i, a) == Q.leq_idx(j, img[a]) and P.leq_idx(a, i) == Q.leq_idx(img[a], j)
                   for a in order[:k]):
                img[i] = j
                used |= 1 << j
                if rec(k + 1):
                    return True
                used &= ~(1 << j)
        return False

    if rec(0):
        return MonotoneMap._raw(P, Q, img)
    return None


def is_isomorphic(P: FinPoset, Q: FinPoset) -> bool:
    return find_isomorphism(P, Q) is not None


def find_unit_isomorphism(unit1: MonotoneMap, unit2: MonotoneMap) -> MonotoneMap | None:
    """An isomorphism ``iso: cod(unit1) -> cod(unit2)`` with ``iso∘unit1 == unit2``."""
    P, Q = unit1.cod, unit2.cod
    if len(P) != len(Q):
        return None
    n = len(P)
    fixed = [-1] * n
    for x, y in zip(unit1.idx, unit2.idx):
        if fixed[x] not in (-1, y):
            return None
        fixed[x] = y
    allowed = [(1 << n) - 1 if v < 0 else 1 << v for v in fixed]
    for t in monotone_tuples(P, Q, allowed):
        m = MonotoneMap._raw(P, Q, t)
        if m.is_iso():
            return m
    return None


# free constructions --------------------------------------------------------------


def _downset_poset(P: FinPoset, masks: Sequence[int], prefix: str = "D") -> FinPoset:
    names = unique_names(
        "_".join([prefix] + [P.elements[i] for i in iter_bits(m)]) for m in masks
    )
    pos = {m: k for k, m in enumerate(masks)}
    up = []
    for m in masks:
        u = 0
        for m2, k in pos.items():
            if m & ~m2 == 0:
                u |= 1 << k
        up.append(u)
    return FinPoset(names, up)


def _principal_unit(P: FinPoset, masks: Sequence[int], T: FinPoset) -> MonotoneMap:
    pos = {m: k for k, m in enumerate(masks)}
    return MonotoneMap._raw(P, T, [pos[P.down[i]] for i in range(len(P))])


def free_join_semilattice(P: FinPoset) -> tuple[FinPoset, MonotoneMap]:
    """Nonempty downsets of ``P`` by inclusion, with ``x ↦ ↓x``."""
    masks = [m for m in downsets(P) if m]
    T = _downset_poset(P, masks)
    return T, _principal_unit(P, masks, T)


def downset_completion(P: FinPoset) -> tuple[FinPoset, MonotoneMap]:
    """All downsets of ``P`` (the empty one included) by inclusion, with ``x ↦ ↓x``."""
    masks = downsets(P)
    T = _downset_poset(P, masks)
    return T, _principal_unit(P, masks, T)


# reflection checking ---------------------------------------------------------------


def factorizations(unit: MonotoneMap, p: MonotoneMap):
    """All monotone ``q: cod(unit) -> cod(p)`` with ``q∘unit == p``."""
    R, P = unit.cod, p.cod
    allowed = [(1 << len(P)) - 1] * len(R)
    for x, r in enumerate(unit.idx):
        allowed[r] &= 1 << p.idx[x]
    for t in monotone_tuples(R, P, allowed):
        yield MonotoneMap._raw(R, P, t)


def verify_reflection(candidate: tuple[FinPoset, MonotoneMap], H: Sequence[MonotoneMap],
                      target_family: Iterable[FinPoset], side: str = "left") -> Verdict:
    """Check that ``unit: X -> R`` is a reflection of ``X`` into the Kan-injectives.

    ``R`` must be a member, and every ``p: X -> P`` into a target must factor
    through ``unit`` by exactly one Kan-injective morphism.  Targets must be
    members themselves.
    """
    R, unit = candidate
    weak = side == "weak-left"
    targets = list(target_family)
    for P in targets:
        if not membership(P, H, side):
            raise ValueError(f"target {P} is not Kan-injective for H")
    rep = membership(R, H, side)
    if not rep:
        return Verdict(False, rep.counterexample, "candidate object is not Kan-injective")
    check = is_weakly_left_kan_injective if weak else is_left_kan_injective_morphism
    for P in targets:
        for t in monotone_tuples(unit.dom, P):
            p = MonotoneMap._raw(unit.dom, P, t)
            good = [q for q in factorizations(unit, p) if all(check(q, h) for h in H)]
            if len(good) != 1:
                what = "no" if not good else f"{len(good)}"
                return Verdict(False, p, f"{what} Kan-injective factorization(s) of {p}")
    return Verdict(True)


def candidate_mutations(candidate: tuple[FinPoset, MonotoneMap]):
    """Single-element and single-relation mutations of ``(R, unit)`` that stay well formed.

    Yields ``(description, (R', unit'))``.  Removing an element hit by the
    unit, or a relation the unit needs, produces no well-formed candidate and
    is skipped.
    """
    R, unit = candidate
    image = unit.image_mask()
    n = len(R)
    for i in range(n):
        if image >> i & 1:
            continue
        keep = [j for j in range(n) if j != i]
        R2 = R._induced(keep)
        pos = {j: k for k, j in enumerate(keep)}
        yield f"drop element {R.elements[i]}", (R2, MonotoneMap._raw(unit.dom, R2, [pos[j] for j in unit.idx]))
    covers = R.covers()
    for a, b in covers:
        rest = [c for c in covers if c != (a, b)]
        try:
            R2 = FinPoset.from_pairs(R.elements, rest)
            u2 = MonotoneMap._raw(unit.dom, R2, unit.idx, check=True)
        except Exception:
            continue
        yield f"drop relation {a}<{b}", (R2, u2)
    for i in range(n):
        for j in range(n):
            if i == j or R.leq_idx(i, j) or R.leq_idx(j, i):
                continue
            R2 = FinPoset.from_pairs(R.elements, covers + [(R.elements[i], R.elements[j])])
            yield f"add relation {R.elements[i]}<{R.elements[j]}", (R2, MonotoneMap._raw(unit.dom, R2, unit.idx))


# weak versus strong ---------------------------------------------------------------------


@dataclass
class ProbeRow:
    subject: FinPoset
    weak_member: bool
    strong_member: bool
    defeated_by: int | None = None  # index into ProbeReport.units


@dataclass
class ProbeReport:
    units: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    unconverged: list = field(default_factory=list)
    inclusion_holds: bool = True  # weak member => strong member w.r.t. collected units; exact
    converse_holds_in_universe: bool = True  # family-relative only
    converse_scope: str = "family-relative"


def weak_equals_strong_probe(H: Sequence[MonotoneMap], universe: Iterable[FinPoset],
                             budget: int = DEFAULT_BUDGET, max_stage_size: int = DEFAULT_MAX_STAGE_SIZE,
                             skip_unconverged: bool = False) -> ProbeReport:
    """Compare weak Kan-injectivity w.r.t. ``H`` with strong Kan-injectivity
    w.r.t. the weak-reflection units of the universe.

    A subject failing to reflect within the budget raises
    :class:`BudgetExceeded` unless ``skip_unconverged`` is set, in which case
    it is listed in ``unconverged`` and contributes no unit.
    """
    universe = list(universe)
    report = ProbeReport()
    for Y in universe:
        try:
            tr = run_reflection(Y, H, budget=budget, mode="weak", max_stage_size=max_stage_size)
        except BudgetExceeded:
            if not skip_unconverged:
                raise
            report.unconverged.append(Y)
            continue
        report.units.append(tr.unit)
    for S in universe:
        weak = bool(membership(S, H, "weak-left"))
        defeated = None
        for k, u in enumerate(report.units):
            if not membership(S, [u], "left"):
                defeated = k
                break
        row = ProbeRow(S, weak, defeated is None, defeated)
        report.rows.append(row)
        if weak and not row.strong_member:
            report.inclusion_holds = False
        if row.strong_member and not weak:
            report.converse_holds_in_universe = False
    return report
