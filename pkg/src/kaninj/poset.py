"""Finite posets, monotone maps and the hom-order of Pos.

Orders are stored transitively closed as bitmasks: ``up[i]`` has bit ``j``
set iff ``elements[i] <= elements[j]``.  Everything is immutable once built.
"""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    CycleDetected,
    DomainMismatch,
    DuplicateElement,
    NotMonotone,
    NotParallel,
    UnknownElement,
)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _close(up: list[int]) -> list[int]:
    """Reflexive-transitive closure of a relation given as up-masks."""
    n = len(up)
    up = [m | (1 << i) for i, m in enumerate(up)]
    for k in range(n):
        bit = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= uk
    return up


class FinPoset:
    """A finite partial order on string identifiers.

    Element order (the ``elements`` tuple) is part of a poset's identity:
    two posets are equal iff they list the same elements in the same order
    and relate them identically.
    """

    __slots__ = ("elements", "index", "up", "down", "_hash", "_linext", "_lower_covers")

    def __init__(self, elements: Sequence[str], up: Sequence[int]):
        # trusted constructor: ``up`` must already be a closed partial order
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.up = tuple(up)
        down = [0] * len(self.elements)
        for i, m in enumerate(self.up):
            for j in iter_bits(m):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._hash = None
        self._linext = None
        self._lower_covers = None

    # construction helpers -------------------------------------------------

    @classmethod
    def from_pairs(cls, elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "FinPoset":
        return validate_poset(elements, pairs)

    @classmethod
    def chain(cls, names: Sequence[str]) -> "FinPoset":
        return validate_poset(names, zip(names, names[1:]))

    @classmethod
    def antichain(cls, names: Sequence[str]) -> "FinPoset":
        return validate_poset(names, [])

    @classmethod
    def point(cls, name: str = "x") -> "FinPoset":
        return cls([name], [1])

    @classmethod
    def empty(cls) -> "FinPoset":
        return cls([], [])

    # queries ----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self.elements == other.elements and self.up == other.up

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.elements, self.up))
        return self._hash

    def __repr__(self) -> str:
        rel = " ".join(f"{a}<{b}" for a, b in self.covers())
        return f"FinPoset({' '.join(self.elements)} ; {rel})"

    def idx(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not an element") from None

    def leq(self, x: str, y: str) -> bool:
        return bool(self.up[self.idx(x)] >> self.idx(y) & 1)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def relation(self) -> set[tuple[str, str]]:
        """All pairs ``(x, y)`` with ``x <= y``."""
        return {(x, self.elements[j]) for x, m in zip(self.elements, self.up) for j in iter_bits(m)}

    def covers(self) -> list[tuple[str, str]]:
        out = []
        for i, lows in enumerate(self.lower_covers()):
            for j in lows:
                out.append((self.elements[j], self.elements[i]))
        out.sort(key=lambda p: (self.index[p[0]], self.index[p[1]]))
        return out

    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        if self._lower_covers is None:
            res = []
            for i in range(len(self)):
                strict = self.down[i] & ~(1 << i)
                covs = []
                for j in iter_bits(strict):
                    # j is covered by i unless something sits strictly between
                    between = strict & self.up[j] & ~(1 << j)
                    if not between:
                        covs.append(j)
                res.append(tuple(covs))
            self._lower_covers = tuple(res)
        return self._lower_covers

    def linear_extension(self) -> tuple[int, ...]:
        """Stable topological sort, ties broken by identifier."""
        if self._linext is None:
            n = len(self)
            indeg = [bin(self.down[i]).count("1") - 1 for i in range(n)]
            heap = [(self.elements[i], i) for i in range(n) if indeg[i] == 0]
            heapq.heapify(heap)
            order = []
            while heap:
                _, i = heapq.heappop(heap)
                order.append(i)
                for j in iter_bits(self.up[i] & ~(1 << i)):
                    indeg[j] -= 1
                    if indeg[j] == 0:
                        heapq.heappush(heap, (self.elements[j], j))
            self._linext = tuple(order)
        return self._linext

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for x in names:
            m |= 1 << self.idx(x)
        return m

    def names(self, mask: int) -> list[str]:
        return [self.elements[i] for i in iter_bits(mask)]

    def upper_bounds(self, mask: int) -> int:
        full = (1 << len(self)) - 1
        for i in iter_bits(mask):
            full &= self.up[i]
        return full

    def lower_bounds(self, mask: int) -> int:
        full = (1 << len(self)) - 1
        for i in iter_bits(mask):
            full &= self.down[i]
        return full

    def least(self, mask: int) -> int | None:
        """Index of the least element of the subset ``mask``, if any."""
        for i in iter_bits(mask):
            if mask & ~self.up[i] == 0:
                return i
        return None

    def greatest(self, mask: int) -> int | None:
        for i in iter_bits(mask):
            if mask & ~self.down[i] == 0:
                return i
        return None

    def join_idx(self, mask: int) -> int | None:
        return self.least(self.upper_bounds(mask))

    def meet_idx(self, mask: int) -> int | None:
        return self.greatest(self.lower_bounds(mask))

    def join(self, names: Iterable[str]) -> str | None:
        j = self.join_idx(self.mask(names))
        return None if j is None else self.elements[j]

    def meet(self, names: Iterable[str]) -> str | None:
        j = self.meet_idx(self.mask(names))
        return None if j is None else self.elements[j]

    def is_discrete(self) -> bool:
        return all(m == 1 << i for i, m in enumerate(self.up))

    def has_binary_joins(self) -> bool:
        n = len(self)
        return all(
            self.join_idx((1 << i) | (1 << j)) is not None for i in range(n) for j in range(i + 1, n)
        )

    def is_complete_lattice(self) -> bool:
        # finite: a bottom plus binary joins gives every join
        return len(self) > 0 and self.join_idx(0) is not None and self.has_binary_joins()

    def is_downset(self, mask: int) -> bool:
        return all(self.down[i] & ~mask == 0 for i in iter_bits(mask))

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def subposet(self, names: Iterable[str]) -> "FinPoset":
        keep = [i for i in range(len(self)) if self.elements[i] in set(names)]
        return self._induced(keep)

    def _induced(self, keep: Sequence[int]) -> "FinPoset":
        pos = {i: k for k, i in enumerate(keep)}
        up = []
        for i in keep:
            m = 0
            for j in iter_bits(self.up[i]):
                if j in pos:
                    m |= 1 << pos[j]
            up.append(m)
        return FinPoset([self.elements[i] for i in keep], up)

    def renamed(self, names: Sequence[str]) -> "FinPoset":
        if len(set(names)) != len(names) or len(names) != len(self):
            raise DuplicateElement("renaming must be a bijection")
        return FinPoset(names, self.up)


def validate_poset(elements: Iterable[str], cover_pairs: Iterable[tuple[str, str]]) -> FinPoset:
    """Build a poset from generating pairs ``x < y``, closing reflexively and transitively."""
    elements = list(elements)
    index: dict[str, int] = {}
    for x in elements:
        if not isinstance(x, str):
            raise TypeError(f"element identifiers must be strings, got {x!r}")
        if x in index:
            raise DuplicateElement(f"duplicate element {x!r}")
        index[x] = len(index)
    up = [0] * len(elements)
    for a, b in cover_pairs:
        try:
            up[index[a]] |= 1 << index[b]
        except KeyError as exc:
            raise UnknownElement(f"relation mentions unknown element {exc.args[0]!r}") from None
    up = _close(up)
    for i, m in enumerate(up):
        for j in iter_bits(m):
            if j != i and up[j] >> i & 1:
                raise CycleDetected(f"{elements[i]} <= {elements[j]} <= {elements[i]}")
    return FinPoset(elements, up)


class MonotoneMap:
    """A monotone function ``dom -> cod``, stored as a tuple of codomain indices."""

    __slots__ = ("dom", "cod", "idx", "_hash")

    def __init__(self, dom: FinPoset, cod: FinPoset, assignment, check: bool = True):
        if isinstance(assignment, Mapping):
            missing = [x for x in dom.elements if x not in assignment]
            if missing:
                raise UnknownElement(f"assignment is not total: missing {missing}")
            extra = [x for x in assignment if x not in dom.index]
            if extra:
                raise UnknownElement(f"assignment mentions unknown elements {extra}")
            idx = tuple(cod.idx(assignment[x]) for x in dom.elements)
        else:
            assignment = list(assignment)
            if len(assignment) != len(dom):
                raise UnknownElement("assignment length does not match the domain")
            idx = tuple(cod.idx(y) for y in assignment)
        self.dom, self.cod, self.idx = dom, cod, idx
        self._hash = None
        if check:
            self._check()

    @classmethod
    def _raw(cls, dom: FinPoset, cod: FinPoset, idx: Sequence[int], check: bool = False) -> "MonotoneMap":
        m = cls.__new__(cls)
        m.dom, m.cod, m.idx, m._hash = dom, cod, tuple(idx), None
        if check:
            m._check()
        return m

    @classmethod
    def identity(cls, P: FinPoset) -> "MonotoneMap":
        return cls._raw(P, P, range(len(P)))

    @classmethod
    def constant(cls, dom: FinPoset, cod: FinPoset, value: str) -> "MonotoneMap":
        return cls._raw(dom, cod, [cod.idx(value)] * len(dom))

    def _check(self) -> None:
        cod_up = self.cod.up
        for i, m in enumerate(self.dom.up):
            fi = self.idx[i]
            for j in iter_bits(m):
                if not cod_up[fi] >> self.idx[j] & 1:
                    d = self.dom.elements
                    raise NotMonotone(
                        f"{d[i]} <= {d[j]} but {self.cod.elements[fi]} is not below "
                        f"{self.cod.elements[self.idx[j]]}"
                    )

    def __call__(self, x: str) -> str:
        return self.cod.elements[self.idx[self.dom.idx(x)]]

    @property
    def mapping(self) -> dict[str, str]:
        c = self.cod.elements
        return {x: c[j] for x, j in zip(self.dom.elements, self.idx)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.idx == other.idx and self.dom == other.dom and self.cod == other.cod

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.idx, self.dom, self.cod))
        return self._hash

    def __repr__(self) -> str:
        body = " ".join(f"{x}->{y}" for x, y in self.mapping.items())
        return f"MonotoneMap({body})"

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ other``."""
        if other.cod != self.dom:
            raise DomainMismatch("maps are not composable")
        return MonotoneMap._raw(other.dom, self.cod, [self.idx[j] for j in other.idx])

    def leq(self, other: "MonotoneMap") -> bool:
        _require_parallel(self, other)
        up = self.cod.up
        return all(up[a] >> b & 1 for a, b in zip(self.idx, other.idx))

    def image_mask(self) -> int:
        m = 0
        for j in self.idx:
            m |= 1 << j
        return m

    def is_injective(self) -> bool:
        return len(set(self.idx)) == len(self.idx)

    def is_surjective(self) -> bool:
        return self.image_mask() == (1 << len(self.cod)) - 1

    def is_embedding(self) -> bool:
        """Order-reflecting (hence injective): ``f(x) <= f(y)`` implies ``x <= y``."""
        up = self.cod.up
        dup = self.dom.up
        n = len(self.dom)
        return all(
            (up[self.idx[i]] >> self.idx[j] & 1) <= (dup[i] >> j & 1) for i in range(n) for j in range(n)
        )

    def is_iso(self) -> bool:
        return len(self.dom) == len(self.cod) and self.is_surjective() and self.is_embedding()

    def inverse(self) -> "MonotoneMap":
        if not self.is_iso():
            raise NotMonotone("map is not an isomorphism")
        inv = [0] * len(self.idx)
        for i, j in enumerate(self.idx):
            inv[j] = i
        return MonotoneMap._raw(self.cod, self.dom, inv)


def compose(*maps: MonotoneMap) -> MonotoneMap:
    """Right-to-left composite: ``compose(g, f) == g ∘ f``."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m.compose(out)
    return out


def _require_parallel(f: MonotoneMap, g: MonotoneMap) -> None:
    if f.dom != g.dom or f.cod != g.cod:
        raise NotParallel("maps must share domain and codomain")


# enumeration ---------------------------------------------------------------


def monotone_tuples(A: FinPoset, X: FinPoset, allowed: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield index tuples of all monotone maps ``A -> X``.

    ``allowed[a]`` optionally restricts the image of ``a`` to a bitmask.
    Order: lexicographic along ``A.linear_extension()``, codomain candidates
    in ``X`` index order.
    """
    n = len(A)
    full = (1 << len(X)) - 1
    if n == 0:
        yield ()
        return
    if not full:
        return
    order = A.linear_extension()
    lows = A.lower_covers()
    xup = X.up
    g = [0] * n
    base = [full] * n if allowed is None else [m & full for m in allowed]

    def rec(k):
        a = order[k]
        mask = base[a]
        for b in lows[a]:
            mask &= xup[g[b]]
        last = k == n - 1
        while mask:
            low = mask & -mask
            g[a] = low.bit_length() - 1
            mask ^= low
            if last:
                yield tuple(g)
            else:
                yield from rec(k + 1)

    yield from rec(0)


def enumerate_monotone_maps(A: FinPoset, X: FinPoset, allowed: Sequence[int] | None = None) -> Iterator[MonotoneMap]:
    for t in monotone_tuples(A, X, allowed):
        yield MonotoneMap._raw(A, X, t)


class Comparison(enum.Enum):
    EQUAL = "equal"
    LEQ = "f<=g"
    GEQ = "g<=f"
    INCOMPARABLE = "incomparable"


def compare_maps(f: MonotoneMap, g: MonotoneMap) -> Comparison:
    _require_parallel(f, g)
    le, ge = f.leq(g), g.leq(f)
    if le and ge:
        return Comparison.EQUAL
    if le:
        return Comparison.LEQ
    if ge:
        return Comparison.GEQ
    return Comparison.INCOMPARABLE


# classification -------------------------------------------------------------


@dataclass(frozen=True)
class MorphismFlags:
    mono: bool
    epi: bool
    order_mono: bool
    order_epi: bool
    surjective: bool
    embedding: bool


_PROBES = (FinPoset.point("p"), FinPoset.chain(["p0", "p1"]))


def classify_morphism(f: MonotoneMap) -> MorphismFlags:
    """Classify ``f`` by the categorical definitions, tested against probe objects.

    ``mono``/``order_mono`` quantify over pairs ``u, v: Z -> dom`` and ``epi``/
    ``order_epi`` over pairs ``u, v: cod -> Z`` with ``Z`` the point and the
    2-chain; in Pos these probes detect every failure.  ``surjective`` and
    ``embedding`` are computed directly from the assignment.
    """
    mono = order_mono = True
    for Z in _PROBES:
        maps = list(enumerate_monotone_maps(Z, f.dom))
        for u in maps:
            fu = f.compose(u)
            for v in maps:
                fv = f.compose(v)
                if fu == fv and u != v:
                    mono = False
                if fu.leq(fv) and not u.leq(v):
                    order_mono = False
    epi = order_epi = True
    for Z in _PROBES:
        maps = list(enumerate_monotone_maps(f.cod, Z))
        for u in maps:
            uf = u.compose(f)
            for v in maps:
                vf = v.compose(f)
                if uf == vf and u != v:
                    epi = False
                if uf.leq(vf) and not u.leq(v):
                    order_epi = False
    return MorphismFlags(
        mono=mono,
        epi=epi,
        order_mono=order_mono,
        order_epi=order_epi,
        surjective=f.is_surjective(),
        embedding=f.is_embedding(),
    )


def dualize(x):
    """Reverse the order of a poset, or of both ends of a map."""
    if isinstance(x, FinPoset):
        return FinPoset(x.elements, x.down)
    if isinstance(x, MonotoneMap):
        return MonotoneMap._raw(dualize(x.dom), dualize(x.cod), x.idx)
    raise TypeError(f"cannot dualize {type(x).__name__}")


# quotients --------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientResult:
    quotient: FinPoset
    projection: MonotoneMap
    classes: dict  # class name -> tuple of member names

    def __iter__(self):
        yield self.quotient
        yield self.projection


def quotient_by_relations(X: FinPoset, forced: Iterable[tuple[str, str]], priority: Mapping[str, int] | None = None) -> QuotientResult:
    """Least poset quotient of ``X`` in which every forced pair ``(a, b)`` has ``[a] <= [b]``.

    Order-cycles created by the forcing collapse to single elements.  A class
    is named by its least member under ``(priority, name)``; ``priority``
    defaults to 0 for every element.
    """
    pairs = [(X.idx(a), X.idx(b)) for a, b in forced]
    return _quotient_idx(X, pairs, priority)


def _quotient_idx(X: FinPoset, pairs: Iterable[tuple[int, int]], priority: Mapping[str, int] | None = None) -> QuotientResult:
    n = len(X)
    up = list(X.up)
    changed = False
    for a, b in pairs:
        if not up[a] >> b & 1:
            up[a] |= 1 << b
            changed = True
    if changed:
        up = _close(up)
    cls = [-1] * n
    reps: list[int] = []
    members: list[list[int]] = []
    for i in range(n):
        if cls[i] >= 0:
            continue
        c = len(reps)
        same = [j for j in iter_bits(up[i]) if up[j] >> i & 1]
        for j in same:
            cls[j] = c
        reps.append(i)
        members.append(same)
    prio = priority or {}
    names = []
    for mem in members:
        names.append(min((X.elements[j] for j in mem), key=lambda s: (prio.get(s, 0), s)))
    qup = []
    for i in reps:
        m = 0
        for j in iter_bits(up[i]):
            m |= 1 << cls[j]
        qup.append(m)
    Q = FinPoset(names, qup)
    proj = MonotoneMap._raw(X, Q, cls)
    classes = {names[c]: tuple(X.elements[j] for j in mem) for c, mem in enumerate(members)}
    return QuotientResult(Q, proj, classes)


# hom-posets -------------------------------------------------------------------


def cotensor(P: FinPoset, X: FinPoset) -> tuple[FinPoset, tuple[MonotoneMap, ...]]:
    """The poset of monotone maps ``P -> X`` (pointwise order) with the maps themselves.

    Element ``m{k}`` is the ``k``-th map in canonical enumeration order.
    """
    maps = tuple(enumerate_monotone_maps(P, X))
    up = []
    for f in maps:
        m = 0
        for k, g in enumerate(maps):
            if f.leq(g):
                m |= 1 << k
        up.append(m)
    return FinPoset([f"m{k}" for k in range(len(maps))], up), maps


def hom_poset(P: FinPoset, X: FinPoset) -> FinPoset:
    return cotensor(P, X)[0]


def downsets(P: FinPoset) -> list[int]:
    """Bitmasks of all downsets of ``P`` (including the empty one), by size then mask."""
    order = P.linear_extension()
    out = []

    def rec(k, acc):
        if k == len(order):
            out.append(acc)
            return
        i = order[k]
        rec(k + 1, acc)
        strict = P.down[i] & ~(1 << i)
        if strict & ~acc == 0:
            rec(k + 1, acc | 1 << i)

    rec(0, 0)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def unique_names(candidates: Iterable[str], taken: Iterable[str] = ()) -> list[str]:
    """Make ``candidates`` pairwise distinct and disjoint from ``taken`` by suffixing."""
    used = set(taken)
    out = []
    for c in candidates:
        name, k = c, 1
        while name in used:
            name = f"{c}_{k}"
            k += 1
        used.add(name)
        out.append(name)
    return out
