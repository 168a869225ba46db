"""The Kan-injective reflection chain, run to detected convergence.

Stages alternate: an even stage ``X_i`` is extended by a wide pushout that
freely adds an approximant ``f//h`` for every span ``(h, f: dom h -> X_i)``;
the following odd stage is quotiented so that every approximant sits below
each competitor ``g`` with ``x∘f <= g∘h``.  The chain has converged at an
even ``k`` once ``X_k -> X_{k+2}`` is an isomorphism.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .constructions import cocomma, pushout, wide_pushout
from .errors import (
    BudgetExceeded,
    InvariantViolation,
    NotConverged,
    NotMonotone,
    ReflectionError,
    StageTooLarge,
    TargetNotInjective,
)
from .kan import InjectivityReport, extension_bounds, least_extension, membership
from .poset import FinPoset, MonotoneMap, _quotient_idx, enumerate_monotone_maps, monotone_tuples

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 32
DEFAULT_MAX_STAGE_SIZE = 64
MODES = ("strong", "weak")


@dataclass(frozen=True)
class RegistryEntry:
    h_index: int
    f: MonotoneMap  # dom(h) -> X_stage
    stage: int  # even
    approximant: MonotoneMap  # cod(h) -> X_{stage+1}


class ReflectionTrace:
    """Stages ``X_0, X_1, ...``, their connecting maps and the approximant registry."""

    def __init__(self, X: FinPoset, H: Sequence[MonotoneMap], budget: int = DEFAULT_BUDGET,
                 mode: str = "strong", max_stage_size: int = DEFAULT_MAX_STAGE_SIZE):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.H = tuple(H)
        self.budget = budget
        self.mode = mode
        self.max_stage_size = max_stage_size
        self.stages: list[FinPoset] = [X]
        self.steps: list[MonotoneMap] = []  # steps[i] = x_{i,i+1}
        self.registry: list[RegistryEntry] = []
        self.converged_at: int | None = None
        self._lookup: dict = {}
        self._conn: dict = {}

    @property
    def top(self) -> int:
        return len(self.stages) - 1

    def connecting(self, i: int, j: int) -> MonotoneMap:
        """``x_{ij}: X_i -> X_j`` for ``i <= j``."""
        if not 0 <= i <= j <= self.top:
            raise IndexError(f"no connecting map {i} -> {j}")
        if i == j:
            return MonotoneMap.identity(self.stages[i])
        key = (i, j)
        if key not in self._conn:
            self._conn[key] = self.steps[j - 1].compose(self.connecting(i, j - 1))
        return self._conn[key]

    def entry(self, h_index: int, stage: int, f: MonotoneMap) -> RegistryEntry:
        return self._lookup[(h_index, stage, f.idx)]

    def _add_entry(self, e: RegistryEntry) -> None:
        self.registry.append(e)
        self._lookup[(e.h_index, e.stage, e.f.idx)] = e

    def h_index(self, h) -> int:
        if isinstance(h, int):
            return h
        for k, g in enumerate(self.H):
            if g == h:
                return k
        raise ValueError("morphism is not a member of H")

    @property
    def reflection(self) -> FinPoset:
        return self.stages[self._k()]

    @property
    def unit(self) -> MonotoneMap:
        return self.connecting(0, self._k())

    def _k(self) -> int:
        if self.converged_at is None:
            raise NotConverged("the reflection chain has not converged")
        return self.converged_at

    def stage_sizes(self) -> list[int]:
        return [len(X) for X in self.stages]

    def __repr__(self) -> str:
        return (f"ReflectionTrace(mode={self.mode}, sizes={self.stage_sizes()}, "
                f"converged_at={self.converged_at})")


def _spans(trace: ReflectionTrace, X: FinPoset):
    for k, h in enumerate(trace.H):
        for f in enumerate_monotone_maps(h.dom, X):
            yield k, h, f


def even_step(trace: ReflectionTrace, H: Sequence[MonotoneMap] | None = None) -> ReflectionTrace:
    """Build ``X_{i+1}`` as the wide pushout of one pushout (or cocomma) per span."""
    if H is not None and tuple(H) != trace.H:
        raise ValueError("H differs from the one the trace was started with")
    i = trace.top
    if i % 2:
        raise ReflectionError(f"even_step called at odd stage {i}")
    if i + 1 > trace.budget:
        raise BudgetExceeded(f"stage {i + 1} exceeds the budget of {trace.budget}", trace)
    X = trace.stages[i]
    glue = cocomma if trace.mode == "weak" else pushout
    spans, squares = [], []
    for k, h, f in _spans(trace, X):
        spans.append((k, h, f))
        squares.append(glue(f, h))
    wp = wide_pushout(X, squares, prefix=f"s{i + 1}l")
    if len(wp.apex) > trace.max_stage_size:
        raise StageTooLarge(
            f"stage {i + 1} has {len(wp.apex)} elements (limit {trace.max_stage_size})", trace)
    trace.stages.append(wp.apex)
    trace.steps.append(wp.base_leg)
    for (k, h, f), sq, leg in zip(spans, squares, wp.cocone_legs):
        approx = leg.compose(sq.right_leg)
        lhs, rhs = approx.compose(h), wp.base_leg.compose(f)
        ok = rhs.leq(lhs) if trace.mode == "weak" else lhs == rhs
        if not ok:
            raise InvariantViolation(f"approximant square fails for span {k}, {f}")
        trace._add_entry(RegistryEntry(k, f, i, approx))
    log.debug("stage %d: %d elements from %d spans", i + 1, len(wp.apex), len(spans))
    return trace


def odd_step(trace: ReflectionTrace, H: Sequence[MonotoneMap] | None = None, literal: bool = False) -> ReflectionTrace:
    """Build ``X_{i+2}``: force ``x(f//h) <= g`` for every live entry and every admissible ``g``.

    Entries whose pushed-forward span ``(h, x∘f)`` coincides share one set of
    admissible ``g``.  By default only the minimal values reachable by an
    admissible ``g`` at each point are forced, which yields the same quotient
    as ``literal=True`` (every pair from every ``g``).
    """
    if H is not None and tuple(H) != trace.H:
        raise ValueError("H differs from the one the trace was started with")
    top = trace.top
    if top % 2 == 0:
        raise ReflectionError(f"odd_step called at even stage {top}")
    if top + 1 > trace.budget:
        raise BudgetExceeded(f"stage {top + 1} exceeds the budget of {trace.budget}", trace)
    i = top - 1
    X = trace.stages[top]
    groups: dict = {}
    for e in trace.registry:
        xf = trace.connecting(e.stage, top).compose(e.f)
        approx = trace.connecting(e.stage + 1, top).compose(e.approximant).idx
        groups.setdefault((e.h_index, xf.idx), (xf, set()))[1].add(approx)
    pairs: set[tuple[int, int]] = set()
    for (k, _), (xf, approxes) in groups.items():
        h = trace.H[k]
        allowed = extension_bounds(h, xf)
        if literal:
            for g in monotone_tuples(h.cod, X, allowed):
                for approx in approxes:
                    pairs.update(zip(approx, g))
            continue
        for b, ys in enumerate(_minimal_values(h.cod, X, allowed)):
            for approx in approxes:
                pairs.update((approx[b], y) for y in ys)
    # a class keeps an original name when it has one
    base = trace.stages[0]
    q = _quotient_idx(X, sorted(pairs), {x: 1 for x in X.elements if x not in base})
    trace.stages.append(q.quotient)
    trace.steps.append(q.projection)
    _check_merge(trace, i)
    log.debug("stage %d: %d elements from %d forced pairs", top + 1, len(q.quotient), len(pairs))
    return trace


def _minimal_values(A: FinPoset, X: FinPoset, allowed: list[int]) -> list[list[int]]:
    """Per element ``b`` of ``A``, the minimal ``g(b)`` over monotone ``g`` within ``allowed``."""
    out = []
    for b in range(len(A)):
        found: list[int] = []
        covered = 0
        for y in X.linear_extension():
            if not allowed[b] >> y & 1 or covered >> y & 1:
                continue
            pinned = list(allowed)
            pinned[b] = 1 << y
            if next(monotone_tuples(A, X, pinned), None) is not None:
                found.append(y)
                covered |= X.up[y]
        out.append(found)
    return out


def _check_merge(trace: ReflectionTrace, i: int) -> None:
    # x_{i+1,i+2} must merge (x_{ji} f)//h with x_{j+1,i+1}∘(f//h)
    step = trace.steps[i + 1]
    for e in trace.registry:
        if e.stage >= i:
            continue
        moved = trace.connecting(e.stage, i).compose(e.f)
        later = trace.entry(e.h_index, i, moved)
        a = step.compose(later.approximant)
        b = step.compose(trace.connecting(e.stage + 1, i + 1).compose(e.approximant))
        if a != b:
            raise InvariantViolation(f"stage {i + 2} does not merge approximants of entry {e}")


def run_reflection(X: FinPoset, H: Sequence[MonotoneMap], budget: int = DEFAULT_BUDGET,
                   mode: str = "strong", max_stage_size: int = DEFAULT_MAX_STAGE_SIZE) -> ReflectionTrace:
    """Alternate even and odd steps until some ``x_{k,k+2}`` is invertible.

    ``budget`` is the largest stage index that may be built; exhausting it
    raises :class:`BudgetExceeded` carrying the partial trace.
    """
    if budget < 2 or budget % 2:
        raise ValueError("budget must be an even number >= 2")
    trace = ReflectionTrace(X, H, budget, mode, max_stage_size)
    k = 0
    while True:
        if k + 2 > budget:
            raise BudgetExceeded(f"no convergence within {budget} stages (sizes {trace.stage_sizes()})", trace)
        even_step(trace)
        odd_step(trace)
        if trace.connecting(k, k + 2).is_iso():
            trace.converged_at = k
            log.info("converged at stage %d; sizes %s", k, trace.stage_sizes())
            return trace
        k += 2


def extract_lan(trace: ReflectionTrace, h, f: MonotoneMap) -> MonotoneMap:
    """Kan extension of ``f: dom(h) -> X_k`` read off the converged chain."""
    k = trace._k()
    e = trace.entry(trace.h_index(h), k, f)
    back = trace.connecting(k, k + 2).inverse()
    return back.compose(trace.connecting(k + 1, k + 2).compose(e.approximant))


def _assemble(dom: FinPoset, cod: FinPoset, assignments, what: str) -> MonotoneMap:
    values = [None] * len(dom)
    for y, v in assignments:
        if values[y] is None:
            values[y] = v
        elif values[y] != v:
            raise InvariantViolation(f"{what}: conflicting values at {dom.elements[y]}")
    if any(v is None for v in values):
        raise InvariantViolation(f"{what}: cocone does not cover the stage")
    try:
        return MonotoneMap._raw(dom, cod, values, check=True)
    except NotMonotone as exc:
        raise InvariantViolation(f"{what}: {exc}") from None


def induce_morphism(trace: ReflectionTrace, p: MonotoneMap, report: InjectivityReport | None = None) -> MonotoneMap:
    """Extend ``p: X_0 -> P`` along the chain to ``p_k: X_k -> P``."""
    k = trace._k()
    if p.dom != trace.stages[0]:
        raise ValueError("p must start at the first stage")
    P = p.cod
    weak = trace.mode == "weak"
    if report is None or report.subject != P:
        report = membership(P, trace.H, "weak-left" if weak else "left")
    if not report.member:
        raise TargetNotInjective("the target is not Kan-injective for H")
    current = p
    for i in range(k):
        nxt = trace.stages[i + 1]
        step = trace.steps[i]
        assignments = [(step.idx[x], current.idx[x]) for x in range(len(trace.stages[i]))]
        if i % 2 == 0:
            for e in trace.registry:
                if e.stage != i:
                    continue
                v = least_extension(trace.H[e.h_index], current.compose(e.f))
                if not v.exists:
                    raise TargetNotInjective(f"no Kan extension in the target for {e.f}")
                assignments.extend(zip(e.approximant.idx, v.extension.idx))
        current = _assemble(nxt, P, assignments, f"cocone component {i + 1}")
    if current.compose(trace.connecting(0, k)) != p:
        raise InvariantViolation("induced morphism does not factor p")
    return current
