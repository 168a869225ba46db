"""
The reflection chain
====================

Starting from a poset ``X``, even steps glue on a fresh ``f⫽h`` for every
span and odd steps force each of them below every admissible extension.
Once two even stages agree the chain has reached the reflection.
"""

from kaninj import FinPoset, MonotoneMap, BudgetExceeded, induce_morphism, run_reflection
from kaninj.oracles import find_unit_isomorphism, free_join_semilattice

A = FinPoset.antichain(["a", "b"])
V = FinPoset.from_pairs(["a", "b", "t"], [("a", "t"), ("b", "t")])
H = [MonotoneMap(A, V, {"a": "a", "b": "b"})]

tr = run_reflection(A, H)
print("stage sizes:", tr.stage_sizes(), " converged at", tr.converged_at)
print(tr.reflection)

# the free join-semilattice (nonempty downsets) is an independent answer
F, u = free_join_semilattice(A)
print("same as the downset construction:", find_unit_isomorphism(tr.unit, u) is not None)

###############################################################################
# Any map into a poset with binary joins extends along the unit.

D = FinPoset.from_pairs(["bot", "x", "y", "top"],
                        [("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")])
p = MonotoneMap(A, D, {"a": "x", "b": "y"})
print(induce_morphism(tr, p))

###############################################################################
# Even a member of the class gets a new element: the reflection must be
# universal for every monotone map out of the diamond, and those need not
# keep ``x ∨ y = top``.

print(run_reflection(D, H).reflection)

###############################################################################
# Three incomparable points never settle.  Each even step rebuilds a crown of
# upper bounds above the top, and the following odd step collapses it again.

try:
    run_reflection(FinPoset.antichain(["a", "b", "c"]), H, budget=12, max_stage_size=256)
except BudgetExceeded as exc:
    print(exc)
    print("sizes:", exc.trace.stage_sizes())
