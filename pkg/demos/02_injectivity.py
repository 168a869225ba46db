"""
Which posets are Kan-injective?
===============================

Membership is decided by trying every ``f`` out of the domain of ``h``.
"""

from kaninj import FinPoset, MonotoneMap, membership
from kaninj.oracles import posets_up_to

A = FinPoset.antichain(["a", "b"])
V = FinPoset.from_pairs(["a", "b", "t"], [("a", "t"), ("b", "t")])
pair = MonotoneMap(A, V, {"a": "a", "b": "b"})
collapse = MonotoneMap.constant(A, FinPoset.point("t"), "t")

# along the pair embedding the members are the posets with binary joins
for P in posets_up_to(3):
    left = bool(membership(P, [pair]))
    print(f"{P!r:32} left: {left!s:5}  joins: {P.has_binary_joins()}")

###############################################################################
# The collapse is not an embedding.  Strictly injective posets must then be
# discrete, while the weak notion still singles out the posets with joins.

for P in posets_up_to(3):
    strong = bool(membership(P, [collapse]))
    weak = bool(membership(P, [collapse], "weak-left"))
    print(f"{P!r:32} strong: {strong!s:5}  weak: {weak}")

###############################################################################
# A failing check carries the offending ``f``.

rep = membership(A, [pair])
print(rep.counterexample)
