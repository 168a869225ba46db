"""
Kan extensions between finite posets
====================================

A left Kan extension of ``f`` along ``h`` is the least monotone ``g`` with
``f <= g∘h``.  Between finite posets it can be found by brute force, and
when the target has the right joins it is given by a pointwise formula.
"""

from kaninj import FinPoset, MonotoneMap, least_extension, pointwise_join_extension

# two incomparable points, and the same two points with a common upper bound
A = FinPoset.antichain(["a", "b"])
V = FinPoset.from_pairs(["a", "b", "t"], [("a", "t"), ("b", "t")])
h = MonotoneMap(A, V, {"a": "a", "b": "b"})

# the diamond lattice has every join we could ask for
D = FinPoset.from_pairs(["bot", "x", "y", "top"],
                        [("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")])
f = MonotoneMap(A, D, {"a": "x", "b": "y"})

v = least_extension(h, f)
print("Lan exists:", v.exists, " strict:", v.strict)
print("t goes to", v.extension("t"))

# the pointwise formula agrees: g(t) is the join of f(a) over all a with h(a) <= t
print("formula:", pointwise_join_extension(h, f) == v.extension)

###############################################################################
# Into a poset without joins there may be nothing at all.

print(least_extension(h, MonotoneMap.identity(A)).outcome)

###############################################################################
# Or several minimal candidates and no least one.

W = FinPoset.from_pairs(["a", "b", "u", "w"], [("a", "u"), ("b", "u"), ("a", "w"), ("b", "w")])
print(least_extension(h, MonotoneMap(A, W, {"a": "a", "b": "b"})).outcome)
