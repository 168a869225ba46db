"""
The lowerset monad
==================
"""

from kaninj import FinPoset, algebra_structure, kz_check, lowerset, monad_laws_check
from kaninj.oracles import posets_up_to

A = FinPoset.antichain(["a", "b"])
L = lowerset(A)
for D in L.TX.elements:
    print(D, "=", L.downset(D))

# unit and multiplication obey the monad laws, and Tη <= ηT
print(all(monad_laws_check(X) and kz_check(X) for X in posets_up_to(4)))

###############################################################################
# An algebra sends a downset to its join, so only complete lattices have one.

for X in posets_up_to(3):
    a = algebra_structure(X)
    print(f"{X!r:32}", "algebra" if a else f"missing join of {list(a.witness)}")
