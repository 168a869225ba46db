"""
Weak injectivity as strong injectivity
======================================

Weak members for ``H`` coincide with strong members for the units of the
weak reflections.  Over a finite universe only one inclusion is exact.
"""

from kaninj import FinPoset, MonotoneMap, weak_equals_strong_probe
from kaninj.oracles import posets_up_to

A = FinPoset.antichain(["a", "b"])
collapse = MonotoneMap.constant(A, FinPoset.point("t"), "t")

rep = weak_equals_strong_probe([collapse], posets_up_to(3), skip_unconverged=True)
for row in rep.rows:
    print(f"{row.subject!r:32} weak: {row.weak_member!s:5}  strong: {row.strong_member}")

print("inclusion exact:", rep.inclusion_holds)
print("converse:", rep.converse_holds_in_universe, f"({rep.converse_scope})")
print("did not converge:", rep.unconverged)
