import pytest
from hypothesis import given, strategies as st

from kaninj import (
    BudgetExceeded,
    FinPoset,
    MonotoneMap,
    algebra_structure,
    classify_morphism,
    membership,
    run_reflection,
)
from kaninj.oracles import (
    all_posets,
    candidate_mutations,
    downset_completion,
    find_isomorphism,
    find_unit_isomorphism,
    free_join_semilattice,
    is_isomorphic,
    posets_up_to,
    verify_reflection,
    weak_equals_strong_probe,
)

from conftest import collapse_2_1, emb_2_v, posets, vee

EMPTY_TO_ONE = MonotoneMap(FinPoset.empty(), FinPoset.point("t"), {})
LATTICE_H = [emb_2_v(), EMPTY_TO_ONE]  # binary joins and a bottom

SEMILATTICES = [P for P in posets_up_to(3) if membership(P, [emb_2_v()])]
LATTICES = [P for P in posets_up_to(4) if membership(P, LATTICE_H)]


def relabel(P, rng):
    perm = list(range(len(P)))
    rng.shuffle(perm)
    names = [f"q{k}" for k in range(len(P))]
    new = [names[perm[i]] for i in range(len(P))]
    pairs = [(new[i], new[j]) for i in range(len(P)) for j in range(len(P)) if i != j and P.leq_idx(i, j)]
    return FinPoset.from_pairs([names[k] for k in range(len(P))], pairs)


# the catalogue ------------------------------------------------------------------------------


def test_poset_counts():
    assert [len(all_posets(n)) for n in range(5)] == [1, 1, 2, 5, 16]


@pytest.mark.parametrize("n", range(5))
def test_catalogue_has_no_repeats(n):
    reps = all_posets(n)
    for i, P in enumerate(reps):
        for Q in reps[i + 1:]:
            assert not is_isomorphic(P, Q)


@given(posets(4))
def test_catalogue_is_complete(P):
    assert sum(is_isomorphic(P, Q) for Q in all_posets(len(P))) == 1


# isomorphisms -----------------------------------------------------------------------------------


@given(posets(5), st.randoms(use_true_random=False))
def test_relabelled_posets_are_isomorphic(P, rng):
    Q = relabel(P, rng)
    iso = find_isomorphism(P, Q)
    assert iso is not None and iso.is_iso()


def test_isomorphism_examples(V):
    assert find_isomorphism(V, FinPoset.chain(["0", "1", "2"])) is None
    assert find_isomorphism(V, FinPoset.antichain(["a", "b"])) is None
    L = FinPoset.from_pairs(["b", "x", "y"], [("b", "x"), ("b", "y")])
    assert not is_isomorphic(V, L)
    assert is_isomorphic(FinPoset.empty(), FinPoset.empty())


def test_unit_isomorphism_respects_the_units(A2, V):
    u = MonotoneMap(A2, V, {"a": "a", "b": "b"})
    swapped = MonotoneMap(A2, V, {"a": "b", "b": "a"})
    iso = find_unit_isomorphism(u, swapped)
    assert iso is not None and iso("a") == "b"
    two = FinPoset.chain(["0", "1"])
    assert find_unit_isomorphism(MonotoneMap.identity(two), MonotoneMap.constant(two, two, "0")) is None


# free constructions --------------------------------------------------------------------------


def test_free_semilattice_examples(A2):
    F, u = free_join_semilattice(A2)
    assert is_isomorphic(F, vee())
    assert len(free_join_semilattice(FinPoset.point())[0]) == 1
    two = FinPoset.chain(["0", "1"])
    F, u = free_join_semilattice(two)
    assert len(F) == 2 and u.is_iso()
    assert len(free_join_semilattice(FinPoset.empty())[0]) == 0


def test_downset_completion_examples(A2, D4):
    T, u = downset_completion(A2)
    assert is_isomorphic(T, D4)
    assert len(downset_completion(FinPoset.empty())[0]) == 1


@pytest.mark.parametrize("P", posets_up_to(3), ids=repr)
def test_free_semilattice_is_a_reflection(P):
    emb = emb_2_v()
    F, u = free_join_semilattice(P)
    assert membership(F, [emb])
    assert verify_reflection((F, u), [emb], SEMILATTICES)


@pytest.mark.parametrize("P", posets_up_to(3), ids=repr)
def test_downset_completion_is_a_reflection(P):
    T, u = downset_completion(P)
    assert algebra_structure(T)
    assert verify_reflection((T, u), LATTICE_H, LATTICES)


@pytest.mark.parametrize("P", posets_up_to(4), ids=repr)
def test_units_are_embeddings(P):
    for T, u in (free_join_semilattice(P), downset_completion(P)):
        assert classify_morphism(u).embedding
        assert membership(T, [emb_2_v()])
    assert algebra_structure(downset_completion(P)[0])


def test_weak_targets(A2):
    h = collapse_2_1()
    weak_members = [P for P in posets_up_to(3) if membership(P, [h], "weak-left")]
    F, u = free_join_semilattice(A2)
    assert verify_reflection((F, u), [h], weak_members, side="weak-left")


# negative controls ------------------------------------------------------------------------------


def test_targets_must_be_members(A2):
    F, u = free_join_semilattice(A2)
    with pytest.raises(ValueError):
        verify_reflection((F, u), [emb_2_v()], [A2])


def test_dropping_the_top_is_rejected(A2):
    F, u = free_join_semilattice(A2)
    muts = dict(candidate_mutations((F, u)))
    (R, unit), = [c for d, c in muts.items() if d.startswith("drop element")]
    v = verify_reflection((R, unit), [emb_2_v()], SEMILATTICES)
    assert not v and "not Kan-injective" in v.detail


def test_identity_on_a_member_can_fail(D4):
    # the diamond is a member, but not every monotone map out of it preserves joins
    v = verify_reflection((D4, MonotoneMap.identity(D4)), [emb_2_v()], SEMILATTICES)
    assert not v and "factorization" in v.detail


def test_identity_on_a_chain_passes():
    C = FinPoset.chain(["0", "1", "2"])
    assert verify_reflection((C, MonotoneMap.identity(C)), [emb_2_v()], SEMILATTICES)


@pytest.mark.parametrize("P", posets_up_to(3), ids=repr)
def test_every_mutation_is_rejected(P):
    emb = emb_2_v()
    cand = free_join_semilattice(P)
    muts = list(candidate_mutations(cand))
    if len(cand[0]) > len(P):
        assert muts
    for desc, m in muts:
        assert not verify_reflection(m, [emb], SEMILATTICES), desc


def test_mutations_keep_the_unit_monotone(A2):
    for desc, (R, u) in candidate_mutations(free_join_semilattice(A2)):
        assert u.cod == R
        MonotoneMap._raw(u.dom, R, u.idx, check=True)


# weak versus strong ------------------------------------------------------------------------------


def test_probe_on_a_point():
    rep = weak_equals_strong_probe([collapse_2_1()], [FinPoset.point()])
    assert rep.inclusion_holds and rep.converse_holds_in_universe and not rep.unconverged


def test_probe_propagates_non_convergence():
    with pytest.raises(BudgetExceeded):
        weak_equals_strong_probe([collapse_2_1()], posets_up_to(3))


def test_probe_on_the_converging_part():
    universe = posets_up_to(3)
    rep = weak_equals_strong_probe([collapse_2_1()], universe, skip_unconverged=True)
    assert [len(P) for P in rep.unconverged] == [3]
    assert rep.inclusion_holds and rep.converse_scope == "family-relative"
    for row in rep.rows:
        assert row.weak_member == row.subject.has_binary_joins()
        if not row.weak_member:
            assert row.defeated_by is not None


def test_probe_units_are_weak_reflections(A2):
    rep = weak_equals_strong_probe([collapse_2_1()], [A2])
    (u,) = rep.units
    tr = run_reflection(A2, [collapse_2_1()], mode="weak")
    assert find_unit_isomorphism(u, tr.unit) is not None
    assert not rep.rows[0].weak_member and rep.rows[0].defeated_by == 0
