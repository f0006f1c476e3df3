import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import ID2, JOIN, MAJ, MEET, NEG, ONE, XOR, ZERO, op_tables
from lawvere.commutant import (
    backtrack_slice,
    commutant,
    commutant_slice,
    commutes_with_all,
    double_commutant,
    exhaustive_slice,
    filter_commuting,
    is_balanced,
    is_saturated,
    theories_commute,
    theory_commutant,
)
from lawvere.errors import ArityMismatch, CarrierMismatch, EnumerationTooLarge, IntractableSlice
from lawvere.ops import OpTable, projection
from lawvere.rigs import bool2, mat_aff_theory, mat_theory, opposite, pointed_mod_theory, zmod
from lawvere.theories import (
    clone_generate,
    equal_upto,
    full_theory,
    is_commutative,
    is_subtheory,
    projections_theory,
)

SHIFT3 = OpTable(1, 3, (1, 2, 0))
MAX3 = OpTable(2, 3, (0, 1, 2, 1, 1, 2, 2, 2, 2))

GENERATOR_SETS_S2 = [
    [],
    [JOIN],
    [JOIN, ZERO],
    [MEET, NEG],
    [XOR],
    [XOR, ONE],
    [MAJ],
    [NEG],
    [ZERO, ONE],
    [OpTable(1, 2, (0, 0))],
]

GENERATOR_SETS_S3 = [[], [SHIFT3], [MAX3], [OpTable(0, 3, (1,))], [OpTable(1, 3, (0, 0, 2))]]
# sets whose binary commutant slices stay small
SMALL_COMMUTANT_S3 = [[SHIFT3], [MAX3], [OpTable(1, 3, (0, 0, 2))]]


# --- membership ----------------------------------------------------------------------------


def test_commutes_with_all_examples():
    assert commutes_with_all(JOIN, [JOIN, ZERO])
    assert not commutes_with_all(NEG, [JOIN])
    for n in range(1, 4):
        for i in range(n):
            assert commutes_with_all(projection(n, i, 2), [JOIN, MEET, NEG, MAJ, ZERO])
    assert commutes_with_all(NEG, [])


def test_carrier_mismatch():
    with pytest.raises(CarrierMismatch):
        commutes_with_all(JOIN, [SHIFT3])
    with pytest.raises(CarrierMismatch):
        commutant([SHIFT3], 2, 2)
    with pytest.raises(CarrierMismatch):
        commutant([JOIN], 2, 2, ambient=projections_theory(3, 2))
    with pytest.raises(ArityMismatch):
        commutant([JOIN], 2, 3, ambient=mat_theory(bool2(), 2))


# --- slices against the brute-force oracle --------------------------------------------------


@pytest.mark.parametrize("gens", GENERATOR_SETS_S2)
def test_slices_match_oracle_s2(gens):
    for n in range(4):
        expected = oracles.commutant_slice(gens, 2, n)
        for strategy in ("exhaustive", "backtrack", "auto"):
            assert list(commutant_slice(gens, 2, n, strategy=strategy)) == expected


@pytest.mark.parametrize("gens", GENERATOR_SETS_S3)
def test_slices_match_oracle_s3(gens):
    for n in range(2):
        expected = oracles.commutant_slice(gens, 3, n)
        for strategy in ("exhaustive", "backtrack"):
            assert list(commutant_slice(gens, 3, n, strategy=strategy)) == expected


@pytest.mark.parametrize("gens", GENERATOR_SETS_S3)
def test_strategies_agree_s3_binary(gens):
    assert exhaustive_slice(gens, 3, 2) == backtrack_slice(gens, 3, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(op_tables(s=3, min_arity=0, max_arity=2), max_size=2))
def test_strategies_agree_random_s3(gens):
    for n in range(3):
        assert exhaustive_slice(gens, 3, n) == backtrack_slice(gens, 3, n)


@settings(max_examples=60, deadline=None)
@given(st.lists(op_tables(s=2, min_arity=0, max_arity=3), max_size=3))
def test_strategies_agree_random_s2(gens):
    for n in range(4):
        assert exhaustive_slice(gens, 2, n) == backtrack_slice(gens, 2, n)


def test_filter_commuting_matches_pairwise():
    candidates = list(oracles.all_ops(2, 2))
    gens = [MEET, NEG]
    assert filter_commuting(candidates, gens, 2, 2) == [c for c in candidates if oracles.commutes(c, MEET) and oracles.commutes(c, NEG)]


# --- limits ----------------------------------------------------------------------------------


def test_exhaustive_refuses_over_cap():
    with pytest.raises(EnumerationTooLarge):
        exhaustive_slice([MAX3], 3, 2, cap=100)


def test_tiny_node_budget_is_intractable():
    with pytest.raises(IntractableSlice) as info:
        backtrack_slice([], 3, 2, node_budget=10)
    assert "intractable at arity 2" in str(info.value)
    with pytest.raises(IntractableSlice):
        commutant_slice([], 3, 3, strategy="auto", node_budget=1000)


def test_auto_falls_back_to_backtracking_over_cap():
    gens = mat_theory(zmod(3), 2).generators
    assert commutant_slice(gens, 3, 2, strategy="auto", cap=10) == exhaustive_slice(gens, 3, 2)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        commutant_slice([JOIN], 2, 1, strategy="guess")


# --- examples ---------------------------------------------------------------------------------


def test_empty_commutant_is_full():
    C = commutant([], 2, 3)
    assert C.arity_counts() == [2, 4, 16, 256]
    assert equal_upto(C, full_theory(2, 3))
    assert equal_upto(commutant([], 2, 2), full_theory(2, 2))


def test_semilattice_commutant_is_mat2():
    C = commutant([JOIN, ZERO], 2, 3)
    assert C.arity_counts() == [1, 2, 4, 8]
    assert equal_upto(C, mat_theory(bool2(), 3))
    assert equal_upto(double_commutant([JOIN, ZERO], 2, 3), C)


def test_affine_commutant():
    C = theory_commutant(mat_aff_theory(bool2(), 3))
    assert C.arity_counts() == [2, 3, 5, 9]
    assert equal_upto(C, clone_generate([JOIN, ZERO, ONE], 2, 3))


def test_pointed_commutant_is_affine_image():
    C = theory_commutant(pointed_mod_theory(bool2(), 3))
    assert equal_upto(C, mat_aff_theory(bool2(), 3))


@pytest.mark.parametrize("R", [zmod(2), zmod(3), zmod(4)], ids=lambda R: R.name)
def test_left_and_right_modules_are_mutual_commutants(R):
    M, Mop = mat_theory(R, 2), mat_theory(opposite(R), 2)
    assert equal_upto(theory_commutant(M), Mop)
    assert equal_upto(theory_commutant(Mop), M)


def test_noncommutative_ring_commutant_is_opposite():
    from lawvere.rigs import upper_triangular_f2

    U = upper_triangular_f2()
    M, Mop = mat_theory(U, 1), mat_theory(opposite(U), 1)
    C = theory_commutant(M)
    assert equal_upto(C, Mop)
    assert not equal_upto(C, M)


def test_balanced_examples():
    assert is_balanced(mat_theory(bool2(), 3))
    Z3 = mat_theory(zmod(3), 2)
    assert is_saturated(Z3)
    assert is_balanced(Z3)
    assert not is_balanced(projections_theory(2, 3))


def test_projections_are_saturated():
    P = projections_theory(2, 3)
    assert equal_upto(commutant([], 2, 3), full_theory(2, 3))
    assert equal_upto(commutant([MEET, NEG], 2, 3), P)
    assert is_saturated(P)


def test_theories_commute_examples():
    gens = mat_theory(bool2(), 2).generators
    assert theories_commute(gens, gens, 2)
    assert not theories_commute([MEET], [JOIN], 2)
    for other in ([MEET, NEG], [MAJ], [XOR, ONE], []):
        assert theories_commute(other, [], 2)
    assert theories_commute([MEET], [JOIN], 2, route="factor") is False
    assert theories_commute([JOIN], [JOIN, ZERO], 2, route="pairs") is True
    with pytest.raises(ValueError):
        theories_commute([JOIN], [JOIN], 2, route="sideways")


# --- properties -------------------------------------------------------------------------------


@pytest.mark.parametrize("gens", GENERATOR_SETS_S2)
def test_generator_stability(gens):
    N = 3
    T = clone_generate(gens, 2, N)
    everything = [op for n in range(N + 1) for op in T.ops(n)]
    assert equal_upto(commutant(gens, 2, N), commutant(everything, 2, N))


@pytest.mark.parametrize("gens", SMALL_COMMUTANT_S3)
def test_generator_stability_s3(gens):
    T = clone_generate(gens, 3, 2)
    everything = [op for n in range(3) for op in T.ops(n)]
    assert equal_upto(commutant(gens, 3, 2), commutant(everything, 3, 2))


@pytest.mark.parametrize("gens", GENERATOR_SETS_S2 + SMALL_COMMUTANT_S3)
def test_commutant_is_a_theory(gens):
    s = gens[0].carrier_size if gens else 2
    C = commutant(gens, s, 3 if s == 2 else 2, check=True)
    from lawvere.theories import is_closed

    assert is_closed(C) in (True, None)
    for n in range(1, C.max_arity + 1):
        for i in range(n):
            assert projection(n, i, s) in C


def binary_pair_family():
    binary = list(oracles.all_ops(2, 2))
    return [list(p) for p in itertools.combinations(binary, 2)]


def test_galois_laws_sample():
    family = binary_pair_family()[::7] + [[b] for b in oracles.all_ops(2, 2)]
    cache = {}

    def perp(gens):
        key = tuple(sorted(gens))
        if key not in cache:
            cache[key] = commutant(gens, 2, 2)
        return cache[key]

    def all_ops_of(T):
        return [op for n in range(3) for op in T.ops(n)]

    for gens in family:
        T = clone_generate(gens, 2, 2)
        P = perp(gens)
        PP = perp(P.generators)
        PPP = perp(PP.generators)
        assert is_subtheory(T, PP)
        assert equal_upto(P, PPP)
        for sub in gens:
            assert is_subtheory(P, perp([sub]))
    for a, b in itertools.combinations(family[:20], 2):
        Ta, Tb = clone_generate(a, 2, 2), clone_generate(b, 2, 2)
        if is_subtheory(Ta, Tb):
            assert is_subtheory(perp(b), perp(a))


@pytest.mark.parametrize("T", [
    mat_theory(bool2(), 3),
    mat_theory(zmod(2), 3),
    mat_theory(zmod(3), 2),
    mat_aff_theory(bool2(), 3),
    mat_aff_theory(zmod(2), 3),
    pointed_mod_theory(bool2(), 3),
    projections_theory(2, 3),
    clone_generate([MEET], 2, 3),
    clone_generate([JOIN, ZERO], 2, 3),
    clone_generate([XOR], 2, 3),
    clone_generate([XOR, ZERO], 2, 3),
    clone_generate([NEG], 2, 3),
    clone_generate([ID2], 2, 3),
], ids=repr)
def test_balanced_implies_commutative_and_saturated(T):
    C = theory_commutant(T)
    assert is_commutative(T) == is_subtheory(T, C)
    if equal_upto(T, C):
        assert is_commutative(T)
        assert is_saturated(T)


def test_threads_do_not_change_results():
    a = commutant(mat_aff_theory(bool2(), 3).generators, 2, 3, threads=1)
    b = commutant(mat_aff_theory(bool2(), 3).generators, 2, 3, threads=4)
    assert equal_upto(a, b)


def test_ambient_filters_slices():
    ambient = mat_theory(bool2(), 3)
    C = commutant([MEET], 2, 3, ambient=ambient)
    F = commutant([MEET], 2, 3)
    for n in range(4):
        assert list(C.ops(n)) == [op for op in F.ops(n) if op in ambient]
    full = commutant([MEET], 2, 3, ambient=full_theory(2, 3))
    assert equal_upto(full, F)
