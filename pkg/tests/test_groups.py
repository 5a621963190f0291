from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grouprings.errors import NotAPermutation, NotASubgroup, OrderBoundExceeded
from grouprings.groups import (
    all_subgroups,
    as_subgroup,
    commutator_subgroup,
    group_from_permutation_generators,
    normal_core,
    normalizer,
    parse_cycles,
    parse_group_text,
    quotient_group,
    quotient_is_cyclic,
    right_transversal,
    left_transversal,
)

from conftest import group


def brute_subgroups(G):
    """Every identity-containing subset closed under products (tiny groups only)."""
    found = set()
    others = range(1, G.order)
    for r in range(G.order):
        for extra in combinations(others, r):
            S = (0,) + extra
            s = set(S)
            if all(int(G.mul[a, b]) in s for a in S for b in S):
                found.add(S)
    return found


def test_closure_orders():
    assert parse_group_text("(1 2 3)").order == 3
    assert group("S3").order == 6
    assert group("D8").order == 8
    assert not group("D8").is_abelian()


def test_cayley_tables_are_latin_squares():
    for name in ("S3", "D8", "Q8", "C7C3"):
        G = group(name)
        assert all(len(set(row)) == G.order for row in G.mul.tolist())
        assert all(len(set(col)) == G.order for col in G.mul.T.tolist())


def test_associativity_brute():
    G = group("C5C4")
    n = G.order
    for a in range(n):
        for b in range(n):
            ab = G.mul[a, b]
            assert np.array_equal(G.mul[ab], G.mul[a][G.mul[b]])


def test_bad_permutation_and_cap():
    with pytest.raises(NotAPermutation):
        parse_cycles("(1 1 2)")
    with pytest.raises(OrderBoundExceeded):
        parse_group_text("a: (1 2 3 4 5 6 7)\nb: (1 2)", cap=100)


def test_subgroup_counts():
    assert len(all_subgroups(parse_group_text("(1 2 3 4)"))) == 3
    assert len(all_subgroups(group("S3"))) == 6
    assert len(all_subgroups(group("D8"))) == 10


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "C2xC2", "C6"])
def test_subgroups_match_brute_force(name):
    G = group(name)
    assert {S.members for S in all_subgroups(G)} == brute_subgroups(G)


def test_normalizers_and_quotients():
    S3 = group("S3")
    r = S3.element_from_word("r")
    assert normalizer(S3, S3.subgroup([r])).order == 6
    D8 = group("D8")
    assert normalizer(D8, D8.subgroup(["b"])).order == 4
    C4 = parse_group_text("a: (1 2 3 4)")
    h = quotient_is_cyclic(C4.whole, C4.trivial)
    assert C4.element_order(h) == 4


def test_transversals():
    D8 = group("D8")
    assert right_transversal(D8.whole, D8.whole).reps == (0,)
    S3 = group("S3")
    assert len(right_transversal(S3.whole, S3.subgroup(["r"]))) == 2
    T = left_transversal(D8.whole, D8.subgroup(["a"]))
    assert len(T) == 2 and T.reps[0] == 0
    assert T.reps[1] not in D8.subgroup(["a"])


def test_as_subgroup_rejects_non_closed():
    S3 = group("S3")
    with pytest.raises(NotASubgroup):
        as_subgroup(S3, [0, S3.element_from_word("s"), S3.element_from_word("r")])


def test_commutator_and_quotient():
    S4 = group("S4")
    assert commutator_subgroup(S4).order == 12
    D8 = group("D8")
    Z = normal_core(D8, D8.subgroup(["a^2"]))
    Q, proj = quotient_group(D8, Z)
    assert Q.order == 4 and Q.is_abelian()
    assert normal_core(D8, D8.subgroup(["b"])).order == 1


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(6)), st.permutations(range(6)))
def test_generated_group_is_closed(p, q):
    G = group_from_permutation_generators([p, q])
    assert 720 % G.order == 0
    members = set(range(G.order))
    for g in G.generators:
        assert set(G.mul[g].tolist()) == members
    assert all(G.product(g, int(G.inv[g])) == 0 for g in range(G.order))
