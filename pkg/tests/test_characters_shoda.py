from itertools import product

import pytest

from grouprings.algebra import AlgebraElement, hat, is_central, is_idempotent, span_basis
from grouprings.characters import (
    central_idempotent_from_character,
    chain_idempotents,
    faithful_character,
    induce,
    inner_product_is_one,
    linear_characters_with_kernel,
)
from grouprings.cyclotomic import Cyclotomic
from grouprings.errors import InvalidChain, NotAShodaPair, QuotientNotCyclic
from grouprings.groups import group_from_permutation_generators, parse_group_text
from grouprings.shoda import (
    GSM,
    INCOMPLETE,
    all_shoda_pairs,
    build_chain,
    classify_declared,
    complete_irredundant_set,
    find_strong_inductive_chain,
    is_shoda_pair,
    is_strong_shoda_pair,
)

from conftest import group


def sl23():
    vecs = [v for v in product(range(3), repeat=2) if v != (0, 0)]

    def perm(M):
        return [vecs.index(((M[0][0] * x + M[0][1] * y) % 3, (M[1][0] * x + M[1][1] * y) % 3)) for x, y in vecs]

    return group_from_permutation_generators([perm([[1, 1], [0, 1]]), perm([[1, 0], [1, 1]])])


def numeric_inner_product(chi):
    total = 0
    for g in chi.domain.members:
        v = chi.value(g).complex_value()
        total += v * v.conjugate()
    return total / chi.domain.order


def numeric_central_idempotent(chi):
    """Sum over the Galois conjugates of chi of chi(1)/|G| sum chi(g) g^-1, in floating point."""
    from grouprings.characters import galois_representatives

    G = chi.domain.parent
    reps, _ = galois_representatives(chi)
    out = {}
    for g in chi.domain.members:
        v = sum(chi.value(g).galois(k).complex_value() for k in reps)
        out[int(G.inv[g])] = v * chi.degree() / chi.domain.order
    return out


def test_linear_character_counts():
    C2 = parse_group_text("(1 2)")
    chars = linear_characters_with_kernel(C2.whole, C2.trivial)
    assert len(chars) == 1 and chars[0].value(1) == Cyclotomic.rational(-1, 2)
    C4 = parse_group_text("(1 2 3 4)")
    assert len(linear_characters_with_kernel(C4.whole, C4.trivial)) == 2
    C7 = parse_group_text("(1 2 3 4 5 6 7)")
    assert len(linear_characters_with_kernel(C7.whole, C7.trivial)) == 6
    V4 = group("C2xC2")
    with pytest.raises(QuotientNotCyclic):
        linear_characters_with_kernel(V4.whole, V4.trivial)


def test_induced_characters():
    S3 = group("S3")
    lam = faithful_character(S3.subgroup(["r"]), S3.trivial)
    assert induce(lam, lam.domain).value(S3.element_from_word("r")) == lam.value(S3.element_from_word("r"))
    chi = induce(lam, S3.whole)
    assert chi.degree() == 2
    assert chi.value(S3.element_from_word("r")) == Cyclotomic.rational(-1, 3)
    assert chi.value(S3.element_from_word("s")).is_zero()
    D8 = group("D8")
    chi = induce(faithful_character(D8.subgroup(["a"]), D8.trivial), D8.whole)
    assert chi.degree() == 2
    assert chi.value(D8.element_from_word("a")).is_zero()
    assert chi.value(D8.element_from_word("b")).is_zero()


def test_central_idempotent_examples():
    S3 = group("S3")
    one = AlgebraElement.one(S3)
    triv = faithful_character(S3.whole, S3.whole)
    assert central_idempotent_from_character(induce(triv, S3.whole)) == hat(S3.whole)
    R = S3.subgroup(["r"])
    assert central_idempotent_from_character(induce(faithful_character(R, S3.trivial), S3.whole)) == one - hat(R)
    C4 = parse_group_text("a: (1 2 3 4)")
    e = central_idempotent_from_character(induce(faithful_character(C4.whole, C4.trivial), C4.whole))
    assert e == AlgebraElement.one(C4) - hat(C4.subgroup(["a^2"]))


@pytest.mark.parametrize("name", ["S3", "D8", "D16", "Q8", "C7C3", "C5C4", "A4", "S4"])
def test_shoda_pairs_give_irreducible_characters(name):
    G = group(name)
    for p in all_shoda_pairs(G):
        chi = induce(p.witness_character, G.whole)
        assert inner_product_is_one(chi)
        assert abs(numeric_inner_product(chi) - 1) < 1e-9
        e = p.idempotent
        assert is_idempotent(e) and is_central(e)
        approx = numeric_central_idempotent(chi)
        for g in range(G.order):
            assert abs(complex(e.coefficient(g)) - approx.get(g, 0)) < 1e-9


def test_reducible_section_is_rejected():
    # D16: <a^4, b> over <b> meets the commutator condition only as a subgroup
    D16 = group("D16")
    H = D16.subgroup(["a^4", "b"])
    K = D16.subgroup(["b"])
    assert is_shoda_pair(D16, H, K) is None
    chi = induce(faithful_character(H, K), D16.whole)
    assert not inner_product_is_one(chi)


def test_strong_pairs():
    D8 = group("D8")
    assert is_strong_shoda_pair(D8, D8.subgroup(["a"]), D8.trivial) is not None
    Q8 = group("Q8")
    assert is_strong_shoda_pair(Q8, Q8.subgroup(["i"]), Q8.trivial) is not None
    S3 = group("S3")
    assert is_shoda_pair(S3, S3.whole, S3.whole) is not None
    assert is_shoda_pair(S3, S3.subgroup(["r"]), S3.trivial) is not None


def test_normal_shoda_pairs_are_strong():
    for name in ("S3", "D8", "D16", "Q8", "C5C4", "S4"):
        G = group(name)
        for p in all_shoda_pairs(G):
            if p.H.mask == G.whole.mask or all(G.conj(h, g) in p.H for h in p.H.generators for g in G.generators):
                assert is_strong_shoda_pair(G, p.H, p.K) is not None


def test_chains():
    S3 = group("S3")
    p = is_shoda_pair(S3, S3.subgroup(["r"]), S3.trivial)
    chain = build_chain(p, [p.H, S3.whole])
    assert chain.k == 1 and chain.kk == 2
    assert chain.chain_idempotents == chain_idempotents(p.witness_character, [p.H, S3.whole])
    with pytest.raises(InvalidChain):
        build_chain(p, [S3.whole, S3.whole])
    C7C3 = group("C7C3")
    q = is_shoda_pair(C7C3, C7C3.subgroup(["a"]), C7C3.trivial)
    c = find_strong_inductive_chain(C7C3, q)
    assert (c.k, c.kk) == (1, 3)
    e = c.chain_idempotents[-1]
    assert len(span_basis([e * AlgebraElement.basis(C7C3, g) for g in range(21)])) == 18


def test_classification_reports():
    S3 = group("S3")
    rep = complete_irredundant_set(S3)
    assert rep.verdict == GSM and rep.all_strong and len(rep.pairs) == 3
    assert rep.coverage_idempotent == AlgebraElement.one(S3)
    for name, n in (("A4", 3), ("S4", 5), ("C5C4", 4)):
        assert len(complete_irredundant_set(group(name)).pairs) == n
    bad = complete_irredundant_set(sl23())
    assert bad.verdict == INCOMPLETE
    assert bad.coverage_idempotent != AlgebraElement.one(bad.group)


def test_declared_pairs_are_verified():
    D8 = group("D8")
    with pytest.raises(NotAShodaPair):
        classify_declared(D8, [(D8.subgroup(["b"]), D8.trivial, None)])
    with pytest.raises(InvalidChain):
        A = D8.subgroup(["a"])
        classify_declared(D8, [(A, D8.trivial, None), (A, D8.trivial, None)])
    ok = classify_declared(D8, [(D8.whole, D8.whole, None)])
    assert ok.verdict == INCOMPLETE and len(ok.pairs) == 1
