from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from grouprings.algebra import AlgebraElement, hat, is_central
from grouprings.component import build_component
from grouprings.cyclotomic import Cyclotomic
from grouprings.errors import ExceptionalComponent, NotNormal, ParameterInvalid, SchurIndexNotOne
from grouprings.groups import parse_group_text
from grouprings.idempotents import (
    b_idempotents,
    find_normal_element,
    galois_matrix,
    is_normal_element,
    matrix_units,
    primitive_idempotent_set,
    solve_alpha,
)
from grouprings.linalg import determinant
from grouprings.shoda import complete_irredundant_set
from grouprings.units import (
    M2Q,
    NONE,
    UNKNOWN,
    bass_cyclic_unit,
    bicyclic_fallback,
    bicyclic_unit,
    central_bass_units,
    exceptional_screen,
    generalized_bass_unit,
    screen_through_quotient,
    unit_report,
    v_generators,
)

from conftest import group


@lru_cache(maxsize=None)
def components(name):
    report = complete_irredundant_set(group(name))
    return tuple(build_component(c) for c in report.pairs)


def component(name, conductor):
    return next(c for c in components(name) if c.conductor == conductor)


# -- normal elements and alpha ------------------------------------------------

def test_normal_elements():
    z = Cyclotomic.zeta(4)
    assert not is_normal_element(z, (1, 3))
    assert is_normal_element(1 + z, (1, 3))
    assert find_normal_element(4, (1, 3)) == 1 + z
    assert find_normal_element(7, (1,)) == Cyclotomic.one(7)
    w = find_normal_element(7, (1, 2, 4))
    assert determinant(galois_matrix(w, (1, 2, 4)))


def test_d8_alpha():
    comp = component("D8", 4)
    w = 1 + Cyclotomic.zeta(4)
    alpha = solve_alpha(comp, w)
    # alpha = embed(1 + zeta) times the twisting unit of complex conjugation
    expected = comp.corner_element(w) * comp.corner_units[3]
    assert alpha == expected


def test_trivial_cases():
    for comp in components("S3"):
        if comp.kk == 1 and comp.k == 1:
            pis = primitive_idempotent_set(comp)
            assert list(pis.members.values()) == [comp.e]
            assert solve_alpha(comp, Cyclotomic.one(comp.conductor)) == comp.eps


def test_b_idempotents_for_frobenius_21():
    comp = component("C7C3", 3)
    assert sum(b_idempotents(comp), AlgebraElement.zero(comp.group)) == comp.e


@pytest.mark.parametrize("name, count", [("S3", 4), ("D8", 6), ("D16", 8), ("C7C3", 5), ("C5C4", 7), ("A4", 5), ("S4", 10)])
def test_idempotents_add_up_to_one(name, count):
    G = group(name)
    members = []
    for comp in components(name):
        members += list(primitive_idempotent_set(comp).members.values())
    assert len(members) == count
    assert sum(members, AlgebraElement.zero(G)) == AlgebraElement.one(G)


def test_s3_and_d8_matrix_units():
    comp = component("S3", 3)
    units = matrix_units(comp)
    assert len(units) == 4
    comp = component("D8", 4)
    units = matrix_units(comp)
    labels = sorted({a for a, _ in units})
    G = comp.group
    assert sum((units[(a, a)] for a in labels), AlgebraElement.zero(G)) == (AlgebraElement.one(G) - hat(G.subgroup(["a^2"])))


def test_quaternion_component_refuses():
    comp = next(c for c in components("Q8") if not c.trivialized)
    with pytest.raises(SchurIndexNotOne):
        primitive_idempotent_set(comp)
    with pytest.raises(SchurIndexNotOne):
        v_generators(comp, {}, "plus")


# -- units ---------------------------------------------------------------------

C5 = parse_group_text("g: (1 2 3 4 5)")
C7 = parse_group_text("g: (1 2 3 4 5 6 7)")


def test_bass_examples():
    g = C5.generators[0]
    u = bass_cyclic_unit(C5, g, 2, 4)
    one = AlgebraElement.one(C5)
    x = AlgebraElement.basis(C5, g)
    assert u.value == (one + x) ** 4 - hat(C5.whole).scale(15)
    bass_cyclic_unit(C7, C7.generators[0], 3, 6)
    with pytest.raises(ParameterInvalid):
        bass_cyclic_unit(C5, g, 1, 1)
    with pytest.raises(ParameterInvalid):
        bass_cyclic_unit(C5, g, 2, 3)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(5, 2, 4), (5, 3, 4), (7, 3, 6), (7, 2, 3), (8, 3, 2)]), st.integers(1, 3), st.integers(1, 3))
def test_bass_units_multiply(case, i, j):
    n, k, m = case
    G = parse_group_text(f"g: ({' '.join(str(t) for t in range(1, n + 1))})")
    g = G.generators[0]
    a = bass_cyclic_unit(G, g, k, m * i)
    b = bass_cyclic_unit(G, g, k, m * j)
    c = bass_cyclic_unit(G, g, k, m * (i + j))
    assert a.value * b.value == c.value


def test_generalized_bass():
    S3 = group("S3")
    r = S3.element_from_word("r")
    u = generalized_bass_unit(S3, r, S3.trivial, 2, 2)
    assert u.value == bass_cyclic_unit(S3, r, 2, 2).value
    v = generalized_bass_unit(S3, r, S3.subgroup(["r"]), 2, 2)
    assert v.provenance["n_b"] >= 1
    with pytest.raises(NotNormal):
        generalized_bass_unit(S3, r, S3.subgroup(["s"]), 2, 2)
    for w in central_bass_units(group("C7C3")):
        assert is_central(w.value)


def test_bicyclic_units():
    S3 = group("S3")
    r, s = S3.element_from_word("r"), S3.element_from_word("s")
    assert bicyclic_unit(S3, s, r).value == AlgebraElement.one(S3)
    u = bicyclic_unit(S3, r, s)
    assert not u.is_trivial()
    n = u.value - AlgebraElement.one(S3)
    assert (n * n).is_zero()
    D8 = group("D8")
    assert not bicyclic_unit(D8, D8.element_from_word("a"), D8.element_from_word("b")).is_trivial()
    assert not bicyclic_fallback(group("Q8"))


def test_exceptional_screen():
    s3 = component("S3", 3)
    assert exceptional_screen(s3).kind == M2Q
    assert exceptional_screen(component("C5C4", 5)).kind == NONE
    q8 = next(c for c in components("Q8") if not c.trivialized)
    assert exceptional_screen(q8).kind == UNKNOWN
    with pytest.raises(ExceptionalComponent):
        v_generators(s3, matrix_units(s3), "plus")
    report = complete_irredundant_set(group("S3"))
    kinds = [screen_through_quotient(c) for c in report.pairs]
    assert sorted(kinds) == [M2Q, NONE, NONE]


def test_v_generators():
    comp = component("C7C3", 7)
    units = matrix_units(comp)
    plus = v_generators(comp, units, "plus")
    minus = v_generators(comp, units, "minus")
    assert len(plus) == len(minus) == 3 * 2
    one = AlgebraElement.one(comp.group)
    for u in plus + minus:
        n = u.value - one
        assert (n * n).is_zero() and u.value.is_integral()
    with pytest.raises(ParameterInvalid):
        v_generators(comp, units, "diagonal")


def test_unit_reports():
    C6 = group("C6")
    comps = components("C6")
    rep = unit_report(C6, comps, {i: matrix_units(c) for i, c in enumerate(comps)})
    kinds = {u.provenance["kind"] for u in rep["generators"]}
    assert kinds <= {"BassCyclic", "GeneralizedBass"}
    S3 = group("S3")
    comps = components("S3")
    rep = unit_report(S3, comps, {i: matrix_units(c) for i, c in enumerate(comps)})
    assert rep["exceptional"] and rep["notes"]
    assert any(u.provenance["kind"] == "Bicyclic" for u in rep["generators"])
