"""Acceptance criteria; the conftest hook prints one PASS/FAIL line per criterion."""

import json
import time

import pytest

from grouprings.algebra import AlgebraElement, corner_dimension, e_sum_of_conjugates, is_central
from grouprings.characters import central_idempotent_from_character, induce
from grouprings.component import build_component, component_structure, real_place_obstruction
from grouprings.corpus import CORPUS, corpus_run, data_text, load_golden
from grouprings.cyclotomic import Cyclotomic, totient
from grouprings.errors import SchurIndexNotOne
from grouprings.groups import commutator_subgroup
from grouprings.idempotents import matrix_units, primitive_idempotent_set
from grouprings.pipeline import RunConfig, dumps, idempotents_json, parse_declared, run, wedderburn_json
from grouprings.shoda import (
    GSM,
    all_shoda_pairs,
    classify_declared,
    complete_irredundant_set,
    is_strong_shoda_pair,
    subgroup_criterion,
)
from grouprings.units import bicyclic_fallback, unit_report

from conftest import GROUP_FILES, group


def _components(name):
    G = group(name)
    report = complete_irredundant_set(G)
    return G, report, [build_component(c) for c in report.pairs]


@pytest.mark.parametrize(
    "name, expected",
    [("S3", [1, 1, 4]), ("D8", [1, 1, 1, 1, 4]), ("C7C3", [1, 2, 18])],
)
def test_criterion_01_wedderburn_totals(name, expected):
    start = time.perf_counter()
    G = group(name)
    result = run(G, RunConfig())
    summary = wedderburn_json(result)
    assert sorted(c["contribution"] for c in summary["components"]) == expected
    assert summary["total_dimension"] == G.order == sum(expected)
    assert time.perf_counter() - start < 5


def test_criterion_01_frobenius_20_has_m4q():
    start = time.perf_counter()
    G = group("C5C4")
    result = run(G, RunConfig())
    summary = wedderburn_json(result)
    assert summary["total_dimension"] == 20
    shapes = [(c.matrix_size, c.center_dimension) for c in result.components]
    assert (4, 1) in shapes
    assert time.perf_counter() - start < 5


def _dimension_terms(p, r, n):
    """The summands of the dimension identity for the semidirect product of order p^(2r+1) 2^n."""
    m1 = (p**r - 1) // (p - 1)
    m2 = ((p ** (2 * r) - 1) - (2 ** (n - 1) + 2) * (p**r - 1)) // ((p - 1) * 2 ** (n - 1))
    t = (p - 1) // 2 ** (n - 1)
    terms = [4]
    terms.append(4 * sum(totient(2**i) // 2 for i in range(2, n)))
    terms.append(4 * m1 * 2 ** (2 * n - 2) * totient(p) // 2)
    terms.append(m1 * 2 ** (2 * n) * t)
    terms.append(m2 * 2 ** (2 * n) * totient(p) // 2)
    terms += [4 * p ** (2 * r) * totient(2**i * p) // 2 for i in range(n)]
    return terms, m1, m2


@pytest.mark.slow
def test_criterion_02_order_1000_declared_pairs():
    start = time.perf_counter()
    terms, m1, m2 = _dimension_terms(5, 1, 3)
    assert terms == [4, 4, 128, 64, 0, 200, 200, 400]
    assert (m1, m2) == (1, 0)

    entry = next(e for e in CORPUS if e.slow)
    G = group_p5()
    declared = parse_declared(G, json.loads(data_text(entry.pairs_file)))
    report = classify_declared(G, declared)
    assert report.verdict == GSM
    comps = [component_structure(c) for c in report.pairs]
    got = sorted(c.contribution for c in comps)
    assert sum(got) == 1000

    # linear part, then 2x2 over Q, then matrix algebras grouped by size and center
    linear = [c for c in comps if c.matrix_size == 1]
    assert sum(c.contribution for c in linear) == terms[0]
    # Q(zeta_5 + zeta_5^-1) and Q(zeta_10 + zeta_10^-1) coincide, so group by size and center degree
    by_shape = {}
    for c in comps:
        if c.matrix_size > 1:
            by_shape.setdefault((c.matrix_size, c.center_dimension), []).append(c.contribution)
    assert by_shape[(2, 1)] == [terms[1]]
    assert sum(by_shape[(4, 2)]) == terms[2] and len(by_shape[(4, 2)]) == 4 * m1
    assert by_shape[(8, 1)] == [terms[3]]
    assert terms[4] == 0 and not any(size == 8 and dim == 2 for size, dim in by_shape)
    assert sorted(by_shape[(10, 2)]) == terms[5:7]
    assert by_shape[(10, 4)] == [terms[7]]
    assert time.perf_counter() - start < 600


def group_p5():
    from grouprings.pipeline import load_group_text

    return load_group_text("extraspecial:5")


def test_criterion_03_primitive_idempotent_battery():
    start = time.perf_counter()
    for name in sorted(GROUP_FILES):
        G, report, comps = _components(name)
        total = AlgebraElement.zero(G)
        for comp in comps:
            if not comp.trivialized:
                continue
            pis = primitive_idempotent_set(comp, check=False)
            members = list(pis.members.values())
            assert len(members) == G.order // comp.pair.H.order
            s = AlgebraElement.zero(G)
            for i, f in enumerate(members):
                assert f * f == f
                for g in members[i + 1 :]:
                    assert (f * g).is_zero() and (g * f).is_zero()
                assert corner_dimension(comp.e, f) == comp.center_dimension
                s = s + f
            assert s == comp.e
            total = total + s
        if all(c.trivialized for c in comps):
            assert total == AlgebraElement.one(G)
    assert time.perf_counter() - start < 60


@pytest.mark.parametrize("name", ["S3", "D8", "C7C3"])
def test_criterion_04_matrix_unit_battery(name):
    G, report, comps = _components(name)
    for comp in comps:
        units = matrix_units(comp, check=False)
        n = comp.k * comp.kk
        assert len(units) == n * n
        labels = sorted({a for a, _ in units})
        zero = AlgebraElement.zero(G)
        for a in labels:
            for b in labels:
                for c in labels:
                    for d in labels:
                        want = units[(a, d)] if b == c else zero
                        assert units[(a, b)] * units[(c, d)] == want
        assert sum((units[(a, a)] for a in labels), zero) == comp.e


def test_criterion_05_character_formula_matches_conjugate_sum():
    checked = 0
    for name in sorted(GROUP_FILES):
        G = group(name)
        for p in all_shoda_pairs(G):
            if is_strong_shoda_pair(G, p.H, p.K) is None:
                continue
            chi = induce(p.witness_character, G.whole)
            assert central_idempotent_from_character(chi) == e_sum_of_conjugates(G, p.H, p.K)
            checked += 1
    assert checked > 20


def test_criterion_06_subgroup_test_matches_idempotents():
    for name in sorted(GROUP_FILES):
        G = group(name)
        assert G.order <= 24
        pairs = all_shoda_pairs(G)
        for p in pairs:
            for q in pairs:
                assert subgroup_criterion(G, p, q) == (p.idempotent == q.idempotent)


def test_criterion_07_quaternion_component_not_trivialized():
    G, report, comps = _components("Q8")
    bad = [c for c in comps if not c.trivialized]
    assert len(bad) == 1
    comp = bad[0]
    assert comp.failure["reason"] == "TwistingNotTrivialized"
    assert (comp.k, comp.kk, comp.conductor) == (1, 2, 4)
    # the norm target is -1 and complex conjugation acts: no solution over Q(i)
    assert real_place_obstruction(Cyclotomic.rational(-1, 4), (1, 3))
    with pytest.raises(SchurIndexNotOne):
        primitive_idempotent_set(comp)
    result = run(G, RunConfig(), "idempotents")
    rows = idempotents_json(result)["components"]
    flagged = [r for r in rows if r["status"] == "SchurIndexNotOne"]
    assert len(flagged) == 1 and "idempotents" not in flagged[0]
    assert all("idempotents" in r for r in rows if r["status"] == "ok")


def test_criterion_08_frobenius_21_coverage():
    G = group("C7C3")
    report = complete_irredundant_set(G)
    assert report.verdict == GSM
    assert report.coverage_idempotent == AlgebraElement.one(G)
    for c in report.pairs:
        if c.pair.H == G.whole:
            continue
        tower = c.chain.tower
        assert tower[0] == c.pair.H and tower[-1] == G.whole
        assert all(a <= b for a, b in zip(tower, tower[1:]))


def test_criterion_09_unit_certification():
    start = time.perf_counter()
    for name in sorted(GROUP_FILES):
        G = group(name)
        one = AlgebraElement.one(G)
        result = run(G, RunConfig(), "units")
        rep = unit_report(G, result.components, result.unit_tables)
        Gp = commutator_subgroup(G)
        for u in rep["generators"]:
            assert u.value.is_integral() and u.inverse.is_integral()
            assert u.value * u.inverse == one and u.inverse * u.value == one
            kind = u.provenance["kind"]
            if kind in ("VPlus", "VMinus"):
                n = u.value - one
                assert (n * n).is_zero()
            if kind == "GeneralizedBass":
                M = G.subgroup(u.provenance["M"])
                assert Gp <= M
                assert is_central(u.value)
    G = group("S3")
    for u in bicyclic_fallback(G):
        assert u.value * u.inverse == AlgebraElement.one(G)
    assert time.perf_counter() - start < 30


def test_criterion_10_corpus_is_byte_identical():
    first = dumps(corpus_run(skip_slow=True))
    second = dumps(corpus_run(skip_slow=True))
    assert first == second
    golden = load_golden()
    report = json.loads(first)
    assert report["golden"] == "match"
    for entry in report["entries"]:
        assert golden[entry["name"]] == entry["bundle_sha256"]
