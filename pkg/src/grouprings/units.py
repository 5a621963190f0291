"""Units of ZG: Bass cyclic, generalized Bass, bicyclic and the elementary V-generators.

Every emitted unit carries its exact inverse and is certified on creation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .algebra import AlgebraElement, hat, inverse_in_corner, is_central
from .cyclotomic import Cyclotomic, units_mod
from .errors import (
    ExceptionalComponent,
    MinimalExponentNotFound,
    NonIntegralInverse,
    NotNormal,
    ParameterInvalid,
    SchurIndexNotOne,
)
from .groups import Subgroup, all_subgroups, commutator_subgroup, generate, is_normal_in, normal_core, quotient_group
from .idempotents import find_normal_element

NONE = "None"
UNKNOWN = "Unknown"
M2Q = "M2Q"
M2_IMAGINARY_QUADRATIC = "M2ImaginaryQuadratic"
M2_DEFINITE_QUATERNION = "M2TotallyDefiniteQuaternion"
DIVISION = "NonCommDivisionNotTotallyDefiniteQuaternion"


@dataclass(eq=False)
class UnitElement:
    value: AlgebraElement
    inverse: AlgebraElement
    provenance: dict

    def certify(self):
        one = AlgebraElement.one(self.value.group)
        if not (self.value.is_integral() and self.inverse.is_integral()):
            raise NonIntegralInverse("unit or inverse has a non-integral coefficient", **self.provenance)
        if self.value * self.inverse != one or self.inverse * self.value != one:
            raise NonIntegralInverse("value * inverse != 1", **self.provenance)
        return self

    def is_trivial(self):
        """True for +-g."""
        supp = self.value.support()
        return len(supp) == 1 and abs(self.value.coefficient(supp[0])) == 1

    def to_json(self):
        return {"provenance": self.provenance, "value": self.value.to_json(), "inverse": self.inverse.to_json()}


@dataclass(eq=False)
class ExceptionalFlag:
    component: object
    kind: str


def _powers_sum(G, g, k):
    """1 + g + ... + g^(k-1)"""
    out, acc = [], 0
    for _ in range(k):
        out.append(acc)
        acc = int(G.mul[acc, g])
    return AlgebraElement.from_elements(G, out)


def _bass_value(G, g, k, m):
    n = G.element_order(g)
    if n < 2 or not 1 < k < n:
        raise ParameterInvalid("Bass cyclic units need 1 < k < |g|", k=k, order=n)
    if gcd(k, n) != 1 or pow(k, m, n) != 1 % n:
        raise ParameterInvalid("k^m must be 1 modulo |g|", k=k, m=m, order=n)
    return _powers_sum(G, g, k) ** m + _powers_sum(G, g, n).scale(Fraction(1 - k ** m, n))


def bass_cyclic_unit(G, g, k, m):
    u = _bass_value(G, g, k, m)
    inv = inverse_in_corner(AlgebraElement.one(G), u)
    if inv is None or not inv.is_integral():
        raise NonIntegralInverse("Bass cyclic unit has no integral inverse", g=g, k=k, m=m)
    return UnitElement(u, inv, {"kind": "BassCyclic", "g": g, "k": k, "m": m}).certify()


def generalized_bass_unit(G, g, M, k, m, cap=None):
    """(1 - M^ + u_{k,m}(g) M^)^n for the least n >= 1 making it integral."""
    if not is_normal_in(M, G.whole):
        raise NotNormal("M must be normal in G")
    if M.order == 1:
        u = bass_cyclic_unit(G, g, k, m)
        u.provenance = {"kind": "GeneralizedBass", "g": g, "M": list(M.members), "k": k, "m": m, "n_b": 1}
        return u
    u = bass_cyclic_unit(G, g, k, m)
    one = AlgebraElement.one(G)
    Mh = hat(M)
    b = one - Mh + u.value * Mh
    b_inv = one - Mh + u.inverse * Mh
    cap = cap or 2 * G.order ** 2
    val, inv = b, b_inv
    for n in range(1, cap + 1):
        if val.is_integral():
            if not inv.is_integral():
                raise NonIntegralInverse("generalized Bass inverse is not integral", g=g, n=n)
            prov = {"kind": "GeneralizedBass", "g": g, "M": list(M.members), "k": k, "m": m, "n_b": n}
            return UnitElement(val, inv, prov).certify()
        val = val * b
        inv = inv * b_inv
    raise MinimalExponentNotFound("no integral power below the cap", cap=cap)


def bicyclic_unit(G, g, h):
    """1 + (1 - h) g h~ with inverse 1 - (1 - h) g h~."""
    n = G.element_order(h)
    one = AlgebraElement.one(G)
    nil = (one - AlgebraElement.basis(G, h)) * AlgebraElement.basis(G, g) * _powers_sum(G, h, n)
    return UnitElement(one + nil, one - nil, {"kind": "Bicyclic", "g": g, "h": h}).certify()


# -- components ------------------------------------------------------------

def _quadratic_discriminant(comp):
    """Discriminant of the minimal polynomial of a generator of a quadratic center."""
    m = comp.conductor
    gal = set(comp.galois)
    for orb in comp.orbit_sums():
        beta = Cyclotomic.from_exponents(m, [orb.count(j) for j in range(m)])
        if beta.is_rational():
            continue
        other = next(t for t in units_mod(m) if t not in gal)
        b2 = beta.galois(other)
        tr, nm = beta + b2, beta * b2
        return tr.to_rational() ** 2 - 4 * nm.to_rational()
    return None


def exceptional_screen(comp):
    if comp.k == 1 and comp.kk == 1:
        return ExceptionalFlag(comp, NONE)
    if not comp.trivialized:
        return ExceptionalFlag(comp, UNKNOWN)
    n = comp.matrix_size
    if n >= 3:
        return ExceptionalFlag(comp, NONE)
    dimF = comp.center_dimension
    if dimF == 1:
        return ExceptionalFlag(comp, M2Q)
    if dimF == 2:
        disc = _quadratic_discriminant(comp)
        if disc is not None and disc < 0:
            return ExceptionalFlag(comp, M2_IMAGINARY_QUADRATIC)
    return ExceptionalFlag(comp, NONE)


QUOTIENT_SCREEN_CAP = 200


def screen_through_quotient(classified, cap=QUOTIENT_SCREEN_CAP):
    """Exceptional screen for a component known only by its pair (no matrix units).

    The component lives in Q(G/N) for N the normal core of K, so it is rebuilt
    there when G/N is small. Larger quotients give Unknown for 2x2 blocks.
    """
    from .component import build_component
    from .shoda import ClassifiedPair, build_chain, find_strong_inductive_chain, is_shoda_pair, is_strong_shoda_pair

    pair, chain = classified.pair, classified.chain
    if chain.k * chain.kk != 2:
        return NONE
    G = pair.group
    N = normal_core(G, pair.K)
    if G.order // N.order > cap:
        return UNKNOWN
    Q, proj = quotient_group(G, N)
    H = Subgroup(Q, set(int(x) for x in proj[list(pair.H.members)]))
    K = Subgroup(Q, set(int(x) for x in proj[list(pair.K.members)]))
    p = is_shoda_pair(Q, H, K)
    if p is None:
        return UNKNOWN
    if is_strong_shoda_pair(Q, H, K) is not None:
        qc = ClassifiedPair(p, build_chain(p, [H, Q.whole]), True)
    else:
        qchain = find_strong_inductive_chain(Q, p)
        if qchain is None:
            return UNKNOWN
        qc = ClassifiedPair(p, qchain, False)
    return exceptional_screen(build_component(qc)).kind


def galois_transversal(comp):
    """Least exponent in each coset of the component's Galois group in (Z/m)^x."""
    m = comp.conductor
    seen, reps = set(), []
    for t in units_mod(m):
        if t in seen:
            continue
        reps.append(t)
        seen |= {(t * s) % m for s in comp.galois}
    return reps


def orbit_basis(comp):
    """beta_tau = sum_{s in galois} s(tau(w)) for w normal over Q."""
    m = comp.conductor
    w = find_normal_element(m, units_mod(m))
    return w, [
        (t, sum((w.galois(t).galois(s) for s in comp.galois), Cyclotomic.zero(m)))
        for t in galois_transversal(comp)
    ]


def v_generators(comp, units, side):
    """1 + c beta E_ab for off-diagonal matrix units on one side of the diagonal."""
    if side not in ("plus", "minus"):
        raise ParameterInvalid("side must be plus or minus")
    if not comp.trivialized:
        raise SchurIndexNotOne("V-generators need a split component")
    flag = exceptional_screen(comp)
    if flag.kind != NONE:
        raise ExceptionalComponent("component is exceptional", kind=flag.kind)
    labels = []
    for a, b in units:
        if a not in labels:
            labels.append(a)
    if len(labels) < 2:
        return []
    w, betas = orbit_basis(comp)
    embedded = [(t, beta, comp.embed_E(beta)) for t, beta in betas]
    pos = {lab: i for i, lab in enumerate(labels)}
    off = [(a, b) for (a, b) in units if a != b]
    prods = {}
    c = 1
    for t, beta, bh in embedded:
        for key in off:
            x = bh * units[key]
            prods[(t, key)] = x
            c = c * x.den // gcd(c, x.den)
    one = AlgebraElement.one(comp.group)
    out = []
    for t, beta, _ in embedded:
        for (a, b) in off:
            lower = pos[a] > pos[b]
            if lower != (side == "plus"):
                continue
            n = prods[(t, (a, b))].scale(c)
            prov = {
                "kind": "VPlus" if side == "plus" else "VMinus",
                "component": comp.pair.describe(),
                "row": [comp.T[a[0]], a[1]],
                "col": [comp.T[b[0]], b[1]],
                "beta": beta.to_json(),
                "tau": t,
                "c": c,
            }
            out.append(UnitElement(one + n, one - n, prov).certify())
    return out


# -- report -----------------------------------------------------------------

def _cyclic_reps(G):
    """One generator per conjugacy class of cyclic subgroups, by increasing generator index."""
    seen, reps = set(), []
    for g in range(G.order):
        cyc = frozenset(generate(G, [g]).members)
        if cyc in seen:
            continue
        for x in range(G.order):
            seen.add(frozenset(int(G.conj_table[x, y]) for y in cyc))
        reps.append(g)
    return reps


def bass_parameters(G, g):
    n = G.element_order(g)
    out = []
    for k in units_mod(n):
        if 1 < k < n:
            m = 1
            while pow(k, m, n) != 1:
                m += 1
            out.append((k, m))
    return out


def central_bass_units(G, subgroups=None):
    """Nontrivial generalized Bass units on (g, M) with G' <= M normal; also Bass cyclic units."""
    Gp = commutator_subgroup(G)
    subgroups = subgroups if subgroups is not None else all_subgroups(G)
    normals = [M for M in subgroups if Gp <= M and is_normal_in(M, G.whole)]
    normals.sort(key=lambda M: M.sort_key())
    out, keys = [], set()
    for g in _cyclic_reps(G):
        for k, m in bass_parameters(G, g):
            for M in normals:
                if g in M:
                    continue
                u = generalized_bass_unit(G, g, M, k, m)
                if u.is_trivial() or u.value.key() in keys:
                    continue
                keys.add(u.value.key())
                out.append(u)
    return out


def bass_cyclic_units(G):
    out, keys = [], set()
    for g in _cyclic_reps(G):
        for k, m in bass_parameters(G, g):
            u = bass_cyclic_unit(G, g, k, m)
            if u.is_trivial() or u.value.key() in keys:
                continue
            keys.add(u.value.key())
            out.append(u)
    return out


def bicyclic_fallback(G, pairs=None):
    """Bicyclic units for given (g, h) pairs, or g over generators and h over cyclic representatives."""
    if pairs is None:
        pairs = [(g, h) for g in G.generators for h in _cyclic_reps(G) if h]
    out, keys = [], set()
    for g, h in pairs:
        u = bicyclic_unit(G, g, h)
        if u.value.key() in keys or u.value == AlgebraElement.one(G):
            continue
        keys.add(u.value.key())
        out.append(u)
    return out


def unit_report(G, components, unit_tables, fallback_pairs=None, subgroups=None):
    """Generators with provenance.

    ``unit_tables`` maps a component index to its matrix units (None when the
    component is not split).
    """
    gens = bass_cyclic_units(G) + central_bass_units(G, subgroups)
    exceptional, notes = [], []
    for i, comp in enumerate(components):
        flag = exceptional_screen(comp)
        if flag.kind == NONE:
            mu = unit_tables.get(i)
            if mu is None:
                continue
            gens += v_generators(comp, mu, "plus")
            gens += v_generators(comp, mu, "minus")
        else:
            exceptional.append({"component": comp.pair.describe(), "kind": flag.kind})
    fallback = []
    if exceptional:
        fallback = bicyclic_fallback(G, fallback_pairs)
        notes.append("exceptional components are covered by bicyclic units, not by V-generators")
    if not gens and not fallback:
        notes.append("no nontrivial generators")
    return {"generators": gens + fallback, "exceptional": exceptional, "notes": notes}


def check_central(unit):
    return is_central(unit.value)


def n_squares_to_zero(unit):
    one = AlgebraElement.one(unit.value.group)
    n = unit.value - one
    return (n * n).is_zero()
