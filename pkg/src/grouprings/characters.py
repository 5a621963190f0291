"""Linear characters of cyclic sections, monomial induction, and the Galois-sum idempotent."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from .algebra import AlgebraElement, is_central, is_idempotent
from .cyclotomic import Cyclotomic, GaloisAutomorphism, units_mod, zeta_powers
from .errors import NonRationalOutput, NotContained, NotNormal, QuotientNotCyclic
from .groups import is_normal_in, left_transversal, quotient_is_cyclic


@dataclass(eq=False)
class LinearCharacter:
    """h^i k -> zeta_m^(i*exponent) on H, with kernel K."""

    domain: object
    kernel: object
    generator: int
    order: int
    exponent: int = 1

    @cached_property
    def exponent_array(self):
        """For each group element: i with x in h^i K (x in H), else -1."""
        G = self.domain.parent
        arr = np.full(G.order, -1, dtype=np.int64)
        K = np.array(self.kernel.members)
        acc = 0
        for i in range(self.order):
            arr[G.mul[acc, K]] = (i * self.exponent) % self.order
            acc = int(G.mul[acc, self.generator])
        return arr

    def value(self, g):
        i = int(self.exponent_array[g])
        if i < 0:
            return Cyclotomic.zero(self.order)
        return Cyclotomic.zeta(self.order, i)


def linear_characters_with_kernel(H, K):
    if not is_normal_in(K, H):
        raise NotNormal("K is not normal in H")
    h = quotient_is_cyclic(H, K)
    if h is None:
        raise QuotientNotCyclic("H/K is not cyclic")
    m = H.order // K.order
    return [LinearCharacter(H, K, h, m, j) for j in units_mod(m)]


def faithful_character(H, K):
    return linear_characters_with_kernel(H, K)[0]


@dataclass(eq=False)
class ClassFunction:
    """Values on conjugacy classes of ``domain`` (a subgroup), in Q(zeta_conductor).

    ``counts[x]`` holds, for each element x of the domain, the multiplicities of
    zeta^j in chi(x) (an integer vector of length conductor).
    """

    domain: object
    conductor: int
    counts: dict = field(repr=False)

    @cached_property
    def values(self):
        reps = self._class_reps
        return {r: Cyclotomic.from_exponents(self.conductor, self.counts[r]) for r in reps}

    @cached_property
    def _class_reps(self):
        G = self.domain.parent
        members = np.array(self.domain.members)
        seen, reps = set(), []
        for x in self.domain.members:
            if x in seen:
                continue
            cls = set(int(y) for y in G.conj_table[members, x])
            seen |= cls
            reps.append(x)
        return reps

    @property
    def group(self):
        return self.domain.parent

    def value(self, g):
        if g not in self.domain:
            raise NotContained("element outside the domain of the class function")
        return Cyclotomic.from_exponents(self.conductor, self.counts[g])

    def degree(self):
        return int(sum(self.counts[0]))

    def to_json(self):
        return {
            "domain_order": self.domain.order,
            "values": [{"rep": r, "value": v.to_json()} for r, v in sorted(self.values.items())],
        }


def induce(lam, up_to):
    """lambda^S with chi(g) = sum over a left transversal t of lambda°(t^-1 g t)."""
    H = lam.domain
    if not H <= up_to:
        raise NotContained("character domain is not inside the target subgroup")
    G = H.parent
    T = left_transversal(up_to, H).reps
    members = np.array(up_to.members)
    m = lam.order
    expo = lam.exponent_array
    conj = G.conj_table[np.ix_(np.array(T), members)]  # t^-1 g t
    ex = expo[conj]  # |T| x |S|
    counts = {}
    for col, g in enumerate(up_to.members):
        vals = ex[:, col]
        vals = vals[vals >= 0]
        counts[g] = np.bincount(vals, minlength=m).tolist()
    return ClassFunction(up_to, m, counts)


def character_field_stabilizer(chi):
    """Automorphisms of Q(zeta_m) fixing every value of chi."""
    n = chi.conductor
    vals = list(chi.values.values())
    out = []
    for k in units_mod(n):
        if all(v.galois(k) == v for v in vals):
            out.append(GaloisAutomorphism(n, k))
    return out


def galois_representatives(chi):
    """One exponent per coset of the stabilizer in (Z/m)^x, i.e. Gal(Q(chi)/Q)."""
    n = chi.conductor
    stab = [s.exponent for s in character_field_stabilizer(chi)]
    covered, reps = set(), []
    if n <= 2:
        return [1], stab
    for k in units_mod(n):
        if k in covered:
            continue
        reps.append(k)
        covered |= {(k * s) % n for s in stab}
    return reps, stab


def central_idempotent_from_character(chi):
    """e_Q(chi) = chi(1)/|S| sum_sigma sum_g sigma(chi(g)) g^-1, as an element of QG."""
    S = chi.domain
    G = S.parent
    reps, _ = galois_representatives(chi)
    deg = chi.degree()
    num = {}
    for r in chi._class_reps:
        v = chi.values[r]
        total = Cyclotomic.zero(chi.conductor)
        for k in reps:
            total = total + v.galois(k)
        if not total.is_rational():
            raise NonRationalOutput("Galois sum left an irrational coefficient")
        num[r] = total.to_rational()
    coeffs = {}
    for x in S.members:
        # class representative of x inside S
        rep = _rep_in(chi, x)
        c = num[rep] * Fraction(deg, S.order)
        if c:
            coeffs[int(G.inv[x])] = c
    e = AlgebraElement.from_dict(G, coeffs)
    if not is_idempotent(e) or not is_central(e, within=S):
        raise NonRationalOutput("character formula did not give a central idempotent")
    return e


def _rep_in(chi, x):
    cache = chi.__dict__.setdefault("_rep_map", None)
    if cache is None:
        G = chi.domain.parent
        members = np.array(chi.domain.members)
        cache = {}
        for r in chi._class_reps:
            for y in G.conj_table[members, r]:
                cache[int(y)] = r
        chi.__dict__["_rep_map"] = cache
    return cache[x]


def inner_product_is_one(chi):
    """<chi, chi> = 1, computed exactly."""
    S = chi.domain
    total = Cyclotomic.zero(chi.conductor)
    for x in S.members:
        v = Cyclotomic.from_exponents(chi.conductor, chi.counts[x])
        total = total + v * v.galois(chi.conductor - 1 if chi.conductor > 2 else 1)
    return total == S.order


def chain_idempotents(lam, tower):
    """[e_Q(lambda^{H_i}) for H_i in tower]."""
    return [central_idempotent_from_character(induce(lam, Hi)) for Hi in tower]
