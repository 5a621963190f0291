"""One simple component QG·e as a crossed product.

The component attached to a generalized strong Shoda pair (H, K) with chain
data is described by

* the matrix units m_ij = t_i^-1 eps t_j of the k x k block B,
* the field E = QH·eps, identified with Q(zeta_m), m = [H:K], through h·eps -> zeta,
* the subgroup of (Z/m)^x acting on E by conjugation, and twisting units z_s.

Twisting units are looked for in the corner eps·QG·eps, which the map
u -> sum_t t^-1 u t carries isomorphically onto the centralizer of B.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd

import numpy as np

from .algebra import AlgebraElement, corner_basis, inverse_in_corner, span_basis
from .characters import character_field_stabilizer, induce
from .cyclotomic import Cyclotomic, totient, units_mod, prime_factors
from .errors import (
    DimensionMismatch,
    GaloisSizeMismatch,
    MatrixUnitRelationFailed,
    NotInImage,
    TwistingNotTrivialized,
)
from .groups import right_transversal
from .linalg import kernel_basis, solve_linear_system

log = logging.getLogger(__name__)

DEFAULT_HEIGHT_BUDGET = 64
DEFAULT_CANDIDATE_CAP = 20000


# -- small helpers -----------------------------------------------------------

def _element_rows(elements):
    """Columns of a Q-matrix whose j-th column is elements[j] (rows = group elements)."""
    G = elements[0].group
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.den for x in elements), 1)
    cols = [x.num.astype(object) * (den // x.den) for x in elements]
    mat = np.stack(cols, axis=1)
    keep = np.nonzero(np.any(mat != 0, axis=1))[0]
    return [[Fraction(int(v)) for v in mat[i]] for i in keep], keep, den


def _combine(coeffs, elements):
    G = elements[0].group
    out = AlgebraElement.zero(G)
    for c, b in zip(coeffs, elements):
        if c:
            out = out + b.scale(c)
    return out


def _mult_order(s, m):
    if m <= 2:
        return 1
    k, acc = 1, s % m
    while acc != 1:
        acc = acc * s % m
        k += 1
    return k


def _cyclic_decomposition(exps, m):
    """Generators (s, order) of an abelian subgroup of (Z/m)^x, as an internal direct product."""
    group = set(exps)
    if len(group) == 1:
        return []
    gens = []
    covered = {1 % m if m > 1 else 1}
    while len(covered) < len(group):
        best = None
        for s in sorted(group):
            cyc = {pow(s, j, m) for j in range(_mult_order(s, m))}
            if cyc & covered != {1}:
                continue
            if best is None or len(cyc) > best[1]:
                best = (s, len(cyc))
        if best is None:
            return None
        gens.append(best)
        s, d = best
        covered = {(c * pow(s, j, m)) % m for c in covered for j in range(d)}
    return gens


def _int_root(n, d):
    """Exact non-negative integer d-th root of n, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = int(round(n ** (1.0 / d))) if n < 2 ** 1000 else 1 << (n.bit_length() // d)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** d == n:
            return cand
    lo, hi = 0, 1 << (n.bit_length() // d + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid ** d
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def _rational_root(q, d):
    """c in Q with c^d = q, or None."""
    q = Fraction(q)
    if q == 0:
        return None
    sign = 1
    if q < 0:
        if d % 2 == 0:
            return None
        sign, q = -1, -q
    a, b = _int_root(q.numerator, d), _int_root(q.denominator, d)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


def _basic_square_roots(m):
    """Square roots of small rationals that live in Q(zeta_m): (radicand, root)."""
    roots = []
    if m % 4 == 0:
        roots.append((Fraction(-1), Cyclotomic.zeta(m, m // 4)))
    if m % 8 == 0:
        z = Cyclotomic.zeta(m, m // 8)
        roots.append((Fraction(2), z + z.galois(m - 1)))
        roots.append((Fraction(-2), z + z.galois(3)))
    for p in prime_factors(m):
        if p == 2:
            continue
        g = Cyclotomic.zero(m)
        for a in range(1, p):
            leg = pow(a, (p - 1) // 2, p)
            g = g + Cyclotomic.zeta(m, (m // p) * a) * (1 if leg == 1 else -1)
        pstar = p if p % 4 == 1 else -p
        roots.append((Fraction(pstar), g))
    return roots


def norm(x, exps):
    out = Cyclotomic.one(x.conductor)
    for s in exps:
        out = out * x.galois(s)
    return out


def real_place_obstruction(target, exps):
    """True when the norm equation N(x) = target is unsolvable for sign reasons.

    If complex conjugation lies in the group, norms are positive at every real
    place of the fixed field, so a target negative at some place has no solution.
    """
    m = target.conductor
    if m <= 2 or (m - 1) not in set(exps):
        return False
    for t in units_mod(m):
        v = target.galois(t).complex_value()
        if v.real < -1e-9 and abs(v.imag) < 1e-9:
            return True
    return False


def _box(phi, h):
    """Integer vectors of sup-norm exactly h, in a fixed order."""
    for vec in itertools.product(range(-h, h + 1), repeat=phi):
        if max(abs(c) for c in vec) == h:
            yield vec


def norm_candidates(m, budget, cap):
    """Deterministic candidate schedule for norm equations over Q(zeta_m)."""
    seen = 0
    units = [Cyclotomic.zeta(m, i) for i in range(max(m, 1))]
    for u in units:
        yield u
        yield -u
    sq = [r for _, r in _basic_square_roots(m)]
    for k in range(1, len(sq) + 1):
        for combo in itertools.combinations(sq, k):
            s = reduce(lambda a, b: a * b, combo)
            for u in units:
                yield s * u
    phi = totient(m)
    h = 1
    while h <= budget:
        for vec in _box(phi, h):
            seen += 1
            if seen > cap:
                return
            yield Cyclotomic(m, vec)
        h *= 2


def solve_norm_equation(target, exps, budget=DEFAULT_HEIGHT_BUDGET, cap=DEFAULT_CANDIDATE_CAP, limit=1):
    """Up to ``limit`` solutions x of prod_{s in exps} s(x) = target.

    A candidate y is accepted once N(y)/target is a rational d-th power c^d;
    then x = y / c.  Raises TwistingNotTrivialized when nothing is found.
    """
    d = len(exps)
    if real_place_obstruction(target, exps):
        raise TwistingNotTrivialized(
            "norm equation has no solution: target is negative at a real place",
            obstruction="real-place", target=target.to_json(),
        )
    inv_target = target.inverse()
    found, keys = [], set()
    for y in norm_candidates(target.conductor, budget, cap):
        if not y:
            continue
        q = norm(y, exps) * inv_target
        if not q.is_rational():
            continue
        c = _rational_root(q.to_rational(), d)
        if c is None:
            continue
        x = y * (1 / c)
        if x.coeffs in keys:
            continue
        keys.add(x.coeffs)
        found.append(x)
        if len(found) >= limit:
            return found
    if found:
        return found
    raise TwistingNotTrivialized(
        "norm equation search exhausted", obstruction="budget", budget=budget, cap=cap,
        target=target.to_json(),
    )


# -- the component -------------------------------------------------------------

def composite_transversal(chain):
    """T = T_0 T_1 ... T_{n-1}, each T_i a right transversal of C_i in H_{i+1}; identity first."""
    G = chain.tower[0].parent
    parts = [right_transversal(Hn, C).reps for C, Hn in zip(chain.centralizers, chain.tower[1:])]
    return [G.product(*combo) for combo in itertools.product(*parts)]


@dataclass(eq=False)
class ComponentDescriptor:
    classified: object
    e: AlgebraElement
    eps: AlgebraElement
    T: list
    h: int
    conductor: int
    b_matrix_units: dict = field(default_factory=dict, repr=False)
    galois: tuple = ()
    corner_units: dict = field(default_factory=dict, repr=False)
    z_units: dict = field(default_factory=dict, repr=False)
    trivialized: bool = False
    failure: dict = None
    presentation: dict = None
    schur_one_certificate: dict = None

    @property
    def group(self):
        return self.e.group

    @property
    def pair(self):
        return self.classified.pair

    @property
    def chain(self):
        return self.classified.chain

    @property
    def k(self):
        return len(self.T)

    @property
    def kk(self):
        return len(self.galois)

    @property
    def phi(self):
        return totient(self.conductor)

    @property
    def center_dimension(self):
        return self.phi // self.kk

    @property
    def matrix_size(self):
        return self.k * self.kk if self.trivialized else None

    @property
    def contribution(self):
        return self.k * self.k * self.kk * self.phi

    @cached_property
    def h_powers(self):
        G = self.group
        out, acc = [], 0
        for _ in range(max(self.phi, 1)):
            out.append(acc)
            acc = int(G.mul[acc, self.h])
        return out

    @cached_property
    def E_basis(self):
        """h^i eps for 0 <= i < phi(m): the Q-basis of QH·eps matching the power basis of Q(zeta_m)."""
        return [self.eps.translate(left=g) for g in self.h_powers]

    def orbit_sums(self):
        """Exponent orbits {j*s : s in galois}; their zeta-sums span the center over Q."""
        m = self.conductor
        seen, out = set(), []
        for j in range(max(m, 1)):
            if j in seen:
                continue
            orb = sorted({(j * s) % m for s in self.galois}) if m > 1 else [0]
            seen |= set(orb)
            out.append(orb)
        return out

    # E <-> QG ------------------------------------------------------------
    def corner_element(self, x):
        """x in Q(zeta_m) realized inside QH·eps."""
        x = _as_conductor(x, self.conductor)
        return _combine(x.coeffs, self.E_basis) if any(x.coeffs) else AlgebraElement.zero(self.group)

    def corner_coords(self, y):
        """Inverse of corner_element; NotInImage if y is not in QH·eps."""
        if y.is_zero():
            return Cyclotomic.zero(self.conductor)
        basis = self.E_basis
        rows, keep, den = _element_rows(basis)
        full = np.zeros(self.group.order, dtype=bool)
        full[keep] = True
        if np.any((y.num != 0) & ~full):
            raise NotInImage("element is not in the image of E")
        rhs = [Fraction(int(y.num[i]) * den, y.den) for i in keep]
        sol = solve_linear_system(rows, rhs)
        if sol is None:
            raise NotInImage("element is not in the image of E")
        x = Cyclotomic(self.conductor, sol)
        if self.corner_element(x) != y:
            raise NotInImage("element is not in the image of E")
        return x

    def project(self, u):
        """sum_t t^-1 u t: corner eps·QG·eps -> centralizer of B."""
        out = AlgebraElement.zero(self.group)
        for t in self.T:
            out = out + u.conjugate_by(t)
        return out

    def embed_E(self, x):
        y = self.project(self.corner_element(x))
        for mu in self.b_matrix_units.values():
            if mu * y != y * mu:
                raise MatrixUnitRelationFailed("embedded field element does not commute with B")
        return y

    def extract_E(self, y):
        x = self.corner_coords(self.eps * y * self.eps)
        if self.embed_E(x) != y:
            raise NotInImage("element is not in the image of E")
        return x

    def describe(self):
        out = {
            "pair": self.pair.describe(),
            "chain": self.chain.describe(),
            "k": self.k,
            "kk": self.kk,
            "m": self.matrix_size,
            "center": {
                "conductor": self.conductor,
                "dimension": self.center_dimension,
                "galois": list(self.galois),
                "orbit_sums": self.orbit_sums(),
            },
            "trivialized": self.trivialized,
            "contribution": self.contribution,
            "shape": component_shape(self),
        }
        if self.failure:
            out["failure"] = self.failure
        if self.presentation:
            out["cyclic_presentation"] = self.presentation
        return out


def _as_conductor(x, m):
    if not isinstance(x, Cyclotomic):
        return Cyclotomic.rational(x, m)
    if x.conductor == m:
        return x
    if m % x.conductor == 0:
        return x.lift(m)
    if x.is_rational():
        return Cyclotomic.rational(x.to_rational(), m)
    raise NotInImage(f"element of conductor {x.conductor} is not in Q(zeta_{m})")


def component_shape(comp):
    dimF = comp.center_dimension
    F = "Q" if dimF == 1 else f"F{dimF}(zeta_{comp.conductor})"
    if comp.trivialized:
        n = comp.matrix_size
        return F if n == 1 else f"M{n}({F})"
    inner = f"cyclic algebra of degree {comp.kk} over {F}"
    return inner if comp.k == 1 else f"M{comp.k}({inner})"


# -- construction --------------------------------------------------------------

def build_b_matrix_units(comp):
    G = comp.group
    T = comp.T
    inv = [int(G.inv[t]) for t in T]
    units = {}
    for i, ti in enumerate(T):
        for j, tj in enumerate(T):
            units[(i, j)] = comp.eps.translate(left=inv[i], right=tj)
    k = len(T)
    zero = AlgebraElement.zero(G)
    for (i, j), a in units.items():
        for (p, l), b in units.items():
            want = units[(i, l)] if j == p else zero
            if a * b != want:
                raise MatrixUnitRelationFailed("m_ij m_kl != delta_jk m_il", indices=[i, j, p, l])
    total = zero
    for i in range(k):
        total = total + units[(i, i)]
    if total != comp.e:
        raise MatrixUnitRelationFailed("diagonal matrix units do not sum to e")
    comp.b_matrix_units = units
    return units


def _twisting_space(comp, s):
    """Solutions u in eps·QG·eps of h u = u h^s."""
    G = comp.group
    basis = corner_basis(comp.eps)
    hl = comp.h
    hs = G.power(comp.h, s)
    vecs = [b.translate(left=hl) - b.translate(right=hs) for b in basis]
    if all(v.is_zero() for v in vecs):
        return list(basis)
    rows, _, _ = _element_rows(vecs)
    ker = kernel_basis(rows)
    return span_basis([_combine(v, basis) for v in ker])


def _invertible_solution(comp, sols):
    for u in sols:
        if inverse_in_corner(comp.eps, u) is not None:
            return u
    coeffs = [c for c in range(-2, 3) if c]
    for r in (2, 3):
        for idx in itertools.combinations(range(len(sols)), r):
            for cs in itertools.product(coeffs, repeat=r):
                u = _combine(cs, [sols[i] for i in idx])
                if not u.is_zero() and inverse_in_corner(comp.eps, u) is not None:
                    return u
    return None


def compute_galois_group(comp):
    """Exponents s admitting an invertible corner solution of h u = u h^s."""
    m = comp.conductor
    if m <= 2:
        comp.galois = (1,)
        comp.corner_units = {1: comp.eps}
        if comp.chain.kk != 1:
            raise GaloisSizeMismatch("|Galois group| differs from the chain value", found=1, expected=comp.chain.kk)
        return comp.galois
    found = {}
    for s in units_mod(m):
        sols = _twisting_space(comp, s)
        if not sols:
            continue
        if len(sols) != comp.phi:
            raise GaloisSizeMismatch("twisting solution space has unexpected dimension", s=s, dim=len(sols))
        u = _invertible_solution(comp, sols)
        if u is None:
            raise GaloisSizeMismatch("no invertible twisting unit found", s=s)
        found[s] = u
    comp.galois = tuple(sorted(found))
    comp.corner_units = found
    if len(found) != comp.chain.kk:
        raise GaloisSizeMismatch("|Galois group| differs from the chain value", found=len(found), expected=comp.chain.kk)
    chi = induce(comp.pair.witness_character, comp.group.whole)
    stab = sorted(a.exponent for a in character_field_stabilizer(chi))
    if stab != list(comp.galois):
        raise GaloisSizeMismatch("Galois group differs from the stabilizer of the character values")
    return comp.galois


def find_twisting_units(comp):
    """Raw (untrivialized) twisting units, carried into the component."""
    if not comp.corner_units:
        compute_galois_group(comp)
    return {s: comp.project(u) for s, u in comp.corner_units.items()}


def _check_action(comp, s, u):
    m = comp.conductor
    for i, b in enumerate(comp.E_basis):
        target = comp.corner_element(Cyclotomic.zeta(m, i).galois(s)) if m > 2 else b
        if b * u != u * target:
            return False
    return True


def _verify_cocycle(comp, units):
    m = comp.conductor
    for s, u in units.items():
        if not _check_action(comp, s, u):
            raise MatrixUnitRelationFailed("twisting unit does not realize its automorphism", s=s)
    for s, a in units.items():
        for t, b in units.items():
            st = (s * t) % m if m > 2 else 1
            if a * b != units[st]:
                return False
    return True


def trivialize_twisting(comp, budget=DEFAULT_HEIGHT_BUDGET, cap=DEFAULT_CANDIDATE_CAP):
    """Rescale twisting units by field elements so that s -> z_s is multiplicative."""
    if not comp.corner_units:
        compute_galois_group(comp)
    m = comp.conductor
    eps = comp.eps
    if len(comp.galois) == 1:
        units = {1: eps}
    else:
        gens = _cyclic_decomposition(comp.galois, m)
        if gens is None:
            raise TwistingNotTrivialized("could not split the Galois group into cyclic factors")
        choices = []
        for s, d in gens:
            u = comp.corner_units[s]
            a = comp.corner_coords(u ** d * eps)
            sub = [pow(s, j, m) for j in range(d)]
            if len(gens) == 1:
                xs = solve_norm_equation(a.inverse(), sub, budget, cap, limit=1)
            else:
                xs = solve_norm_equation(a.inverse(), sub, budget, cap, limit=6)
            choices.append([(comp.corner_element(x) * u) for x in xs])
            comp.presentation = comp.presentation or {}
            comp.presentation[str(s)] = {"order": d, "a": a.to_json()}
        units = None
        for combo in itertools.islice(itertools.product(*choices), cap):
            ok = all(p * q == q * p for p, q in itertools.combinations(combo, 2))
            if not ok:
                continue
            units = {}
            for exps in itertools.product(*(range(d) for _, d in gens)):
                key, val = 1, eps
                for (s, _), e_j, v in zip(gens, exps, combo):
                    key = key * pow(s, e_j, m) % m
                    for _ in range(e_j):
                        val = val * v
                units[key] = val
            if _verify_cocycle(comp, units):
                break
            units = None
        if units is None:
            raise TwistingNotTrivialized("no compatible rescaling of the twisting units found", cap=cap)
    if not _verify_cocycle(comp, units):
        raise TwistingNotTrivialized("rescaled twisting units are not multiplicative")
    comp.corner_units = units
    comp.z_units = {s: comp.project(u) for s, u in units.items()}
    for s, z in comp.z_units.items():
        for mu in comp.b_matrix_units.values():
            if mu * z != z * mu:
                raise MatrixUnitRelationFailed("twisting unit does not centralize B", s=s)
    comp.trivialized = True
    comp.schur_one_certificate = {"dimension": comp.contribution, "matrix_size": comp.matrix_size}
    return True


def build_component(classified, budget=DEFAULT_HEIGHT_BUDGET, cap=DEFAULT_CANDIDATE_CAP, trivialize=True):
    """Full component data. Trivialization failure is recorded, not raised."""
    pair, chain = classified.pair, classified.chain
    e = classified.idempotent
    T = composite_transversal(chain)
    if len(T) != chain.k:
        raise MatrixUnitRelationFailed("transversal size differs from k", size=len(T), k=chain.k)
    comp = ComponentDescriptor(
        classified=classified, e=e, eps=pair.epsilon, T=T,
        h=pair.witness_character.generator, conductor=pair.index,
    )
    build_b_matrix_units(comp)
    compute_galois_group(comp)
    if trivialize:
        try:
            trivialize_twisting(comp, budget, cap)
        except TwistingNotTrivialized as err:
            comp.failure = {"reason": err.reason, "message": str(err), **err.details}
            log.info("component %s left untrivialized: %s", component_shape(comp), err)
    return comp


@dataclass(eq=False)
class ComponentStructure:
    """Dimension data only (no matrix units); used for large groups."""

    classified: object
    k: int
    kk: int
    conductor: int
    galois: tuple

    @property
    def phi(self):
        return totient(self.conductor)

    @property
    def center_dimension(self):
        return self.phi // self.kk

    @property
    def matrix_size(self):
        return self.k * self.kk

    @property
    def contribution(self):
        return self.k * self.k * self.kk * self.phi

    def describe(self):
        return {
            "pair": self.classified.pair.describe(),
            "chain": self.classified.chain.describe(),
            "k": self.k,
            "kk": self.kk,
            "m": self.matrix_size,
            "center": {"conductor": self.conductor, "dimension": self.center_dimension, "galois": list(self.galois)},
            "contribution": self.contribution,
        }


def component_structure(classified):
    pair, chain = classified.pair, classified.chain
    chi = induce(pair.witness_character, pair.group.whole)
    stab = tuple(sorted(a.exponent for a in character_field_stabilizer(chi)))
    if len(stab) != chain.kk:
        raise GaloisSizeMismatch("stabilizer size differs from the chain value", found=len(stab), expected=chain.kk)
    return ComponentStructure(classified, chain.k, chain.kk, pair.index, stab)


def wedderburn_summary(report, components):
    """Per-component rows and the total dimension; checks the total against |G| when covered."""
    rows = [c.describe() for c in components]
    total = sum(c.contribution for c in components)
    G = report.group
    if report.covered and total != G.order:
        raise DimensionMismatch("component dimensions do not add up to |G|", total=total, order=G.order)
    return {
        "group_order": G.order,
        "verdict": report.verdict,
        "all_strong": report.all_strong,
        "components": rows,
        "total_dimension": total,
    }
