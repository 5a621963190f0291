"""Complete sets of orthogonal primitive idempotents and matrix units of a component.

Everything is assembled inside the corner eps·QG·eps (where eps plays the role
of the identity) and then moved to the other diagonal blocks by t^-1 (.) t'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraElement, are_orthogonal, corner_dimension, inverse_in_corner, is_idempotent
from .cyclotomic import Cyclotomic, totient
from .errors import BudgetExceeded, MatrixUnitRelationFailed, SchurIndexNotOne, SingularSystem, VerificationFailed
from .linalg import determinant, solve_linear_system

NORMAL_ELEMENT_BUDGET = 5000


@dataclass(eq=False)
class PrimitiveIdempotentSet:
    component: object
    members: dict
    alpha: AlgebraElement
    e_hat: AlgebraElement
    normal_element: Cyclotomic
    corner_pieces: dict = field(default_factory=dict, repr=False)

    def labels(self):
        return list(self.members)

    def to_json(self):
        return {
            "members": [
                {"t": self.component.T[a], "sigma": s, "value": f.to_json()}
                for (a, s), f in self.members.items()
            ],
            "normal_element": self.normal_element.to_json(),
        }


def b_idempotents(comp):
    """t^-1 eps t for t in T (the diagonal of the block B)."""
    out = [comp.b_matrix_units[(i, i)] for i in range(comp.k)]
    total = AlgebraElement.zero(comp.group)
    for a, x in enumerate(out):
        total = total + x
        for y in out[a + 1:]:
            if not are_orthogonal(x, y):
                raise MatrixUnitRelationFailed("conjugates of eps are not orthogonal")
    if total != comp.e:
        raise MatrixUnitRelationFailed("conjugates of eps do not add up to e")
    return out


def galois_matrix(w, exps):
    """Row j, column i: sigma_i(sigma_j(w))."""
    return [[w.galois(sj).galois(si) for si in exps] for sj in exps]


def is_normal_element(w, exps):
    if len(exps) == 1:
        return bool(w)
    return bool(determinant(galois_matrix(w, exps)))


def normal_element_candidates(m):
    """zeta, 1 + zeta, zeta^j, zeta^j + zeta^l, then small integer combinations."""
    z = [Cyclotomic.zeta(m, j) for j in range(m)]
    yield z[1 % m]
    yield z[0] + z[1 % m]
    for j in range(2, m):
        yield z[j]
    for j, l in itertools.combinations(range(m), 2):
        yield z[j] + z[l]
    phi = totient(m)
    for h in (1, 2):
        for vec in itertools.product(range(-h, h + 1), repeat=phi):
            if max(abs(c) for c in vec) == h:
                yield Cyclotomic(m, vec)


def find_normal_element(m, exps, budget=NORMAL_ELEMENT_BUDGET):
    """First candidate w in Q(zeta_m) whose conjugates under ``exps`` are independent."""
    if len(exps) == 1:
        return Cyclotomic.one(m)
    for n, w in enumerate(normal_element_candidates(m)):
        if n >= budget:
            break
        if is_normal_element(w, exps):
            return w
    raise BudgetExceeded("no normal element found in the candidate schedule", budget=budget)


def _require_trivialized(comp):
    if not comp.trivialized:
        raise SchurIndexNotOne(
            "component is not known to be a matrix algebra over its center",
            shape=comp.describe()["shape"],
        )


def solve_alpha(comp, w):
    """alpha = sum_i alpha_i z_i with the alpha_i solving the normal-element system (in the corner)."""
    _require_trivialized(comp)
    exps = list(comp.galois)
    if len(exps) == 1:
        return comp.eps
    A = galois_matrix(w, exps)
    rhs = [sum((w.galois(s) for s in exps), Cyclotomic.zero(w.conductor))]
    rhs += [w - w.galois(sj) for sj in exps[1:]]
    sol = solve_linear_system(A, rhs)
    if sol is None:
        raise SingularSystem("normal-element system has no solution")
    # z_s satisfies z_s^-1 x z_s = s(x), so z_s x z_s^-1 = s(x) holds for z_{s^-1};
    # the system is written for the latter convention.
    m = comp.conductor
    alpha = AlgebraElement.zero(comp.group)
    for a_i, s in zip(sol, exps):
        if a_i:
            alpha = alpha + comp.corner_element(a_i) * comp.corner_units[pow(s, -1, m)]
    if inverse_in_corner(comp.eps, alpha) is None:
        raise SingularSystem("alpha is not invertible")
    return alpha


def _corner_pieces(comp, alpha):
    """(z_i^-1 alpha^-1 E^ , alpha z_i) for each sigma_i; their products give the corner units."""
    eps = comp.eps
    kk = comp.kk
    e_hat = AlgebraElement.zero(comp.group)
    for u in comp.corner_units.values():
        e_hat = e_hat + u
    e_hat = e_hat.scale(Fraction(1, kk))
    if not is_idempotent(e_hat):
        raise VerificationFailed("E^ is not idempotent")
    alpha_inv = inverse_in_corner(eps, alpha)
    left, right = {}, {}
    for s, u in comp.corner_units.items():
        u_inv = inverse_in_corner(eps, u)
        if u_inv is None:
            raise VerificationFailed("twisting unit is not invertible", s=s)
        left[s] = u_inv * alpha_inv * e_hat
        right[s] = alpha * u
    return e_hat, left, right


def _check_members(comp, members):
    vals = list(members.values())
    G = comp.group
    total = AlgebraElement.zero(G)
    for a, x in enumerate(vals):
        if not is_idempotent(x):
            raise VerificationFailed("member is not idempotent")
        total = total + x
        for y in vals[a + 1:]:
            if not are_orthogonal(x, y):
                raise VerificationFailed("members are not orthogonal")
    if total != comp.e:
        raise VerificationFailed("members do not add up to e")
    H = comp.pair.H
    if len(vals) != G.order // H.order:
        raise VerificationFailed("number of members differs from [G:H]", count=len(vals))
    dimF = comp.center_dimension
    for x in vals:
        if corner_dimension(comp.e, x) != dimF:
            raise VerificationFailed("member is not primitive (corner dimension)", expected=dimF)


def primitive_idempotent_set(comp, w=None, check=True):
    _require_trivialized(comp)
    if w is None:
        w = find_normal_element(comp.conductor, comp.galois)
    alpha = solve_alpha(comp, w)
    e_hat, left, right = _corner_pieces(comp, alpha)
    G = comp.group
    members = {}
    for a, t in enumerate(comp.T):
        t_inv = int(G.inv[t])
        for s in comp.galois:
            f = (left[s] * right[s]).translate(left=t_inv, right=t)
            members[(a, s)] = f
    pis = PrimitiveIdempotentSet(comp, members, alpha, e_hat, w, {"left": left, "right": right})
    if check:
        _check_members(comp, members)
    return pis


def matrix_units(comp, pis=None, check=True):
    """E_{(t,i),(t',i')} = t^-1 z_i^-1 alpha^-1 E^ eps alpha z_i' t', keyed by ((a,s),(b,r))."""
    if pis is None:
        pis = primitive_idempotent_set(comp, check=check)
    G = comp.group
    left, right = pis.corner_pieces["left"], pis.corner_pieces["right"]
    labels = pis.labels()
    units = {}
    for (a, s) in labels:
        t_inv = int(G.inv[comp.T[a]])
        for (b, r) in labels:
            units[((a, s), (b, r))] = (left[s] * right[r]).translate(left=t_inv, right=comp.T[b])
    if check:
        verify_matrix_units(units, labels, comp.e)
        for lab in labels:
            if units[(lab, lab)] != pis.members[lab]:
                raise MatrixUnitRelationFailed("diagonal differs from the primitive idempotents")
    return units


def verify_matrix_units(units, labels, e):
    G = e.group
    zero = AlgebraElement.zero(G)
    for (a, b), x in units.items():
        for (c, d), y in units.items():
            want = units[(a, d)] if b == c else zero
            if x * y != want:
                raise MatrixUnitRelationFailed("E_ab E_cd != delta_bc E_ad", a=str(a), b=str(b), c=str(c), d=str(d))
    total = zero
    for lab in labels:
        total = total + units[(lab, lab)]
    if total != e:
        raise MatrixUnitRelationFailed("diagonal matrix units do not add up to e")
    return True
