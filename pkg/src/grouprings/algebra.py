"""Exact arithmetic in the rational group algebra QG.

An element is stored as an integer numerator vector over the group elements
together with one positive common denominator, kept in lowest terms.  The
``coeffs`` view is the sparse mapping element -> Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np

from .errors import GroupMismatch, NotAnIdempotent, NotNormal
from .groups import generate, is_normal_in
from .linalg import bareiss_echelon, solve_linear_system

_INT64_SAFE = 2 ** 62


def _vec_gcd(num):
    if num.dtype == object:
        return reduce(gcd, (int(x) for x in num if x), 0)
    nz = num[num != 0]
    if nz.size == 0:
        return 0
    return int(np.gcd.reduce(np.abs(nz)))


def _max_abs(num):
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max((abs(int(x)) for x in num), default=0)
    return int(np.abs(num).max())


def _to_small(num):
    """Shrink an object vector back to int64 when it fits."""
    if num.dtype == object and _max_abs(num) < _INT64_SAFE:
        return num.astype(np.int64)
    return num


class AlgebraElement:
    __slots__ = ("group", "num", "den", "_key")

    def __init__(self, group, num, den=1):
        if num.dtype != object:
            num = num.astype(np.int64, copy=False)
        g = _vec_gcd(num)
        if g == 0:
            den = 1
        else:
            g = gcd(g, den)
            if g > 1:
                num = num // g
                den //= g
        if den < 0:
            num, den = -num, -den
        self.group = group
        self.num = _to_small(num)
        self.den = int(den)
        self._key = None

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, G):
        return cls(G, np.zeros(G.order, dtype=np.int64))

    @classmethod
    def one(cls, G):
        return cls.basis(G, 0)

    @classmethod
    def basis(cls, G, g, coeff=1):
        q = Fraction(coeff)
        num = np.zeros(G.order, dtype=np.int64)
        num[int(g)] = q.numerator
        return cls(G, num, q.denominator)

    @classmethod
    def from_dict(cls, G, coeffs):
        coeffs = {int(k): Fraction(v) for k, v in coeffs.items() if Fraction(v)}
        den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in coeffs.values()), 1)
        big = any(abs(v.numerator) * (den // v.denominator) >= _INT64_SAFE for v in coeffs.values())
        num = np.zeros(G.order, dtype=object if big else np.int64)
        for k, v in coeffs.items():
            if not 0 <= k < G.order:
                raise GroupMismatch(f"element index {k} out of range")
            num[k] = v.numerator * (den // v.denominator)
        return cls(G, num, den)

    @classmethod
    def from_elements(cls, G, elements, coeff=1):
        num = np.zeros(G.order, dtype=np.int64)
        np.add.at(num, np.asarray(list(elements), dtype=np.int64), 1)
        q = Fraction(coeff)
        return cls(G, num * q.numerator, q.denominator)

    # views ----------------------------------------------------------------
    @property
    def coeffs(self):
        return {int(i): Fraction(int(self.num[i]), self.den) for i in np.nonzero(self.num)[0]}

    def coefficient(self, g):
        return Fraction(int(self.num[g]), self.den)

    def support(self):
        return [int(i) for i in np.nonzero(self.num)[0]]

    def is_zero(self):
        return not self.num.any()

    def __bool__(self):
        return not self.is_zero()

    def is_integral(self):
        return self.den == 1

    def key(self):
        if self._key is None:
            self._key = (self.den, tuple(int(x) for x in self.num))
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.basis(self.group, 0, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return self.den == other.den and np.array_equal(self.num, other.num)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        items = sorted(self.coeffs.items())
        if len(items) > 8:
            return f"AlgebraElement(support={len(items)}, den={self.den})"
        return "AlgebraElement(" + " + ".join(f"{v}*[{k}]" for k, v in items) + ")"

    def _check(self, other):
        if other.group is not self.group:
            raise GroupMismatch("elements live in different group algebras")

    # arithmetic -----------------------------------------------------------
    def _aligned(self, other):
        d = self.den * other.den // gcd(self.den, other.den)
        a = self.num * (d // self.den) if d != self.den else self.num
        b = other.num * (d // other.den) if d != other.den else other.num
        bound = _max_abs(self.num) * (d // self.den) + _max_abs(other.num) * (d // other.den)
        if bound >= _INT64_SAFE:
            a = self.num.astype(object) * (d // self.den)
            b = other.num.astype(object) * (d // other.den)
        return a, b, d

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.basis(self.group, 0, other)
        self._check(other)
        a, b, d = self._aligned(other)
        return AlgebraElement(self.group, a + b, d)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.group, -self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.basis(self.group, 0, other)
        self._check(other)
        a, b, d = self._aligned(other)
        return AlgebraElement(self.group, a - b, d)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q):
        q = Fraction(q)
        num = self.num
        if _max_abs(num) * abs(q.numerator) >= _INT64_SAFE:
            num = num.astype(object)
        return AlgebraElement(self.group, num * q.numerator, self.den * q.denominator)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        return AlgebraElement(self.group, _convolve(self.group, self.num, other.num), self.den * other.den)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        result, base = AlgebraElement.one(self.group), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate_by(self, g):
        """g^-1 x g"""
        G = self.group
        out = np.zeros_like(self.num)
        out[G.conj_table[g]] = self.num
        return AlgebraElement(G, out, self.den)

    def translate(self, left=None, right=None):
        """left * self * right for group elements left, right."""
        G = self.group
        num = self.num
        idx = np.arange(G.order)
        if left is not None:
            out = np.zeros_like(num)
            out[G.mul[int(left), idx]] = num
            num = out
        if right is not None:
            out = np.zeros_like(num)
            out[G.mul[idx, int(right)]] = num
            num = out
        return AlgebraElement(G, num, self.den)

    def augmentation(self):
        return Fraction(int(self.num.sum()), self.den)

    def to_json(self):
        return {"coeffs": {str(k): [str(v.numerator), str(v.denominator)] for k, v in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, G, data):
        coeffs = data["coeffs"] if "coeffs" in data else data
        return cls.from_dict(G, {int(k): Fraction(int(a), int(b)) for k, (a, b) in coeffs.items()})


def _convolve(G, x, y):
    """(x*y)[t] = sum_g x[g] y[g^-1 t]"""
    nz = np.nonzero(x)[0]
    if nz.size == 0:
        return np.zeros(G.order, dtype=np.int64)
    bound = _max_abs(x) * _max_abs(y) * nz.size
    if bound < _INT64_SAFE:
        xs = x[nz].astype(np.int64)
        ys = y.astype(np.int64)
        return (xs[:, None] * ys[G.ldiv[nz]]).sum(axis=0)
    xs = x[nz].astype(object)
    ys = y.astype(object)
    out = np.zeros(G.order, dtype=object)
    for c, g in zip(xs, nz):
        out += c * ys[G.ldiv[g]]
    return out


# -- idempotents from sections -----------------------------------------------

def hat(H):
    """H^ = (1/|H|) sum of the elements of H."""
    return AlgebraElement.from_elements(H.parent, H.members, Fraction(1, H.order))


def minimal_normal_oversubgroups(H, K):
    """Normal subgroups of H minimal among those properly containing K."""
    from .groups import normal_closure

    G = H.parent
    candidates = {}
    for x in H.members:
        if x in K:
            continue
        L = normal_closure(G, generate(G, list(K.generators) + [x]), within=H)
        candidates[L.mask] = L
    cands = list(candidates.values())
    minimal = [L for L in cands if not any(M < L for M in cands)]
    return sorted(minimal, key=lambda L: L.sort_key())


def epsilon(H, K):
    """eps(H,K): K^ if H = K, else the product of (K^ - L^) over minimal normal L."""
    if not is_normal_in(K, H):
        raise NotNormal("K is not normal in H")
    Khat = hat(K)
    if H == K:
        return Khat
    result = None
    for L in minimal_normal_oversubgroups(H, K):
        factor = Khat - hat(L)
        result = factor if result is None else result * factor
    assert is_idempotent(result)
    return result


def distinct_conjugates(x, ambient):
    """Distinct conjugates g^-1 x g for g in ambient, with the first g realizing each."""
    seen = {}
    for g in ambient.members:
        y = x.conjugate_by(g)
        k = y.key()
        if k not in seen:
            seen[k] = (g, y)
    return list(seen.values())


def centralizer_of_element(x, ambient):
    """Elements g of ambient with g^-1 x g = x (a subgroup)."""
    from .groups import Subgroup

    G = x.group
    ok = [g for g in ambient.members if np.array_equal(x.num[G.conj_table[g]], x.num)]
    return Subgroup(G, ok)


def e_sum_of_conjugates(G, H, K):
    """e(G,H,K): sum of the distinct G-conjugates of eps(H,K).  Not always idempotent."""
    eps = epsilon(H, K)
    total = AlgebraElement.zero(G)
    for _, y in distinct_conjugates(eps, G.whole):
        total = total + y
    return total


def is_idempotent(x):
    return x * x == x


def is_central(x, within=None):
    G = x.group
    gens = within.generators if within is not None else G.generators
    return all(np.array_equal(x.num[G.conj_table[g]], x.num) for g in gens)


def are_orthogonal(x, y):
    return (x * y).is_zero() and (y * x).is_zero()


def _int_rows(elements):
    """Integer row vectors with the same Q-span as the given elements."""
    return [[int(v) for v in x.num] for x in elements]


def span_basis(elements):
    """A Q-basis (as AlgebraElements) of the span of the elements, in echelon form."""
    elements = [x for x in elements if not x.is_zero()]
    if not elements:
        return []
    G = elements[0].group
    E, piv, _ = bareiss_echelon(_int_rows(elements), G.order)
    return [AlgebraElement(G, np.array(E[i], dtype=object)) for i in range(len(piv))]


def corner_dimension(e, f):
    """dim_Q(f QG f) as the rank of {f g f}."""
    if not is_idempotent(e) or not is_idempotent(f):
        raise NotAnIdempotent("corner_dimension needs idempotents")
    if f * e != f:
        raise NotAnIdempotent("f does not lie under e")
    G = f.group
    fg = [f * AlgebraElement.basis(G, g) * f for g in range(G.order)]
    return len(span_basis(fg))


_corner_cache = {}


def corner_basis(e, subgroup=None):
    """Echelon basis of e QS e (S = whole group unless given)."""
    G = e.group
    S = subgroup.members if subgroup is not None else range(G.order)
    key = (id(G), e.key(), tuple(S) if subgroup is not None else None)
    if key not in _corner_cache:
        _corner_cache[key] = span_basis([e * AlgebraElement.basis(G, g) * e for g in S])
    return _corner_cache[key]


def inverse_in_corner(e, x, subgroup=None):
    """y in e QG e with x y = e (and y x = e), or None if x is singular in the corner."""
    if not is_idempotent(e):
        raise NotAnIdempotent("corner identity must be idempotent")
    G = e.group
    if subgroup is None and e == AlgebraElement.one(G):
        subgroup = generate(G, x.support())
    basis = corner_basis(e, subgroup)
    if not basis:
        return None
    cols = [x * b for b in basis]
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.den for c in cols), e.den)
    A = [[Fraction(int(c.num[t]) * (den // c.den), den) for c in cols] for t in range(G.order)]
    rhs = [Fraction(int(e.num[t]), e.den) for t in range(G.order)]
    # keep only rows that matter
    rows = [i for i in range(G.order) if rhs[i] or any(r for r in A[i])]
    sol = solve_linear_system([A[i] for i in rows], [rhs[i] for i in rows])
    if sol is None:
        return None
    y = AlgebraElement.zero(G)
    for c, b in zip(sol, basis):
        if c:
            y = y + b.scale(c)
    if x * y != e or y * x != e:
        return None
    return y
