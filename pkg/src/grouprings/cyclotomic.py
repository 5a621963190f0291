"""Elements of Q(zeta_n) in the power basis modulo the n-th cyclotomic polynomial."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import ConductorMismatch, DivisionByZero


def lcm(a, b):
    return a * b // gcd(a, b)


def totient(n):
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def units_mod(n):
    return [k for k in range(1, n + 1) if gcd(k, n) == 1] if n > 1 else [1]


def _poly_divmod_monic(num, den):
    """Integer polynomial division by a monic polynomial; coefficient lists low degree first."""
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    return tuple(poly)


@lru_cache(maxsize=None)
def zeta_powers(n):
    """Power-basis coordinates (integers) of zeta_n^j for j in range(n)."""
    phi = totient(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    for j in range(n):
        if j < phi:
            v = [0] * phi
            v[j] = 1
        else:
            _, rem = _poly_divmod_monic([0] * j + [1], poly)
            v = list(rem) + [0] * (phi - len(rem))
        rows.append(tuple(v))
    return tuple(rows)


def _reduce_exponent_vector(n, counts):
    """Coordinates of sum_j counts[j] zeta^j (counts indexed mod n)."""
    table = zeta_powers(n)
    phi = len(table[0])
    out = [0] * phi
    for j, c in enumerate(counts):
        if c:
            row = table[j % n]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


class Cyclotomic:
    """An element of Q(zeta_n); ``coeffs[i]`` is the coordinate of zeta_n^i."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor, coeffs):
        phi = totient(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) > phi:
            coeffs = tuple(_reduce_fraction_vector(conductor, coeffs))
        elif len(coeffs) < phi:
            coeffs = coeffs + (Fraction(0),) * (phi - len(coeffs))
        self.conductor = conductor
        self.coeffs = coeffs
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, n=1):
        return cls(n, ())

    @classmethod
    def one(cls, n=1):
        return cls(n, (1,))

    @classmethod
    def rational(cls, q, n=1):
        return cls(n, (Fraction(q),))

    @classmethod
    def zeta(cls, n, j=1):
        return cls(n, zeta_powers(n)[j % n])

    @classmethod
    def from_exponents(cls, n, counts):
        """sum_j counts[j] * zeta_n^j for integer counts."""
        return cls(n, _reduce_exponent_vector(n, counts))

    # structure
    def lift(self, m):
        """Same number written in conductor m (a multiple of the current conductor)."""
        n = self.conductor
        if m == n:
            return self
        if m % n:
            raise ConductorMismatch(f"cannot lift conductor {n} to {m}")
        step = m // n
        vec = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            vec[i * step] = c
        return Cyclotomic(m, _reduce_fraction_vector(m, vec))

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        m = lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coeffs[0]

    def is_integral_coords(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self.coeffs))
        return self._hash

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.conductor}^{i}")
        return " + ".join(terms) or "0"

    # arithmetic
    def __add__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, [x * other for x in self.coeffs])
        a, b = self._common(other)
        n = a.conductor
        raw = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[(i + j) % n] += x * y
        return Cyclotomic(n, _reduce_fraction_vector(n, raw))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero cyclotomic")
        n = self.conductor
        if self.is_rational():
            return Cyclotomic.rational(1 / self.coeffs[0], n)
        from .linalg import solve_linear_system

        phi = len(self.coeffs)
        # column i: self * zeta^i
        cols = [(self * Cyclotomic.zeta(n, i)).coeffs for i in range(phi)]
        A = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        rhs = [Fraction(1)] + [Fraction(0)] * (phi - 1)
        sol = solve_linear_system(A, rhs)
        if sol is None:
            raise DivisionByZero("singular multiplication matrix")
        inv = Cyclotomic(n, sol)
        assert self * inv == 1
        return inv

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return Cyclotomic(self.conductor, [x / other for x in self.coeffs])
        a, b = self._common(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.rational(other, self.conductor) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Cyclotomic.one(self.conductor), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k):
        """Apply zeta -> zeta^k."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise ConductorMismatch(f"exponent {k} not a unit mod {n}")
        raw = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if c:
                raw[(i * k) % n] += c
        return Cyclotomic(n, _reduce_fraction_vector(n, raw))

    def complex_value(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(float(c) * z ** i for i, c in enumerate(self.coeffs))

    def to_json(self):
        return {
            "conductor": self.conductor,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data):
        return cls(int(data["conductor"]), [Fraction(int(a), int(b)) for a, b in data["coeffs"]])


def _reduce_fraction_vector(n, raw):
    table = zeta_powers(n)
    phi = len(table[0])
    out = [Fraction(0)] * phi
    for j, c in enumerate(raw):
        if c:
            row = table[j % n]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


@dataclass(frozen=True)
class GaloisAutomorphism:
    conductor: int
    exponent: int

    def __post_init__(self):
        e = self.exponent % self.conductor if self.conductor > 1 else 1
        if gcd(e, self.conductor) != 1:
            raise ConductorMismatch(f"{self.exponent} is not a unit mod {self.conductor}")
        object.__setattr__(self, "exponent", e)

    def __call__(self, x):
        return galois_apply(self, x)

    def compose(self, other):
        """(self o other)(x) = self(other(x))"""
        if other.conductor != self.conductor:
            raise ConductorMismatch("conductors differ")
        return GaloisAutomorphism(self.conductor, self.exponent * other.exponent)

    def is_identity(self):
        return self.exponent == 1 % self.conductor or self.conductor <= 2


def galois_apply(sigma, x):
    if x.conductor != sigma.conductor:
        if sigma.conductor % x.conductor == 0:
            x = x.lift(sigma.conductor)
        else:
            raise ConductorMismatch(f"automorphism of conductor {sigma.conductor} on element of {x.conductor}")
    return x.galois(sigma.exponent)


def trace_and_norm(x, subgroup):
    subgroup = list(subgroup)
    n = subgroup[0].conductor if subgroup else x.conductor
    tr = Cyclotomic.zero(n)
    nm = Cyclotomic.one(n)
    for s in subgroup:
        y = galois_apply(s, x)
        tr = tr + y
        nm = nm * y
    return tr, nm


def rational_or_none(x):
    return x.coeffs[0] if x.is_rational() else None
