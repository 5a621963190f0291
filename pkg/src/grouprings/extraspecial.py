"""The groups P ⋊ D_{2^n} with P extraspecial of order p^3 and exponent p.

P is modelled on triples (alpha, beta, gamma) standing for y^alpha z^beta x^gamma,
with [y, z] = x central.  a acts by y -> y^k, z -> z^q (kq = 1 mod p) and b by
x -> x^-1, y -> z^-1, z -> y^-1.  G is realised as permutations of P: the
elements of P act by right multiplication, a and b as automorphisms.
"""

from __future__ import annotations

import itertools

from .errors import ParameterInvalid
from .groups import group_from_permutation_generators


def _two_part(n):
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return e


def _element_of_order(p, order):
    for k in range(2, p):
        acc, j = k, 1
        while acc != 1:
            acc = acc * k % p
            j += 1
        if j == order:
            return k
    raise ParameterInvalid("no element of the requested order", p=p, order=order)


def heisenberg_dihedral(p=5):
    if p % 4 != 1 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ParameterInvalid("p must be a prime congruent to 1 mod 4", p=p)
    n = _two_part(p - 1) + 1
    k = _element_of_order(p, 2 ** (n - 1))
    q = pow(k, -1, p)

    def mul(u, v):
        # z^b y^a' = y^a' z^b x^(-a' b)
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] - v[0] * u[1]) % p)

    def power(u, e):
        out = (0, 0, 0)
        for _ in range(e % p):
            out = mul(out, u)
        return out

    def inv(u):
        return power(u, p - 1)

    y, z, x = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    points = list(itertools.product(range(p), repeat=3))
    index = {u: i for i, u in enumerate(points)}

    def from_images(iy, iz, ix):
        def theta(u):
            return mul(mul(power(iy, u[0]), power(iz, u[1])), power(ix, u[2]))
        return theta

    theta1 = from_images(power(y, k), power(z, q), x)
    theta2 = from_images(inv(z), inv(y), inv(x))
    comm = mul(mul(inv(y), inv(z)), mul(y, z))
    if comm != x:
        raise AssertionError("model does not satisfy [y, z] = x")
    for th in (theta1, theta2):
        for u in points:
            for v in points:
                if th(mul(u, v)) != mul(th(u), th(v)):
                    raise AssertionError("action is not an automorphism")

    def right(g):
        return [index[mul(u, g)] for u in points]

    def auto(th):
        return [index[th(u)] for u in points]

    perms = [right(x), right(y), right(z), auto(theta1), auto(theta2)]
    G = group_from_permutation_generators(perms, labels=["x", "y", "z", "a", "b"], name=f"P{p}xD{2 ** n}")
    if G.order != p ** 3 * 2 ** n:
        raise AssertionError("unexpected group order")
    G.family = {"p": p, "n": n, "r": 1, "k": k, "q": q}
    return G
