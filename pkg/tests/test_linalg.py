from fractions import Fraction
from itertools import permutations

from hypothesis import given, settings, strategies as st

from grouprings.cyclotomic import Cyclotomic
from grouprings.linalg import determinant, kernel_basis, rank, solve_linear_system

i = Cyclotomic.zeta(4)


def leibniz(A):
    n = len(A)
    total = Fraction(0)
    for p in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if p[a] > p[b]:
                    sign = -sign
        term = Fraction(sign)
        for r in range(n):
            term *= A[r][p[r]]
        total += term
    return total


def matmul(A, x):
    return [sum((a * v for a, v in zip(row, x)), 0 * x[0]) for row in A]


def test_small_systems():
    assert solve_linear_system([[1, 0], [0, 1]], [3, 4]) == [3, 4]
    assert solve_linear_system([[1, 1], [1, -1]], [2, 0]) == [1, 1]
    assert solve_linear_system([[1, 1], [1, 1]], [1, 2]) is None


def test_gaussian_integer_system():
    A = [[1 + i, 1 - i], [1 - i, 1 + i]]
    b = [Cyclotomic.rational(2, 4), 2 * i]
    x = solve_linear_system(A, b)
    assert x == [Cyclotomic.zero(4), 1 + i]


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_determinant_matches_leibniz(A):
    assert determinant(A) == leibniz(A)


@settings(max_examples=120, deadline=None)
@given(matrices, st.data())
def test_solutions_satisfy_the_system(A, data):
    n = len(A)
    b = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    x = solve_linear_system(A, b)
    if leibniz(A) != 0:
        assert x is not None
    if x is not None:
        assert matmul(A, x) == [Fraction(v) for v in b]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_nullity(A):
    ker = kernel_basis(A)
    assert rank(A) + len(ker) == len(A[0])
    for v in ker:
        assert all(c == 0 for c in matmul(A, v))
