from fractions import Fraction

from hypothesis import given, strategies as st

from tropquartic.lp import maximize


def test_textbook_optimum():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18
    r = maximize([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert r.status == "optimal"
    assert r.value == 36
    assert r.x == [2, 6]


def test_exact_fractions():
    r = maximize([1, 1], [[3, 1], [1, 3]], [1, 1])
    assert r.value == Fraction(1, 2)
    assert r.x == [Fraction(1, 4), Fraction(1, 4)]


def test_infeasible():
    # x <= -1 with x >= 0
    assert maximize([1], [[1]], [-1]).status == "infeasible"


def test_unbounded():
    assert maximize([1, 0], [[-1, 1]], [1]).status == "unbounded"


def test_phase_one_feasible():
    # x >= 2 written as -x <= -2, x <= 5
    r = maximize([-1], [[-1], [1]], [-2, 5])
    assert r.status == "optimal" and r.x == [2] and r.value == -2


small = st.integers(-5, 5)


@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=5),
       st.lists(st.integers(0, 8), min_size=5, max_size=5), st.lists(small, min_size=2, max_size=2))
def test_solution_is_feasible_and_not_beaten_on_grid(A, b, c):
    b = b[:len(A)]
    r = maximize(c, A, b)
    if r.status != "optimal":
        return
    x = r.x
    assert all(v >= 0 for v in x)
    assert all(sum(a * v for a, v in zip(row, x)) <= bi for row, bi in zip(A, b))
    assert r.value == sum(ci * v for ci, v in zip(c, x))
    # no feasible grid point does better
    for i in range(0, 9):
        for j in range(0, 9):
            p = (Fraction(i, 2), Fraction(j, 2))
            if all(sum(a * v for a, v in zip(row, p)) <= bi for row, bi in zip(A, b)):
                assert c[0] * p[0] + c[1] * p[1] <= r.value
