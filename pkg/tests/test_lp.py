from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hellylab import lp
from hellylab.errors import InfeasibleError, SizeLimitError

import oracles

F = Fraction


def test_small_standard_form():
    # min -x - y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
    res = lp.solve_standard([[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [-1, -1, 0, 0])
    assert res.status == lp.OPTIMAL
    assert res.value == F(-14, 5)
    assert res.x[:2] == [F(8, 5), F(6, 5)]
    # dual objective b.y equals the primal optimum
    assert 4 * res.y[0] + 6 * res.y[1] == res.value


def test_infeasible_and_unbounded():
    assert lp.solve_standard([[1, 1]], [-1], [1, 1]).status == lp.INFEASIBLE
    assert lp.solve_standard([[1, -1]], [0], [-1, 0]).status == lp.UNBOUNDED


def test_redundant_rows():
    res = lp.solve_standard([[1, 1], [2, 2]], [1, 2], [1, 2])
    assert res.status == lp.OPTIMAL and res.value == 1


def test_feasible_point():
    x = lp.feasible_point([[1, 1, 1]], [F(1, 3)])
    assert x is not None and sum(x) == F(1, 3)
    assert lp.feasible_point([[1, 1]], [-1]) is None


def test_triangle_covering():
    M = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    sol = lp.solve_covering(M)
    lp.check_covering_certificate(M, sol)
    assert sol.value == sol.dual_value == F(3, 2)


def test_zero_row_is_infeasible():
    with pytest.raises(InfeasibleError):
        lp.solve_covering([[0, 0], [1, 0]])


def test_variable_limit():
    with pytest.raises(SizeLimitError):
        lp.solve_standard([[1] * 5], [1], [1] * 5, limit=4)


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_covering_duality_against_float_solver(rows, cols, data):
    M = [data.draw(st.lists(st.integers(0, 1), min_size=cols, max_size=cols)) for _ in range(rows)]
    for i, row in enumerate(M):
        if not any(row):
            row[data.draw(st.integers(0, cols - 1))] = 1
    sol = lp.solve_covering(M)
    lp.check_covering_certificate(M, sol)
    assert sol.value == sol.dual_value
    hits = [[M[t][c] for t in range(rows)] for c in range(cols)]
    assert abs(float(sol.value) - oracles.lp_float(hits)) < 1e-7
