from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from silting import linalg as la
from silting.linalg import GF, QQ

FIELDS = [GF(2), GF(3), GF(7), QQ]


@st.composite
def matrices(draw, field=None, max_rows=5, max_cols=5):
    F = field or draw(st.sampled_from(FIELDS))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    if F.p is None:
        vals = draw(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=r * c, max_size=r * c))
    else:
        vals = draw(st.lists(st.integers(0, F.p - 1), min_size=r * c, max_size=r * c))
    return F, F.array(np.array(vals, dtype=object).reshape(r, c))


@given(matrices())
def test_rank_nullity(fm):
    F, m = fm
    k = la.kernel_basis(m, F)
    assert la.rank(m, F) + k.shape[1] == m.shape[1]
    if m.shape[0] and k.size:
        assert la.is_zero(F.matmul(m, k))


@given(matrices())
def test_rref_is_idempotent(fm):
    F, m = fm
    r, piv = la.rref(m, F)
    r2, piv2 = la.rref(r, F)
    assert np.array_equal(r, r2) and piv == piv2


@given(matrices(), st.data())
def test_solve_consistent_systems(fm, data):
    F, m = fm
    if m.shape[1] == 0:
        return
    x = F.array(np.array(data.draw(st.lists(st.integers(0, 5), min_size=m.shape[1], max_size=m.shape[1])), dtype=object))
    rhs = F.matmul(m, x)
    sol = la.solve(m, rhs, F)
    assert sol is not None
    assert np.array_equal(F.matmul(m, sol), rhs)


@given(matrices(max_rows=4, max_cols=4))
def test_inverse_when_invertible(fm):
    F, m = fm
    if m.shape[0] != m.shape[1] or la.rank(m, F) < m.shape[0]:
        return
    inv = la.inverse(m, F)
    assert np.array_equal(F.matmul(inv, m), F.eye(m.shape[0]))


@given(matrices())
def test_quotient_basis_is_a_section(fm):
    F, m = fm
    n = m.shape[0]
    proj, lift = la.quotient_basis(m, n, F)
    assert proj.shape[0] == n - la.rank(m, F)
    if proj.shape[0]:
        assert np.array_equal(F.matmul(proj, lift), F.eye(proj.shape[0]))
        if m.size:
            assert la.is_zero(F.matmul(proj, m))


@settings(max_examples=50)
@given(matrices(field=GF(5), max_rows=4, max_cols=4))
def test_batch_invertible_matches_rank(fm):
    F, m = fm
    if m.shape[0] != m.shape[1]:
        return
    ok = la.batch_invertible(m[None], F)[0]
    assert bool(ok) == (la.rank(m, F) == m.shape[0])


def test_scalar_parsing():
    assert GF(7).scalar("1/2") == 4
    assert QQ.scalar("-3/6") == Fraction(-1, 2)
    with pytest.raises(ZeroDivisionError):
        GF(3).scalar("1/3")


def test_inconsistent_system_has_no_solution():
    F = GF(2)
    m = F.array([[1, 0], [1, 0]])
    assert la.solve(m, F.array([1, 0]), F) is None
