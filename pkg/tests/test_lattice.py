import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from monosoergel.fields import FieldSpec, QQ
from monosoergel.lattice import cokernel, integer_kernel, smith_normal_form
from monosoergel import linalg, polymatrix
from monosoergel.charring import LaurentPoly, NotDivisible, e

matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def mm(a, b):
    return [list(r) for r in oracles.matmul(a, b)]


@given(matrices)
def test_smith_form_is_a_factorisation(a):
    snf = smith_normal_form(a)
    assert mm(mm(snf.U, a), snf.V) == [list(r) for r in snf.D]
    assert abs(oracles.det(snf.U)) == 1 and abs(oracles.det(snf.V)) == 1
    diag = snf.diagonal
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    for i, row in enumerate(snf.D):
        for j, x in enumerate(row):
            assert i == j or x == 0


@given(matrices)
def test_kernel_is_kernel(a):
    ker = integer_kernel(a)
    n = len(a[0])
    assert len(ker) == n - smith_normal_form(a).rank
    for v in ker:
        assert all(sum(x * y for x, y in zip(r, v)) == 0 for r in a)


@given(st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=2), min_size=2, max_size=2))
def test_cokernel_order_is_determinant(a):
    d = oracles.det(a)
    c = cokernel(a)
    if d:
        assert c.free_rank == 0 and c.torsion_order == oracles.group_order_torsion(a)
    else:
        assert c.free_rank >= 1


def test_cokernel_examples():
    c = cokernel([[2, 0], [0, 3]])
    assert c.invariant_factors == (6,)
    assert c.image([1, 0])[1] != (0,)
    assert c.image([2, 3])[1] == (0,)
    c = cokernel([[2], [0]])
    assert c.free_rank == 1 and c.invariant_factors == (2,)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rank_and_nullspace_over_q_and_fp(a):
    for field in (QQ, FieldSpec(5)):
        rows = [[field(x) for x in r] for r in a]
        r = linalg.rank(rows, field)
        ns = linalg.nullspace(rows, field, 3)
        assert r + len(ns) == 3
        for v in ns:
            assert all(field.reduce(sum(x * y for x, y in zip(row, v))) == 0 for row in rows)
    assert (linalg.rank(a, QQ) == 3) == (oracles.det(a) != 0)


def polymat(entries, n=1):
    return tuple(tuple(LaurentPoly(x, n) for x in r) for r in entries)


def test_polymatrix_det_matches_cofactor():
    a = polymat([[{(1,): 1, (0,): 1}, {(2,): 1}, {(0,): 3}],
                 [{(-1,): 1}, {(0,): 1}, {(1,): -1}],
                 [{(0,): 2}, {(1,): 1, (-1,): 1}, {(0,): 1}]])
    assert polymatrix.det(a) == oracles.det(a)


def test_polymatrix_inverse_and_solve():
    one = LaurentPoly.one(1)
    a = ((e((1,)), one), (LaurentPoly.zero(1), e((-2,))))
    inv = polymatrix.inverse(a)
    assert polymatrix.mat_eq(polymatrix.matmul(a, inv), polymatrix.identity(2, 1, QQ))
    b = ((one + one,), (one,))
    x = polymatrix.solve_exact(a, b)
    assert polymatrix.mat_eq(polymatrix.matmul(a, x), b)


def test_solve_exact_reports_witness():
    one = LaurentPoly.one(1)
    a = ((e((1,)) - one,),)
    with pytest.raises(NotDivisible) as info:
        polymatrix.solve_exact(a, ((one,),))
    assert info.value.denominator == e((1,)) - one
    with pytest.raises(NotDivisible):
        polymatrix.inverse(a)
