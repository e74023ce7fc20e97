from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from monosoergel.charring import (
    LaurentPoly,
    NotDivisible,
    WallFraction,
    box,
    demazure,
    e,
    orbit_sum,
    rs_decompose,
    selfadjoint_matrix,
)
from monosoergel.fields import FieldSpec, QQ
from monosoergel.rootdata import preset

F5 = FieldSpec(5)


def polys(nvars, radius=2, field=QQ):
    terms = st.dictionaries(
        st.tuples(*[st.integers(-radius, radius)] * nvars), st.integers(-4, 4), max_size=5
    )
    return terms.map(lambda t: LaurentPoly(t, nvars, field))


def as_plain(f):
    return {k: int(v) for k, v in f.terms.items()}


@given(polys(2), polys(2))
def test_multiplication_matches_dict_oracle(f, g):
    assert as_plain(f * g) == oracles.poly_mul(as_plain(f), as_plain(g))
    assert as_plain(f - g) == oracles.poly_add(as_plain(f), as_plain(g), -1)


@given(polys(2), polys(2), polys(2))
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f


@given(polys(2), st.tuples(st.integers(1, 4), st.integers(1, 4)))
def test_evaluate_is_a_homomorphism(f, chi):
    g = f * f + f
    assert g.evaluate(chi) == oracles.poly_eval(as_plain(g), chi)
    assert (f * f).evaluate(chi) == f.evaluate(chi) ** 2


@given(polys(2), polys(2))
def test_exact_div_recovers_factor(f, g):
    if not g:
        return
    assert (f * g).exact_div(g) == f


def test_exact_div_witness():
    one = LaurentPoly.one(1)
    with pytest.raises(NotDivisible):
        (e((1,)) + one).exact_div(e((1,)) - one)


@pytest.mark.parametrize("name", ["PGL2", "PGL3", "B2", "G2"])
def test_weyl_action_is_ring_automorphism(name):
    d = preset(name)
    n = d.lattice_rank
    f = LaurentPoly({(1,) + (0,) * (n - 1): 2, (0,) * (n - 1) + (-1,): 1}, n)
    g = LaurentPoly({(0,) * n: 1, (1,) * n: -3}, n)
    for w in d.weyl:
        assert (f * g).act(w) == f.act(w) * g.act(w)


def test_pgl2_demazure_examples(pgl2):
    one = LaurentPoly.one(1)
    assert demazure(pgl2, 0, one) == LaurentPoly.zero(1)
    assert demazure(pgl2, 0, e((1,))) == one
    assert demazure(pgl2, 0, e((-1,))) == -one
    assert demazure(pgl2, 0, e((2,))) == e((1,)) + e((-1,))


@pytest.mark.parametrize("name", ["PGL2", "PGL3", "B2"])
@given(data=st.data())
def test_demazure_properties(name, data):
    d = preset(name)
    n = d.lattice_rank
    f = data.draw(polys(n))
    s = data.draw(st.integers(0, d.rank - 1))
    refl = d.simple_reflections[s]
    df = demazure(d, s, f)
    assert df.act(refl) == df
    a = orbit_sum(d, (1,) + (0,) * (n - 1))
    # invariants factor out
    assert demazure(d, s, a * f) == a * df
    assert demazure(d, s, df) == LaurentPoly.zero(n)
    lo, hi = rs_decompose(d, s, f)
    assert lo.act(refl) == lo and hi.act(refl) == hi
    assert lo + e(d.fundamental_coweight(s)) * hi == f


def test_demazure_rejects_non_adjoint(sl2):
    with pytest.raises(ValueError):
        demazure(sl2, 0, e((1,)))


@pytest.mark.parametrize("field", [QQ, F5])
def test_selfadjoint_determinant(pgl2, pgl3, field):
    for d in (pgl2, pgl3):
        for s in range(d.rank):
            m = selfadjoint_matrix(d, s, field)
            w = d.fundamental_coweight(s)
            sw = d.simple_reflections[s](w)
            det = oracles.det(m)
            total = tuple(a + b for a, b in zip(w, sw))
            assert det == LaurentPoly({total: -1}, d.lattice_rank, field)
            assert det.is_unit()
            assert m[0][0] == LaurentPoly.one(d.lattice_rank, field)


def test_box():
    assert box(1, 1) == [(-1,), (0,), (1,)]
    assert len(box(2, 2)) == 25


def test_orbit_sum_invariant(pgl3):
    f = orbit_sum(pgl3, (1, 0))
    assert len(f.terms) == 3
    assert all(f.act(w) == f for w in pgl3.weyl)


def test_prime_field_arithmetic():
    f = LaurentPoly({(1,): 3}, 1, F5)
    assert (f + f).terms == {(1,): 1}
    assert f.evaluate([2]) == 1
    assert LaurentPoly.from_dict(f.to_dict(), 1, F5) == f


def test_field_parsing():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("F7") == FieldSpec(7)
    assert FieldSpec.parse("5") == F5
    with pytest.raises(ValueError):
        FieldSpec.parse("F6")
    assert QQ("1/2") == Fraction(1, 2)


class TestWallFraction:
    def test_arithmetic_and_reduction(self):
        beta = (1,)
        wp = WallFraction.wall_poly(beta, QQ)
        x = WallFraction(wp * e((2,)), {beta: 1})
        assert x.as_poly() == e((2,))
        inv = WallFraction.inverse_wall(beta)
        assert (inv * wp).as_poly() == LaurentPoly.one(1)
        assert inv + inv == WallFraction(LaurentPoly.const(2, 1), {beta: 1})

    def test_allowed_wall_is_never_inverted(self):
        with pytest.raises(ValueError):
            WallFraction(LaurentPoly.one(1), {(1,): 1}, allowed=(1,))
        with pytest.raises(ValueError):
            WallFraction(LaurentPoly.one(1), {(-1,): 1}, allowed=(1,))

    def test_genuine_denominator(self):
        with pytest.raises(NotDivisible):
            WallFraction.inverse_wall((1,)).as_poly()

    def test_evaluate(self):
        x = WallFraction(e((1,)), {(1,): 1})
        assert x.evaluate([3]) == Fraction(3, 2)
        with pytest.raises(ZeroDivisionError):
            x.evaluate([1])

    def test_roundtrip(self):
        x = WallFraction(e((1, -1)) + LaurentPoly.one(2), {(1, 1): 2}, allowed=(1, -1))
        assert WallFraction.from_dict(x.to_dict(), 2, QQ, (1, -1)) == x
