import pytest

from monosoergel import polymatrix as pm
from monosoergel.bimodule import bott_samelson, generic_decompose
from monosoergel.charring import LaurentPoly, e
from monosoergel.fields import FieldSpec, QQ
from monosoergel.rootdata import preset
from monosoergel.soergel import (
    basis_check,
    block_idempotents,
    build_big_bimodule,
    candidates,
    embedding_matrix,
    end_check,
    find_wall_point,
    localized_split_check,
    pi1_report,
    ses_rank1,
    steinberg_basis,
    steinberg_candidate,
)
from monosoergel.walls import fixed_locus

F5 = FieldSpec(5)

PGL3_BASIS = [(0, 0), (-1, 1), (1, -1), (0, -1), (-1, 0), (-1, -1)]


def test_pgl2_basis(pgl2):
    b = steinberg_basis(pgl2)
    assert b.verified and b.source == "formula/right"
    assert b.exponents == [(0,), (-1,)]


def test_pgl3_basis_uses_left_descents(pgl3):
    right = steinberg_candidate(pgl3, "right")
    assert len(set(right)) < len(right)
    assert not basis_check(pgl3, right)
    b = steinberg_basis(pgl3)
    assert (b.source, b.exponents) == ("formula/left", PGL3_BASIS)
    assert [w.name() for w, _ in b.entries] == ["1", "s1", "s2", "s1s2", "s2s1", "s1s2s1"]


@pytest.mark.parametrize("field", [QQ, F5])
def test_pgl3_certificate(pgl3, field):
    cert = basis_check(pgl3, PGL3_BASIS, field)
    assert cert and cert.independent and cert.determinant


def test_b2_basis():
    b = steinberg_basis(preset("B2"))
    assert b.source == "formula/left"
    assert b.exponents == [(0, 0), (-1, 2), (1, -1), (1, -2), (-1, 1), (-1, 0), (0, -1), (-1, -1)]


def test_negative_control_has_witness(pgl2):
    cert = basis_check(pgl2, [(0,), (2,)])
    assert not cert and cert.independent
    assert cert.numerator == e((-1,)) - e((1,))
    assert cert.denominator == e((-2,)) - e((2,))
    assert "not in R" in cert.witness
    assert not basis_check(pgl2, [(0,)])
    assert "singular" in basis_check(pgl2, [(1,), (1,)]).witness


def test_steinberg_needs_adjoint(sl2):
    with pytest.raises(ValueError):
        steinberg_basis(sl2)


def test_big_bimodule_embedding(pgl3):
    big = build_big_bimodule(pgl3)
    assert big.inner.rank == 6
    assert pm.mat_eq(big.embedding, embedding_matrix(pgl3, PGL3_BASIS, QQ))
    # the embedding intertwines the left action with the graph actions on prod_w R_w
    for i, L in enumerate(big.inner.left_action):
        lam = tuple(int(i == j) for j in range(2))
        diag = tuple(
            tuple(e(pgl3.inverse(w)(lam)) if r == c else LaurentPoly.zero(2) for c in range(6))
            for r, w in enumerate(pgl3.weyl)
        )
        assert pm.mat_eq(pm.matmul(big.embedding, L), pm.matmul(diag, big.embedding))
    assert all(c.is_intertwiner() for c in candidates(big))
    assert generic_decompose(big.inner) == {w: 1 for w in pgl3.weyl}


def test_big_bimodule_matches_bs_in_rank_one(pgl2):
    big = build_big_bimodule(pgl2)
    assert generic_decompose(big.inner) == generic_decompose(bott_samelson(pgl2, [0]))


def test_end_check_pgl2(pgl2):
    rep = end_check(pgl2, 3)
    assert rep.passed
    assert rep.data["bounded_solutions"] == 12
    assert rep.data["candidate_rank"] == 2


def test_end_check_pgl2_over_f5(pgl2):
    assert end_check(pgl2, 2, F5).passed


def test_block_idempotents_pgl3(pgl3):
    big = build_big_bimodule(pgl3)
    for b in range(3):
        ok, mats = block_idempotents(big, b)
        assert ok and len(mats) == 3


@pytest.mark.parametrize("name", ["PGL2", "PGL3", "B2"])
@pytest.mark.parametrize("field", [QQ, FieldSpec(7)])
def test_ses_rank1(name, field):
    d = preset(name)
    for s in range(d.rank):
        seq = ses_rank1(d, s, field)
        assert seq.report.passed, seq.report.to_dict()
        assert seq.report.data["generic_ranks"] == [1, 2, 1]


def test_wall_points(pgl3):
    assert find_wall_point(pgl3, 0) == (-1, 1)
    assert find_wall_point(pgl3, (1, 1)) == (-1, -1)


def test_split_pgl2_nonsplit(pgl2):
    rep = localized_split_check(pgl2, [0], 0)
    assert rep.passed
    (blk,) = rep.data["blocks"]
    assert (blk["eigen_dim"], blk["generalized_dim"], blk["split"]) == (1, 2, False)


def test_split_pgl3_at_given_point(pgl3):
    rep = localized_split_check(pgl3, [0, 1, 0], 0, chi=(3, 9))
    assert rep.passed
    dims = [(b["block"], b["generalized_dim"], b["eigen_dim"]) for b in rep.data["blocks"]]
    assert dims == [(["1", "s1"], 4, 2), (["s2", "s2s1"], 2, 1), (["s1s2", "s1s2s1"], 2, 1)]


def test_split_rejects_point_off_wall(pgl3):
    rep = localized_split_check(pgl3, [0, 1, 0], 0, chi=(2, 3))
    assert not rep.passed


def test_pi1_sl2(pgl2):
    plain = {(p.w.name(), p.v.name()): p for p in pi1_report(pgl2, [[1]])}
    assert plain[("1", "s1")].invariant_factors == (2,) and plain[("1", "s1")].points == 2
    modified = {(p.w.name(), p.v.name()): p for p in pi1_report(pgl2, [[2]])}
    assert modified[("1", "s1")].points == 1
    for w in ("1", "s1"):
        assert modified[(w, w)].free_rank == 1 and modified[(w, w)].points is None


@pytest.mark.parametrize("name", ["PGL3", "B2"])
def test_pi1_trivial_sublattice_recovers_fixed_loci(name):
    d = preset(name)
    n = d.lattice_rank
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    for p in pi1_report(d, ident):
        fl = fixed_locus(d, d.mul(d.inverse(p.w), p.v))
        assert (p.free_rank, p.invariant_factors) == (fl.free_rank, fl.invariant_factors)


def test_pi1_validation(pgl2, sl2):
    with pytest.raises(ValueError):
        pi1_report(sl2, [[1]])
    with pytest.raises(ValueError):
        pi1_report(pgl2, [[0]])
    with pytest.raises(ValueError):
        pi1_report(pgl2, [[1, 0]])
