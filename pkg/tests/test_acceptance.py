"""Acceptance battery: twelve exact checks, each with a wall-clock limit.

Run with pytest (a summary line per criterion is printed at the end) or
directly with ``python tests/test_acceptance.py``.
"""

import itertools
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from monosoergel.bimodule import (  # noqa: E402
    BimoduleMap,
    bott_samelson,
    fraction_field_rank,
    generic_decompose,
    hom_bounded,
    span_membership,
)
from monosoergel import polymatrix as pm  # noqa: E402
from monosoergel.charring import LaurentPoly, selfadjoint_matrix  # noqa: E402
from monosoergel.fields import FieldSpec, QQ  # noqa: E402
from monosoergel.hecke import delta_char_bott_samelson, localized_block, subword_char  # noqa: E402
from monosoergel.rootdata import adjoint_of, preset  # noqa: E402
from monosoergel.soergel import (  # noqa: E402
    basis_check,
    end_check,
    localized_split_check,
    pi1_report,
    ses_rank1,
    steinberg_basis,
)
from monosoergel.walls import fixed_locus, fq_point_count, point_label, separation_check  # noqa: E402

F5, F7 = FieldSpec(5), FieldSpec(7)
RESULTS: dict = {}


# -- shared pieces, parametrised by the coefficient field ---------------------


def separation_summary(field):
    out = {}
    for name in ("PGL2", "PGL3"):
        d = preset(name)
        for c in d.positive_coroots:
            r = separation_check(d, c.coroot, field)
            assert r.passed, (name, c.coroot, [v.reason() for v in r.violations])
            out[(name, c.coroot)] = "pass"
    sl2 = preset("SL2")
    r = separation_check(sl2, 0, field)
    assert not r.passed and len(r.violations) == 1
    (v,) = r.violations
    assert v.u.name() == "s1" and v.u.length == 1
    comps = r.components_of(v.u)
    labels = sorted(point_label(c.phases) for c in comps)
    assert labels == ["(-1)", "(1)"]
    assert sum(not c.on_allowed_wall for c in comps) == 1
    assert point_label(v.phases) == "(-1)"
    out["SL2"] = (v.u.name(), tuple(labels), point_label(v.phases))
    return out


def splitting_summary(field):
    d = preset("PGL3")
    out = {}
    for c in d.positive_coroots:
        r = separation_check(d, c.coroot, field)
        t = c.reflection
        for p in r.pairs:
            if p.u != t:
                assert not p.survivors, (p.w.name(), p.v.name())
        assert r.pairing() == {frozenset({w, d.mul(w, t)}) for w in d.weyl}
        for blk in r.blocks:
            for w, v in itertools.product(blk, blk):
                assert localized_block(d, w, v, c.coroot)
        out[c.coroot] = sorted(sorted(w.name() for w in b) for b in r.blocks)
    return out


def point_count_summary(qs, field=QQ):
    out = {}
    for name in ("PGL2", "SL2", "PGL3"):
        d = preset(name)
        for u in d.weyl:
            fl = fixed_locus(d, u, field)
            for q in qs:
                formula, brute = fq_point_count(d, u, q)
                assert formula == brute == oracles.fixed_point_count(u.matrix, q), (name, u, q)
                out[(name, u.name(), q)] = formula
            out[(name, u.name())] = (fl.free_rank, fl.invariant_factors)
    return out


def character_summary(field):
    out = {}
    for name in ("PGL2", "PGL3"):
        d = preset(name)
        for r in range(5):
            for word in itertools.product(range(d.rank), repeat=r):
                char = delta_char_bott_samelson(d, word)
                assert char == subword_char(d, word)
                assert char.mass == 2 ** r
                assert generic_decompose(bott_samelson(d, word, field, check=False)) == char, word
                out[(name, word)] = tuple(char.by_name().items())
    return out


# -- criteria -------------------------------------------------------------------


def criterion_1():
    d = preset("PGL2")
    b = bott_samelson(d, [0])
    sols = hom_bounded(b, b, 3)
    assert fraction_field_rank([[x for r in s.matrix for x in r] for s in sols], QQ, 1, d) == 2
    ident = BimoduleMap(b, b, pm.identity(2, 1, QQ))
    lw = BimoduleMap(b, b, b.left_action[0])
    for s in sols:
        assert s.is_intertwiner()
        assert span_membership(s, [ident, lw], d)


def criterion_2():
    for name in ("PGL2", "PGL3"):
        d = preset(name)
        for s in range(d.rank):
            w = d.fundamental_coweight(s)
            sw = d.simple_reflections[s](w)
            expected = LaurentPoly({tuple(a + b for a, b in zip(w, sw)): -1}, d.lattice_rank)
            m = selfadjoint_matrix(d, s)
            assert pm.det(m) == expected == oracles.det(m)


def criterion_3():
    separation_summary(QQ)


def criterion_4():
    splitting_summary(QQ)


def criterion_5():
    point_count_summary((3, 4, 5, 7, 8, 9))


def criterion_6():
    character_summary(QQ)


def criterion_7():
    for name in ("PGL2", "PGL3"):
        d = preset(name)
        b = steinberg_basis(d)
        assert b.verified and len(b.exponents) == len(d.weyl)
        assert basis_check(d, b.exponents)
    neg = basis_check(preset("PGL2"), [(0,), (2,)])
    assert not neg and neg.numerator is not None and neg.denominator is not None
    assert not neg.denominator.divides(neg.numerator)


def criterion_8():
    for name, box in (("PGL2", 3), ("PGL3", 2)):
        d = preset(name)
        rep = end_check(d, box)
        assert rep.passed, rep.to_dict()
        assert rep.data["candidate_rank"] == len(d.weyl)


def criterion_9():
    for name in ("PGL2", "PGL3"):
        d = preset(name)
        for s in range(d.rank):
            seq = ses_rank1(d, s)
            assert seq.report.passed
            assert seq.report.data["generic_ranks"] == [1, 2, 1]


def criterion_10():
    d = preset("PGL3")
    rep = localized_split_check(d, [0, 1, 0], 0, chi=(3, 9))
    assert rep.passed, rep.to_dict()
    s1 = d.simple_reflections[0]
    cosets = {frozenset({w.name(), d.mul(w, s1).name()}) for w in d.weyl}
    assert {frozenset(b["block"]) for b in rep.data["blocks"]} == cosets


def criterion_11():
    sl2 = preset("SL2")
    ad = adjoint_of(sl2)
    unmod = {(p.w.name(), p.v.name()): p for p in pi1_report(ad, [[1]])}
    mod = {(p.w.name(), p.v.name()): p for p in pi1_report(ad, [list(r) for r in sl2.to_adjoint])}
    for key in (("1", "s1"), ("s1", "1")):
        assert (unmod[key].free_rank, unmod[key].invariant_factors) == (0, (2,))
        assert (mod[key].free_rank, mod[key].invariant_factors) == (0, ())


def criterion_12():
    base = (separation_summary(QQ), splitting_summary(QQ), character_summary(QQ))
    counts = point_count_summary((3, 4, 5, 7, 8, 9))
    for field, qs in ((F5, (5, 25)), (F7, (7, 49))):
        assert separation_summary(field) == base[0]
        assert splitting_summary(field) == base[1]
        assert character_summary(field) == base[2]
        over_p = point_count_summary(qs, field)
        for key, val in over_p.items():
            if len(key) == 2:
                assert counts[key] == val


CRITERIA = [
    (1, "rank-one endomorphisms of B_s", criterion_1, 1),
    (2, "self-adjunction determinant", criterion_2, 1),
    (3, "wall separation and the SL2 example", criterion_3, 1),
    (4, "coherent splitting on PGL3", criterion_4, 5),
    (5, "fixed-point counts vs brute force", criterion_5, 10),
    (6, "Bott-Samelson characters", criterion_6, 30),
    (7, "Steinberg basis and negative control", criterion_7, 10),
    (8, "bounded endomorphism containment", criterion_8, 600),
    (9, "rank-one exact sequence", criterion_9, 1),
    (10, "localized splitting at (3, 9)", criterion_10, 5),
    (11, "non-adjoint modification", criterion_11, 1),
    (12, "prime-field reruns of 3-6", criterion_12, 60),
]


def run_criterion(num, fn, limit):
    start = time.perf_counter()
    err = None
    try:
        fn()
    except Exception as exc:  # recorded and re-raised by the caller
        err = exc
    elapsed = time.perf_counter() - start
    if err is None and elapsed >= limit:
        err = AssertionError(f"took {elapsed:.2f}s, limit {limit}s")
    RESULTS[num] = (err is None, elapsed, limit, err)
    return err


def summary_lines():
    out = []
    for num, title, _, _ in CRITERIA:
        if num not in RESULTS:
            continue
        ok, elapsed, limit, err = RESULTS[num]
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s of {limit}s) {title}"
        if err is not None:
            line += f" -- {type(err).__name__}: {err}"
        out.append(line)
    return out


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit):
    err = run_criterion(num, fn, limit)
    if err is not None:
        raise err


if __name__ == "__main__":
    for num, _, fn, limit in CRITERIA:
        run_criterion(num, fn, limit)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(r[0] for r in RESULTS.values()) else 1)
