"""Steinberg bases, the big bimodule R (x)_{R^W} R and endomorphism checks.

R (x)_{R^W} R is realised inside prod_w R_w: ``f (x) g`` has w-component
``w^{-1}(f) g``, matching the graph convention of :mod:`bimodule`. A monomial
family e^{lambda_j} (x) 1 gives the |W| x |W| matrix S with rows indexed by w
and entries e^{w^{-1} lambda_j}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import hecke, linalg
from . import polymatrix as pm
from .bimodule import (
    BimoduleMap,
    MatrixBimodule,
    NotInSpan,
    SeparatingPoint,
    bott_samelson,
    fraction_field_rank,
    generic_decompose,
    graph_bimodule,
    hom_bounded,
    span_membership,
)
from .charring import LaurentPoly, NotDivisible, WallFraction, e
from .fields import QQ, FieldSpec
from .lattice import cokernel, integer_kernel
from .rootdata import RootDatum, WeylElement
from .walls import separation_check, wall_vector

SEARCH_RADIUS = 1


@dataclass
class SteinbergBasis:
    entries: list  # of (WeylElement, lattice vector)
    verified: bool = False
    source: str = "formula/right"

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        return [lam for _, lam in self.entries]


@dataclass(frozen=True)
class BasisCertificate:
    ok: bool
    determinant: LaurentPoly | None = None
    independent: bool = False
    witness: str = ""
    numerator: LaurentPoly | None = None
    denominator: LaurentPoly | None = None

    def __bool__(self):
        return self.ok


def _unit(n, i, sign=1):
    return tuple(sign * int(i == j) for j in range(n))


def embedding_matrix(datum: RootDatum, exps, field: FieldSpec):
    rows = []
    for w in datum.weyl:
        winv = datum.inverse(w)
        rows.append(tuple(e(winv(lam), field) for lam in exps))
    return tuple(rows)


def _image_column(datum, lam, field):
    return tuple((e(datum.inverse(w)(lam), field),) for w in datum.weyl)


def steinberg_candidate(datum: RootDatum, descent: str = "left") -> list[tuple[int, ...]]:
    """lambda_w = w^{-1}(sum of omega_alpha over simple alpha in a descent set).

    ``descent="right"`` uses {alpha : w(alpha) < 0}; ``"left"`` uses
    {alpha : w^{-1}(alpha) < 0}, which is the variant that gives a basis.
    """
    n = datum.lattice_rank
    out = []
    for w in datum.weyl:
        winv = datum.inverse(w)
        test = w if descent == "right" else winv
        acc = [0] * n
        for j, alpha in enumerate(datum.simple_coroots):
            if not datum.is_positive(test(alpha)):
                acc = [a + b for a, b in zip(acc, datum.fundamental_coweight(j))]
        out.append(winv(tuple(acc)))
    return out


def basis_check(datum: RootDatum, basis, field: FieldSpec = QQ) -> BasisCertificate:
    """Certify that {e^{lambda_j} (x) 1} is a right R-basis of R (x)_{R^W} R."""
    basis = [tuple(b) for b in basis]
    if len(basis) != len(datum.weyl):
        return BasisCertificate(False, witness=f"need {len(datum.weyl)} exponents, got {len(basis)}")
    s = embedding_matrix(datum, basis, field)
    pt = SeparatingPoint.for_datum(datum, field)
    if linalg.rank(pm.evaluate(s, pt.chi), field) < len(basis):
        return BasisCertificate(False, witness=f"S is singular at the separating point {pt.chi}")
    n = datum.lattice_rank
    targets = [("1(x)1", tuple((LaurentPoly.one(n, field),) for _ in datum.weyl))]
    for i in range(n):
        for sign in (1, -1):
            for lam in basis:
                mu = tuple(a + b for a, b in zip(lam, _unit(n, i, sign)))
                targets.append((f"e^{_unit(n, i, sign)}*e^{lam}(x)1", _image_column(datum, mu, field)))
    rhs = tuple(tuple(col[r][0] for _, col in targets) for r in range(len(datum.weyl)))
    d, x = pm.fraction_free_solve(s, rhs)
    for j, (label, _) in enumerate(targets):
        for r in range(len(basis)):
            num = x[r][j]
            if num and not d.divides(num):
                return BasisCertificate(False, d, True, f"expanding {label}: coefficient {r} not in R",
                                        num, d)
    return BasisCertificate(True, d, True)


def steinberg_basis(datum: RootDatum, field: FieldSpec = QQ, verify: bool = True) -> SteinbergBasis:
    """Steinberg candidate, certified; falls back to a greedy monomial search."""
    if not datum.adjoint:
        raise ValueError("Steinberg bases are built for adjoint data")
    for descent in ("right", "left"):
        cand = steinberg_candidate(datum, descent)
        if not verify:
            return SteinbergBasis(list(zip(datum.weyl, cand)), False, f"formula/{descent}")
        if basis_check(datum, cand, field):
            return SteinbergBasis(list(zip(datum.weyl, cand)), True, f"formula/{descent}")
    found = _greedy_search(datum, field)
    if found is None:
        raise ValueError(f"no verifiable monomial basis within radius {SEARCH_RADIUS}")
    return SteinbergBasis(list(zip(datum.weyl, found)), True, "search")


def _greedy_search(datum, field):
    n = datum.lattice_rank
    pool = sorted(
        itertools.product(range(-SEARCH_RADIUS, SEARCH_RADIUS + 1), repeat=n),
        key=lambda v: (sum(abs(x) for x in v), v),
    )
    size = len(datum.weyl)
    if len(pool) < size:
        return None
    zero = (0,) * n
    rest = [v for v in pool if v != zero]
    for combo in itertools.combinations(rest, size - 1):
        if basis_check(datum, [zero, *combo], field):
            return [zero, *combo]
    return None


# ---------------------------------------------------------------------------
# big bimodule


@dataclass
class BigBimodule:
    inner: MatrixBimodule
    basis: SteinbergBasis
    embedding: tuple  # S, columns are the images of the basis in prod_w R_w


def build_big_bimodule(datum: RootDatum, field: FieldSpec = QQ,
                       basis: SteinbergBasis | None = None) -> BigBimodule:
    basis = basis or steinberg_basis(datum, field)
    if not basis.verified:
        raise ValueError("the big bimodule needs a verified basis")
    exps = basis.exponents
    s = embedding_matrix(datum, exps, field)
    n = datum.lattice_rank

    def action(lam):
        shifted = embedding_matrix(datum, [tuple(a + b for a, b in zip(x, lam)) for x in exps], field)
        try:
            return pm.solve_exact(s, shifted)
        except NotDivisible as exc:  # pragma: no cover - contradicts the certificate
            raise ArithmeticError(f"expansion failed for e^{lam}: {exc}") from exc

    ls = [action(_unit(n, i)) for i in range(n)]
    li = [action(_unit(n, i, -1)) for i in range(n)]
    inner = MatrixBimodule(datum, field, ls, li, recipe="R(x)_{R^W}R")
    inner.check()
    return BigBimodule(inner, basis, s)


# ---------------------------------------------------------------------------
# endomorphism check


@dataclass
class CheckItem:
    name: str
    ok: bool
    detail: object = None


@dataclass
class Report:
    title: str
    items: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(i.ok for i in self.items)

    def add(self, name, ok, detail=None):
        self.items.append(CheckItem(name, bool(ok), detail))
        return ok

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [{"name": i.name, "ok": i.ok, "detail": _jsonable(i.detail)} for i in self.items],
            "data": _jsonable(self.data),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, WeylElement):
        return x.name()
    if isinstance(x, (LaurentPoly, WallFraction, Fraction)):
        return repr(x) if not isinstance(x, Fraction) else str(x)
    return x


def candidates(big: BigBimodule) -> list[BimoduleMap]:
    m = big.inner
    return [BimoduleMap(m, m, m.extend_left_action(e(lam, m.field))) for lam in big.basis.exponents]


def _wall_factor(d: LaurentPoly, datum: RootDatum):
    """Write d = unit * prod (e^beta - 1)^m over positive coroots, or None."""
    f = d.field
    den = {}
    for c in datum.positive_coroots:
        w = WallFraction.wall_poly(c.coroot, f)
        while True:
            try:
                d = d.exact_div(w)
            except NotDivisible:
                break
            den[c.coroot] = den.get(c.coroot, 0) + 1
    return (d, den) if d.is_unit() else None


def block_idempotents(big: BigBimodule, beta) -> tuple[bool, list]:
    """Block indicators of prod_w R_w, expanded over the basis with wall denominators.

    Returns (all coordinates avoid the wall of beta, list of (block, matrix)).
    """
    datum = big.inner.datum
    field = big.inner.field
    n = datum.lattice_rank
    beta = wall_vector(datum, beta)
    blocks = hecke.localized_blocks(datum, beta)
    cands = candidates(big)
    out = []
    for blk in blocks:
        rhs = tuple(
            (LaurentPoly.one(n, field) if w in blk else LaurentPoly.zero(n, field),) for w in datum.weyl
        )
        d, x = pm.fraction_free_solve(big.embedding, rhs)
        fac = _wall_factor(d, datum)
        if fac is None:
            return False, []
        unit, den = fac
        uinv = unit ** -1
        coords = []
        for (num,) in x:
            fr = WallFraction(num * uinv, den).reduced()
            if fr.den.get(beta):
                return False, []
            coords.append(WallFraction(fr.num, fr.den, beta))
        mat = None
        for g, c in zip(coords, cands):
            term = pm.matscale(pm.localize(c.matrix, beta), g)
            mat = term if mat is None else pm.matadd(mat, term)
        out.append((blk, mat))
    return True, out


def end_check(datum: RootDatum, box_radius: int, field: FieldSpec = QQ,
              big: BigBimodule | None = None, idempotents: bool = True) -> Report:
    """Bounded-box verification that End(R (x)_{R^W} R) is spanned by left multiplications."""
    rep = Report(f"end_check {datum.name} box={box_radius} over {field}")
    big = big or build_big_bimodule(datum, field)
    m = big.inner
    rep.data["rank"] = m.rank
    rep.data["basis"] = [[w.name(), list(lam)] for w, lam in big.basis.entries]
    cands = candidates(big)
    rep.add("candidates are intertwiners", all(c.is_intertwiner() for c in cands))
    r = fraction_field_rank([[x for row in c.matrix for x in row] for c in cands], field,
                            datum.lattice_rank, datum)
    rep.data["candidate_rank"] = r
    rep.add("candidates independent over Frac(R)", r == len(datum.weyl), r)
    decomp = generic_decompose(m)
    rep.add("generic fibre has each w once", all(decomp.get(w) == 1 for w in datum.weyl) and
            len(decomp) == len(datum.weyl))
    sols = hom_bounded(m, m, box_radius)
    rep.data["bounded_solutions"] = len(sols)
    bad = []
    for k, sol in enumerate(sols):
        if not sol.is_intertwiner():
            bad.append((k, "not an intertwiner"))
            continue
        res = span_membership(sol, cands, datum)
        if isinstance(res, NotInSpan):
            bad.append((k, res.reason))
    rep.add("bounded intertwiners lie in the span", not bad, bad[:5])
    for c in datum.positive_coroots:
        beta = c.coroot
        sep = separation_check(datum, beta, field)
        predicted = {frozenset(b) for b in hecke.localized_blocks(datum, beta)}
        rep.add(f"separation at {beta}", sep.passed, [v.reason() for v in sep.violations])
        rep.add(f"blocks at {beta} match prediction", sep.pairing() == predicted)
        if idempotents:
            ok, mats = block_idempotents(big, beta)
            if ok:
                total = None
                for _, e_mat in mats:
                    total = e_mat if total is None else pm.matadd(total, e_mat)
                one = pm.localize(pm.identity(m.rank, datum.lattice_rank, field), beta)
                ok = pm.mat_eq(total, one) and all(
                    pm.mat_eq(pm.matmul(e_mat, e_mat), e_mat) for _, e_mat in mats
                )
            rep.add(f"block idempotents at {beta} are defined away from other walls", ok)
    return rep


# ---------------------------------------------------------------------------
# rank one exact sequence


@dataclass
class RankOneSequence:
    iota: BimoduleMap
    pi: BimoduleMap
    report: Report


def ses_rank1(datum: RootDatum, s: int, field: FieldSpec = QQ) -> RankOneSequence:
    """0 -> R_1 -> B_s -> R_s -> 0 with iota = e^w(x)1 - 1(x)e^{sw} and pi the graph evaluation."""
    n = datum.lattice_rank
    t = datum.simple_reflections[s]
    omega = datum.fundamental_coweight(s)
    esw = e(t(omega), field)
    one = LaurentPoly.one(n, field)
    r1 = graph_bimodule(datum, datum.identity, field)
    rs = graph_bimodule(datum, t, field)
    bs = bott_samelson(datum, [s], field)
    iota = BimoduleMap(r1, bs, ((-esw,), (one,)))
    pi = BimoduleMap(bs, rs, ((one, esw),))
    rep = Report(f"ses_rank1 {datum.name} s{s + 1} over {field}")
    rep.add("iota intertwines", iota.is_intertwiner())
    rep.add("pi intertwines", pi.is_intertwiner())
    rep.add("pi o iota = 0", pm.is_zero(pi.compose(iota).matrix))
    chi = SeparatingPoint.for_datum(datum, field).chi
    ranks = (iota.fiber_rank(chi), bs.rank, pi.fiber_rank(chi))
    rep.data["generic_ranks"] = list(ranks)
    rep.add("generic ranks (1, 2, 1)", ranks == (1, 2, 1), list(ranks))
    return RankOneSequence(iota, pi, rep)


# ---------------------------------------------------------------------------
# localized splitting


def find_wall_point(datum: RootDatum, beta, field: FieldSpec = QQ, bound: int = 12):
    """A point with chi(beta) = 1 and chi(beta') != 1 for the other positive coroots."""
    n = datum.lattice_rank
    beta = wall_vector(datum, beta)
    if field.is_rational:
        vals = sorted({v for k in range(1, bound + 1) for v in (k, -k)}, key=lambda v: (abs(v), v < 0))
    else:
        vals = list(field.units())
    others = [c.coroot for c in datum.positive_coroots if c.coroot != beta]
    for chi in sorted(itertools.product(vals, repeat=n), key=lambda c: (max(abs(x) for x in c), c)):
        if e(beta, field).evaluate(chi) != 1:
            continue
        if all(e(b, field).evaluate(chi) != 1 for b in others):
            return tuple(chi)
    return None


def localized_split_check(datum: RootDatum, word, beta, field: FieldSpec = QQ, chi=None) -> Report:
    """Fibre of B_word at a point of the wall of beta, split by joint eigenvalues."""
    beta = wall_vector(datum, beta)
    word = list(word)
    rep = Report(f"localized_split_check {datum.name} word={[s + 1 for s in word]} beta={beta}")
    if chi is None:
        chi = find_wall_point(datum, beta, field)
        if chi is None:
            rep.add("admissible wall point found", False)
            return rep
    chi = tuple(field(x) for x in chi)
    rep.data["point"] = [str(x) for x in chi]
    on_wall = e(beta, field).evaluate(chi) == 1
    others_ok = all(e(c.coroot, field).evaluate(chi) != 1 for c in datum.positive_coroots
                    if c.coroot != beta)
    rep.add("point lies on the wall of beta only", on_wall and others_ok)
    m = bott_samelson(datum, word, field)
    pats = SeparatingPoint(chi, field).tuples(datum)
    groups: dict = {}
    for w in datum.weyl:
        groups.setdefault(pats[w], []).append(w)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda g: datum.weyl.index(g[0]))
    predicted = {frozenset(b) for b in hecke.localized_blocks(datum, beta)}
    rep.add("eigenvalue patterns group W into predicted blocks",
            {frozenset(b) for b in blocks} == predicted)
    char = hecke.delta_char_bott_samelson(datum, word)
    mats = m.evaluate(chi)
    total = 0
    out = []
    for blk in blocks:
        ev, gen = linalg.joint_eigen_dims(mats, pats[blk[0]], field)
        mult = {w.name(): char[w] for w in blk}
        expected = sum(mult.values())
        total += gen
        present = [w for w in blk if char[w]]
        clean = len(present) <= 1
        out.append({"block": [w.name() for w in blk], "multiplicities": mult,
                    "eigen_dim": ev, "generalized_dim": gen, "split": ev == gen})
        rep.add(f"block {[w.name() for w in blk]} has dimension {expected}", gen == expected, gen)
        if clean and expected:
            rep.add(f"clean block {[w.name() for w in blk]} is semisimple", ev == gen, ev)
    rep.add("blocks exhaust the fibre", total == m.rank, total)
    rep.data["blocks"] = out
    return rep


# ---------------------------------------------------------------------------
# non-adjoint modification


@dataclass(frozen=True)
class PairIntersection:
    w: WeylElement
    v: WeylElement
    free_rank: int
    invariant_factors: tuple

    @property
    def points(self) -> int | None:
        """Number of geometric points when finite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def pi1_report(datum: RootDatum, sublattice) -> list[PairIntersection]:
    """Graph intersections on the torus with character lattice Lambda_bi.

    Lambda_bi = {(lam, mu) : lam - mu in Lambda'} with Lambda' spanned by the
    columns of ``sublattice``; the graph of w is cut out via
    phi_w(lam, mu) = w^{-1} lam + mu.
    """
    if not datum.adjoint:
        raise ValueError("pi1_report expects the adjoint datum")
    n = datum.lattice_rank
    sub = [list(map(int, r)) for r in sublattice]
    if len(sub) != n or any(len(r) != n for r in sub):
        raise ValueError(f"sublattice must be an {n}x{n} integer matrix of column generators")
    fl = cokernel(sub, n)
    if fl.free_rank:
        raise ValueError("sublattice does not have finite index")
    cols = [[int(i == j) for j in range(n)] * 2 for i in range(n)]
    cols += [[sub[i][j] for i in range(n)] + [0] * n for j in range(n)]
    basis = [list(r) for r in zip(*cols)]
    out = []
    kernels = {}
    for w in datum.weyl:
        winv = datum.inverse(w).matrix
        phi = [list(winv[i]) + [int(i == j) for j in range(n)] for i in range(n)]
        kernels[w] = integer_kernel(_matmul(phi, basis), 2 * n)
    for w in datum.weyl:
        for v in datum.weyl:
            gens = kernels[w] + kernels[v]
            a = [[g[i] for g in gens] for i in range(2 * n)]
            q = cokernel(a, 2 * n)
            out.append(PairIntersection(w, v, q.free_rank, q.invariant_factors))
    return out
