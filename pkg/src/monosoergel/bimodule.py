"""R-bimodules that are free as right R-modules, given by left-action matrices.

A bimodule of rank ``n`` has basis ``b_1..b_n`` over the right copy of R and is
determined by the matrices ``L_i`` of left multiplication by ``e^{lambda_i}``
for the lattice basis ``lambda_i``: ``e^{lambda_i} b_a = sum_c b_c L_i[c][a]``.

Graph bimodules follow the convention that ``e^lambda`` on the left equals
``e^{w^{-1} lambda}`` on the right in ``R_w``. With it, ``R_v (x) R_w = R_{vw}``
and the Bott-Samelson bimodule of ``s_1 ... s_r`` has standard pieces indexed by
the subword products taken in word order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from . import polymatrix as pm
from .charring import LaurentPoly, NotDivisible, e, rs_decompose
from .fields import QQ, FieldSpec
from .rootdata import RootDatum, WeylElement

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class BimoduleError(ArithmeticError):
    """A constructed bimodule violates a structural invariant."""


class NotGraphFiltered(ValueError):
    """The generic fibre has eigenvalue tuples not coming from any graph."""


class DefectiveFiber(ValueError):
    """The generic fibre is not diagonalisable."""


class DependentCandidates(ValueError):
    pass


@dataclass(frozen=True)
class NotInSpan:
    """Witness that a map is not a right-R combination of the candidates."""

    reason: str
    numerator: object = None
    denominator: object = None

    def __bool__(self):
        return False


class MatrixBimodule:
    """Free right R-module with commuting invertible left-action matrices."""

    def __init__(self, datum: RootDatum, field: FieldSpec, left_action, left_action_inv,
                 ring_tag: str = "plain", allowed=None, recipe: str = ""):
        self.datum = datum
        self.field = field
        self.left_action = tuple(tuple(tuple(r) for r in m) for m in left_action)
        self.left_action_inv = tuple(tuple(tuple(r) for r in m) for m in left_action_inv)
        self.rank = len(self.left_action[0])
        self.ring_tag = ring_tag
        self.allowed = tuple(allowed) if allowed is not None else None
        self.recipe = recipe
        self._mono: dict = {}

    @property
    def nvars(self) -> int:
        return self.datum.lattice_rank

    def __repr__(self):
        return f"MatrixBimodule({self.datum.name}, {self.field}, rank={self.rank}, {self.recipe or self.ring_tag})"

    def __eq__(self, other):
        return (
            isinstance(other, MatrixBimodule)
            and self.datum.name == other.datum.name
            and self.field == other.field
            and self.ring_tag == other.ring_tag
            and self.allowed == other.allowed
            and all(pm.mat_eq(a, b) for a, b in zip(self.left_action, other.left_action))
            and all(pm.mat_eq(a, b) for a, b in zip(self.left_action_inv, other.left_action_inv))
        )

    __hash__ = None

    def _identity(self):
        m = pm.identity(self.rank, self.nvars, self.field)
        if self.ring_tag != "plain":
            m = pm.localize(m, self.allowed)
        return m

    def monomial_action(self, exp) -> tuple:
        """Matrix of left multiplication by e^exp."""
        exp = tuple(exp)
        if exp in self._mono:
            return self._mono[exp]
        out = self._identity()
        for i, k in enumerate(exp):
            mat = self.left_action[i] if k > 0 else self.left_action_inv[i]
            for _ in range(abs(k)):
                out = pm.matmul(out, mat)
        self._mono[exp] = out
        return out

    def extend_left_action(self, f: LaurentPoly) -> tuple:
        """Matrix of left multiplication by an arbitrary element of R."""
        zero = pm.matsub(self._identity(), self._identity())
        out = zero
        for exp, c in sorted(f.terms.items()):
            out = pm.matadd(out, pm.matscale(self.monomial_action(exp), c))
        return out

    def check(self) -> None:
        """Raise :class:`BimoduleError` unless the action is commuting and invertible."""
        ls = self.left_action
        one = self._identity()
        for i, (a, ai) in enumerate(zip(ls, self.left_action_inv)):
            if not pm.mat_eq(pm.matmul(a, ai), one) or not pm.mat_eq(pm.matmul(ai, a), one):
                raise BimoduleError(f"L_{i} times its stated inverse is not the identity")
            for j in range(i + 1, len(ls)):
                if not pm.mat_eq(pm.matmul(a, ls[j]), pm.matmul(ls[j], a)):
                    raise BimoduleError(f"L_{i} and L_{j} do not commute")
            if self.ring_tag == "plain":
                d = pm.det(a)
                if not d.is_unit():
                    raise BimoduleError(f"det L_{i} = {d!r} is not a unit")

    def localize(self, beta) -> "MatrixBimodule":
        """Base change to the ring with all walls except ``beta`` inverted."""
        beta = tuple(beta)
        return MatrixBimodule(
            self.datum, self.field,
            [pm.localize(m, beta) for m in self.left_action],
            [pm.localize(m, beta) for m in self.left_action_inv],
            "localized", beta, f"{self.recipe}@{beta}",
        )

    def evaluate(self, chi) -> list:
        """Left-action matrices at the point ``chi`` (scalar matrices)."""
        return [pm.evaluate(m, chi) for m in self.left_action]


# ---------------------------------------------------------------------------
# constructors


def _unit_vec(n, i):
    return tuple(int(i == j) for j in range(n))


def graph_bimodule(datum: RootDatum, w: WeylElement, field: FieldSpec = QQ) -> MatrixBimodule:
    """R_w: left e^lambda acts as right e^{w^{-1} lambda}."""
    n = datum.lattice_rank
    winv = datum.inverse(w)
    ls = [((e(winv(_unit_vec(n, i)), field),),) for i in range(n)]
    li = [((e(winv(tuple(-x for x in _unit_vec(n, i))), field),),) for i in range(n)]
    return MatrixBimodule(datum, field, ls, li, recipe=f"R_{datum.element(w).name()}")


def _check_plain(m: MatrixBimodule):
    if m.ring_tag != "plain":
        raise ValueError("this construction needs a bimodule over R itself")


def _induct_action(datum, s, m: MatrixBimodule, lam) -> tuple:
    blocks = [[None, None], [None, None]]
    omega = datum.fundamental_coweight(s)
    for eps in (0, 1):
        exp = tuple(x + eps * o for x, o in zip(lam, omega))
        a, b = rs_decompose(datum, s, e(exp, m.field))
        blocks[0][eps] = m.extend_left_action(a)
        blocks[1][eps] = m.extend_left_action(b)
    return pm.block(blocks)


def induct(datum: RootDatum, s: int, m: MatrixBimodule, check: bool = True) -> MatrixBimodule:
    """R (x)_{R^s} M with basis {1 (x) b_k} followed by {e^omega (x) b_k}."""
    _check_plain(m)
    n = datum.lattice_rank
    ls = [_induct_action(datum, s, m, _unit_vec(n, i)) for i in range(n)]
    li = [_induct_action(datum, s, m, tuple(-x for x in _unit_vec(n, i))) for i in range(n)]
    out = MatrixBimodule(datum, m.field, ls, li, recipe=f"s{s + 1}.{m.recipe}")
    if check:
        out.check()
    return out


def bott_samelson(datum: RootDatum, word, field: FieldSpec = QQ, check: bool = True) -> MatrixBimodule:
    """R (x)_{R^{s_1}} R (x) ... (x)_{R^{s_r}} R, built from the right end."""
    m = graph_bimodule(datum, datum.identity, field)
    for s in reversed(list(word)):
        if not 0 <= s < datum.rank:
            raise ValueError(f"simple index {s} out of range for {datum.name}")
        m = induct(datum, s, m, check=check)
    m.recipe = "BS(" + ",".join(str(s + 1) for s in word) + ")"
    return m


def _tensor_action(mm, nn, a) -> tuple:
    rows = []
    for c in range(len(a)):
        rows.append([nn.extend_left_action(a[c][col]) for col in range(len(a))])
    return pm.block(rows)


def tensor(m: MatrixBimodule, n: MatrixBimodule, check: bool = True) -> MatrixBimodule:
    """M (x)_R N with basis b_c (x) b'_d ordered lexicographically in (c, d)."""
    if m.datum is not n.datum and m.datum.name != n.datum.name:
        raise ValueError("tensor factors over different root data")
    if m.field != n.field:
        raise ValueError("tensor factors over different fields")
    _check_plain(m)
    _check_plain(n)
    ls = [_tensor_action(m, n, a) for a in m.left_action]
    li = [_tensor_action(m, n, a) for a in m.left_action_inv]
    out = MatrixBimodule(m.datum, m.field, ls, li, recipe=f"({m.recipe})*({n.recipe})")
    if check:
        out.check()
    return out


# ---------------------------------------------------------------------------
# generic fibres


@dataclass(frozen=True)
class SeparatingPoint:
    """A point of the dual torus with trivial stabiliser in W.

    Over Q the coordinates are distinct primes, so lambda -> chi(lambda) is
    injective on the whole lattice. Over F_p the point is found by a
    deterministic search and injectivity is asserted on the W-orbits of the
    lattice basis.
    """

    chi: tuple
    field: FieldSpec = QQ

    @staticmethod
    def for_datum(datum: RootDatum, field: FieldSpec = QQ, skip: int = 0) -> "SeparatingPoint":
        n = datum.lattice_rank
        if field.is_rational:
            pt = SeparatingPoint(tuple(_PRIMES[skip: skip + n]), field)
            pt.assert_separating(datum)
            return pt
        found = 0
        for chi in itertools.product(field.units(), repeat=n):
            pt = SeparatingPoint(chi, field)
            if pt.is_separating(datum):
                if found == skip:
                    return pt
                found += 1
        raise ValueError(f"no separating point for {datum.name} over {field}")

    def tuples(self, datum: RootDatum) -> dict:
        """w -> (chi(w^{-1} lambda_i))_i, the eigenvalue pattern of R_w."""
        n = datum.lattice_rank
        out = {}
        for w in datum.weyl:
            winv = datum.inverse(w)
            out[w] = tuple(e(winv(_unit_vec(n, i)), self.field).evaluate(self.chi) for i in range(n))
        return out

    def is_separating(self, datum: RootDatum) -> bool:
        return len(set(self.tuples(datum).values())) == len(datum.weyl)

    def assert_separating(self, datum: RootDatum):
        if not self.is_separating(datum):
            raise ValueError(f"{self.chi} does not separate the Weyl orbit")


def fiber_multiplicities(m: MatrixBimodule, chi, patterns: dict) -> dict:
    """Pattern key -> (eigen dim, generalised eigen dim) of the fibre at ``chi``."""
    mats = m.evaluate(chi)
    return {k: linalg.joint_eigen_dims(mats, vals, m.field) for k, vals in patterns.items()}


def generic_decompose(m: MatrixBimodule, point: SeparatingPoint | None = None) -> dict:
    """Multiset {w: multiplicity} of graph pieces of the generic fibre."""
    point = point or SeparatingPoint.for_datum(m.datum, m.field)
    pats = point.tuples(m.datum)
    dims = fiber_multiplicities(m, point.chi, pats)
    total = sum(g for _, g in dims.values())
    if total != m.rank:
        raise NotGraphFiltered(
            f"eigenvalue tuples at {point.chi} account for {total} of {m.rank} dimensions"
        )
    bad = [w.name() for w, (ev, g) in dims.items() if ev != g]
    if bad:
        raise DefectiveFiber(f"fibre at {point.chi} is not semisimple at {bad}")
    return {w: g for w, (_, g) in dims.items() if g}


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class BimoduleMap:
    source: MatrixBimodule
    target: MatrixBimodule
    matrix: tuple

    def is_intertwiner(self) -> bool:
        return all(
            pm.mat_eq(pm.matmul(self.matrix, ls), pm.matmul(lt, self.matrix))
            for ls, lt in zip(self.source.left_action, self.target.left_action)
        )

    def compose(self, first: "BimoduleMap") -> "BimoduleMap":
        """self o first."""
        return BimoduleMap(first.source, self.target, pm.matmul(self.matrix, first.matrix))

    def evaluate(self, chi):
        return pm.evaluate(self.matrix, chi)

    def fiber_rank(self, chi) -> int:
        return linalg.rank(self.evaluate(chi), self.target.field)


def hom_bounded(m: MatrixBimodule, n: MatrixBimodule, box_radius: int) -> list[BimoduleMap]:
    """Basis over k of all intertwiners M -> N with entries of support radius <= box."""
    if box_radius < 0:
        raise ValueError("box radius must be nonnegative")
    _check_plain(m)
    _check_plain(n)
    field = m.field
    nv = m.nvars
    exps = [tuple(v) for v in itertools.product(range(-box_radius, box_radius + 1), repeat=nv)]
    ne = len(exps)
    rows_t, cols_s = n.rank, m.rank

    def var(p, k, ei):
        return (p * cols_s + k) * ne + ei

    ech = linalg.SparseEchelon(rows_t * cols_s * ne, field)
    red = field.reduce
    for ls, lt in zip(m.left_action, n.left_action):
        # entry (p, q) of X ls - lt X, collected by monomial
        for p in range(rows_t):
            for q in range(cols_s):
                eqs: dict = {}
                for k in range(cols_s):
                    f = ls[k][q]
                    for fe, fc in f.terms.items():
                        for ei, ex in enumerate(exps):
                            mono = tuple(a + b for a, b in zip(ex, fe))
                            row = eqs.setdefault(mono, {})
                            v = var(p, k, ei)
                            row[v] = red(row.get(v, 0) + fc)
                for k in range(rows_t):
                    f = lt[p][k]
                    for fe, fc in f.terms.items():
                        for ei, ex in enumerate(exps):
                            mono = tuple(a + b for a, b in zip(ex, fe))
                            row = eqs.setdefault(mono, {})
                            v = var(k, q, ei)
                            row[v] = red(row.get(v, 0) - fc)
                for mono in sorted(eqs):
                    ech.add(eqs[mono])
    out = []
    for sol in ech.nullspace():
        mat = [[{} for _ in range(cols_s)] for _ in range(rows_t)]
        for v, c in sol.items():
            if c:
                pk, ei = divmod(v, ne)
                p, k = divmod(pk, cols_s)
                mat[p][k][exps[ei]] = c
        matrix = tuple(tuple(LaurentPoly(t, nv, field) for t in r) for r in mat)
        out.append(BimoduleMap(m, n, matrix))
    return out


def _flatten(matrix) -> list:
    return [x for r in matrix for x in r]


def fraction_field_rank(vectors: list[list], field: FieldSpec, nvars: int, datum=None) -> int:
    """Rank over Frac(R) of a list of equal-length vectors of Laurent polynomials.

    Evaluation at a separating point gives a lower bound; when it is not
    already maximal, fraction-free elimination decides exactly.
    """
    if not vectors:
        return 0
    k = len(vectors)
    length = len(vectors[0])
    chi = _eval_point(field, nvars, datum)
    r0 = linalg.rank([[x.evaluate(chi) for x in v] for v in vectors], field)
    if r0 == min(k, length):
        return r0
    return _bareiss_rank([list(v) for v in vectors])


def _eval_point(field, nvars, datum=None):
    if datum is not None:
        return SeparatingPoint.for_datum(datum, field).chi
    if field.is_rational:
        return _PRIMES[:nvars]
    return tuple(((2 + i) % field.p) or 1 for i in range(nvars))


def _bareiss_rank(rows) -> int:
    m = [list(r) for r in rows]
    nr, nc = len(m), len(m[0])
    prev = None
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nr):
            new = []
            for j in range(nc):
                v = p * m[i][j] - m[i][c] * m[r][j]
                new.append(v.exact_div(prev) if (prev is not None and v) else v)
            m[i] = new
        prev = p
        r += 1
        if r == nr:
            break
    return r


def span_membership(target: BimoduleMap, candidates: list[BimoduleMap], datum=None):
    """Coefficients g_j in R with target = sum_j candidates_j * g_j, or NotInSpan.

    ``g_j`` acts by right multiplication, i.e. entrywise on the matrices.
    """
    if not candidates:
        if pm.is_zero(target.matrix):
            return ()
        return NotInSpan("empty candidate list and nonzero map")
    field = target.target.field
    nvars = target.target.nvars
    cols = [_flatten(c.matrix) for c in candidates]
    v = _flatten(target.matrix)
    k = len(cols)
    chi = _eval_point(field, nvars, datum)
    # greedy choice of k rows on which the candidates are independent at chi
    chosen = []
    ech = []
    for i in range(len(v)):
        trial = ech + [[c[i].evaluate(chi) for c in cols]]
        if linalg.rank(trial, field) > len(ech):
            ech = trial
            chosen.append(i)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        if _bareiss_rank([list(r) for r in zip(*cols)]) < k:
            raise DependentCandidates("candidates are dependent over the fraction field")
        chosen = _exact_rows(cols, k)
    a = tuple(tuple(c[i] for c in cols) for i in chosen)
    b = tuple((v[i],) for i in chosen)
    d, x = pm.fraction_free_solve(a, b)
    coeffs = []
    for (num,) in x:
        try:
            coeffs.append(num.exact_div(d) if num else num)
        except NotDivisible:
            return NotInSpan("coefficient is not in R", num, d)
    for i in range(len(v)):
        acc = v[i] - v[i]
        for g, c in zip(coeffs, cols):
            if g and c[i]:
                acc = acc + c[i] * g
        if acc != v[i]:
            return NotInSpan(f"entry {i} not reproduced by the solved coefficients", acc, v[i])
    return tuple(coeffs)


def _exact_rows(cols, k):
    rows = list(zip(*cols))
    chosen = []
    for i in range(len(rows)):
        if _bareiss_rank([list(rows[j]) for j in chosen + [i]]) > len(chosen):
            chosen.append(i)
            if len(chosen) == k:
                return chosen
    raise DependentCandidates("candidates are dependent over the fraction field")


def find_isomorphism(m: MatrixBimodule, n: MatrixBimodule, box_radius: int) -> BimoduleMap | None:
    """An intertwiner with unit determinant among small combinations of a bounded Hom basis."""
    if m.rank != n.rank:
        return None
    basis = hom_bounded(m, n, box_radius)
    for size in (1, 2):
        for combo in itertools.combinations(basis, size):
            mat = combo[0].matrix
            for extra in combo[1:]:
                mat = pm.matadd(mat, extra.matrix)
            try:
                d = pm.det(mat)
            except NotDivisible:
                continue
            if d and d.is_unit():
                return BimoduleMap(m, n, mat)
    return None
