"""Root data, Weyl groups, coroots and reflections at small rank.

Lattice vectors are integer tuples giving coordinates in the chosen basis of
the coweight lattice; roots are covectors in the dual basis. For adjoint data
the basis is the fundamental coweights, so ``omega_s`` is the ``s``-th unit
vector and simple coroots are the rows of the Cartan matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

WEYL_CAP = 20000


class RootDatumError(ValueError):
    pass


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _matvec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def _det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def _solve_rational(a, b):
    """Solve ``a x = b`` for square nonsingular rational ``a``."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for k in range(n):
        piv = next(i for i in range(k, n) if m[i][k] != 0)
        m[k], m[piv] = m[piv], m[k]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k] / m[k][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def is_finite_type(cartan) -> bool:
    """A generalised Cartan matrix is of finite type iff all principal minors
    are positive (for indecomposable and decomposable matrices alike)."""
    r = len(cartan)
    from itertools import combinations

    for k in range(1, r + 1):
        for idx in combinations(range(r), k):
            if _det([[cartan[i][j] for j in idx] for i in idx]) <= 0:
                return False
    return True


@dataclass(frozen=True, eq=False)
class WeylElement:
    """A Weyl group element, identified by its integer matrix on the lattice."""

    matrix: Matrix
    word: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(_matmul(self.matrix, other.matrix), self.word + other.word)

    def __call__(self, lam: Vector) -> Vector:
        return _matvec(self.matrix, lam)

    def is_identity(self) -> bool:
        return self.matrix == _identity(len(self.matrix))

    def name(self) -> str:
        return "".join(f"s{i + 1}" for i in self.word) or "1"

    def __repr__(self):
        return f"WeylElement({self.name()})"


@dataclass(frozen=True)
class CorootReflection:
    coroot: Vector
    root: Vector
    reflection: WeylElement


@dataclass(frozen=True, eq=False)
class RootDatum:
    """Root datum of a semisimple group of small rank.

    ``simple_coroots[j]`` is alpha_j in the lattice basis and
    ``simple_roots[j]`` is the root covector paired against it, so that
    ``<alpha_i, root_j> = cartan[i][j]``. ``to_adjoint`` maps lattice
    coordinates into fundamental-coweight coordinates (identity when adjoint).
    """

    name: str
    cartan: Matrix
    simple_coroots: tuple[Vector, ...]
    simple_roots: tuple[Vector, ...]
    adjoint: bool
    to_adjoint: Matrix = field(default=())

    def __post_init__(self):
        r = len(self.cartan)
        if r == 0 or any(len(row) != r for row in self.cartan):
            raise RootDatumError("Cartan matrix must be square and nonempty")
        for i in range(r):
            if self.cartan[i][i] != 2:
                raise RootDatumError("Cartan diagonal must be 2")
            for j in range(r):
                if i != j and self.cartan[i][j] > 0:
                    raise RootDatumError("off-diagonal Cartan entries must be <= 0")
                if i != j and (self.cartan[i][j] == 0) != (self.cartan[j][i] == 0):
                    raise RootDatumError("Cartan matrix zero pattern must be symmetric")
        if not is_finite_type(self.cartan):
            raise RootDatumError(f"Cartan matrix {self.cartan} is not of finite type")
        n = self.lattice_rank
        if len(self.simple_coroots) != r or len(self.simple_roots) != r:
            raise RootDatumError("need one coroot and one root per simple index")
        if any(len(v) != n for v in self.simple_coroots + self.simple_roots):
            raise RootDatumError("coroot/root dimensions disagree with lattice rank")
        for i in range(r):
            for j in range(r):
                if pair(self.simple_coroots[i], self.simple_roots[j]) != self.cartan[i][j]:
                    raise RootDatumError("pairing <alpha_i, root_j> disagrees with the Cartan matrix")
        if not self.to_adjoint:
            object.__setattr__(self, "to_adjoint", _identity(n))

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def lattice_rank(self) -> int:
        return len(self.simple_coroots[0])

    def fundamental_coweight(self, s: int) -> Vector:
        if not self.adjoint:
            raise RootDatumError(f"{self.name} is not adjoint; no fundamental coweight basis")
        return tuple(int(i == s) for i in range(self.lattice_rank))

    @cached_property
    def simple_reflections(self) -> tuple[WeylElement, ...]:
        n = self.lattice_rank
        out = []
        for j, (a, ra) in enumerate(zip(self.simple_coroots, self.simple_roots)):
            m = tuple(tuple(int(x == y) - a[x] * ra[y] for y in range(n)) for x in range(n))
            out.append(WeylElement(m, (j,)))
        return tuple(out)

    @cached_property
    def weyl(self) -> tuple[WeylElement, ...]:
        return tuple(_enumerate_weyl(self))

    @cached_property
    def identity(self) -> WeylElement:
        return self.weyl[0]

    @cached_property
    def _index(self) -> dict[Matrix, WeylElement]:
        return {w.matrix: w for w in self.weyl}

    def element(self, m) -> WeylElement:
        """Canonical element (with its reduced word) for a matrix, word or element."""
        if isinstance(m, WeylElement):
            m = m.matrix
        elif m and isinstance(m[0], int) or m == () or m == []:
            w = self.identity
            for j in m:
                w = w * self.simple_reflections[j]
            m = w.matrix
        try:
            return self._index[tuple(map(tuple, m))]
        except KeyError:
            raise RootDatumError("matrix is not an element of the Weyl group") from None

    def mul(self, *ws) -> WeylElement:
        out = self.identity
        for w in ws:
            out = out * w
        return self.element(out)

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element(tuple(reversed(w.word)))

    @cached_property
    def _coroot_coords_solver(self):
        return [list(col) for col in zip(*self.simple_coroots)]

    def simple_coordinates(self, beta: Vector) -> tuple[Fraction, ...]:
        """Coordinates of a lattice vector in the basis of simple coroots."""
        return _solve_rational(self._coroot_coords_solver, beta)

    def is_positive(self, beta: Vector) -> bool:
        c = self.simple_coordinates(beta)
        return all(x >= 0 for x in c) and any(x > 0 for x in c)

    @cached_property
    def positive_coroots(self) -> tuple[CorootReflection, ...]:
        seen: dict[Vector, Vector] = {}
        for w in self.weyl:
            winv_t = _transpose(self.inverse(w).matrix)
            for a, ra in zip(self.simple_coroots, self.simple_roots):
                beta = w(a)
                if beta not in seen and self.is_positive(beta):
                    seen[beta] = _matvec(winv_t, ra)
        out = []
        n = self.lattice_rank
        for beta, root in seen.items():
            m = tuple(tuple(int(x == y) - beta[x] * root[y] for y in range(n)) for x in range(n))
            out.append(CorootReflection(beta, root, self.element(m)))

        def key(c):
            coords = self.simple_coordinates(c.coroot)
            return (sum(coords), tuple(-x for x in coords))

        return tuple(sorted(out, key=key))

    def coroot_index(self, beta: Vector) -> int:
        for i, c in enumerate(self.positive_coroots):
            if c.coroot == tuple(beta):
                return i
        raise RootDatumError(f"{beta} is not a positive coroot")

    def reflection(self, beta: Vector) -> WeylElement:
        return self.positive_coroots[self.coroot_index(beta)].reflection

    def length_by_inversions(self, w: WeylElement) -> int:
        return sum(1 for c in self.positive_coroots if not self.is_positive(w(c.coroot)))

    @cached_property
    def longest(self) -> WeylElement:
        return self.weyl[-1]

    def describe(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "lattice_rank": self.lattice_rank,
            "adjoint": self.adjoint,
            "simple_coroots": [list(v) for v in self.simple_coroots],
            "simple_roots": [list(v) for v in self.simple_roots],
        }


def pair(lam, root) -> int:
    return sum(x * y for x, y in zip(lam, root))


def _transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def _enumerate_weyl(datum: RootDatum) -> list[WeylElement]:
    """Breadth-first closure under right multiplication by simple reflections.

    Each element keeps the lexicographically least reduced word: a least word
    ``x j`` has ``x`` least for ``w s_j``, so one pass per layer suffices.
    """
    n = datum.lattice_rank
    gens = datum.simple_reflections
    best: dict[Matrix, tuple[int, ...]] = {_identity(n): ()}
    layer = [_identity(n)]
    while layer:
        nxt: dict[Matrix, tuple[int, ...]] = {}
        for m in layer:
            word = best[m]
            for j, s in enumerate(gens):
                prod = _matmul(m, s.matrix)
                if prod in best:
                    continue
                cand = word + (j,)
                if prod not in nxt or cand < nxt[prod]:
                    nxt[prod] = cand
        best.update(nxt)
        if len(best) > WEYL_CAP:
            raise RootDatumError(f"Weyl group exceeds safety cap of {WEYL_CAP} elements")
        layer = list(nxt)
    elems = [WeylElement(m, w) for m, w in best.items()]
    return sorted(elems, key=lambda e: (len(e.word), e.word))


def enumerate_weyl(datum: RootDatum) -> list[WeylElement]:
    return list(datum.weyl)


def act(w: WeylElement, lam: Vector) -> Vector:
    if len(lam) != len(w.matrix):
        raise ValueError("dimension mismatch")
    return w(tuple(lam))


def positive_coroots(datum: RootDatum) -> list[CorootReflection]:
    return list(datum.positive_coroots)


def coset_data(datum: RootDatum, s: int):
    """Minimal representatives of W/<s> and the length-additivity predicate."""
    if not 0 <= s < datum.rank:
        raise IndexError(f"simple index {s} out of range")
    sr = datum.simple_reflections[s]
    reps = [w for w in datum.weyl if w.length < datum.element(w * sr).length]

    def additive(v: WeylElement, w: WeylElement) -> bool:
        return datum.mul(v, w).length == v.length + w.length

    return reps, additive


# ---------------------------------------------------------------------------
# construction


def adjoint_from_cartan(name: str, cartan) -> RootDatum:
    cartan = tuple(tuple(int(x) for x in row) for row in cartan)
    r = len(cartan)
    roots = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    return RootDatum(name, cartan, tuple(cartan), roots, adjoint=True)


def from_coroot_matrix(name: str, cartan, coroots) -> RootDatum:
    """Datum on an explicit lattice given simple-coroot coordinates.

    Roots are forced by the pairing: ``C R^T = A`` with ``C`` the coroot rows.
    The lattice must be semisimple (rank equal to the Cartan rank).
    """
    cartan = tuple(tuple(int(x) for x in row) for row in cartan)
    coroots = tuple(tuple(int(x) for x in row) for row in coroots)
    r = len(cartan)
    if len(coroots) != r or any(len(c) != r for c in coroots):
        raise RootDatumError("explicit lattice must have one rank-r coroot row per simple index")
    if _det(coroots) == 0:
        raise RootDatumError("coroots must span a full-rank sublattice")
    roots = []
    for j in range(r):
        col = _solve_rational(coroots, [cartan[i][j] for i in range(r)])
        if any(x.denominator != 1 for x in col):
            raise RootDatumError("inconsistent pairing data: roots are not integral on this lattice")
        roots.append(tuple(int(x) for x in col))
    # adjoint coordinates of lambda are its pairings with the simple roots
    to_ad = tuple(tuple(roots[j][k] for k in range(r)) for j in range(r))
    if abs(_det(to_ad)) == 1:
        # the adjoint lattice in another basis: use fundamental coweights
        return adjoint_from_cartan(name, cartan)
    return RootDatum(name, cartan, coroots, tuple(roots), adjoint=False, to_adjoint=to_ad)


_CARTANS = {
    "B2": ((2, -2), (-1, 2)),
    "C2": ((2, -1), (-2, 2)),
    "G2": ((2, -3), (-1, 2)),
}


def type_a_cartan(r: int):
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)) for i in range(r)
    )


def preset(name: str) -> RootDatum:
    """``PGL<n>``, ``SL2``, ``B2``, ``C2`` and ``G2`` (all but SL2 adjoint)."""
    key = name.strip().upper()
    m = re.fullmatch(r"PGL\(?(\d+)\)?", key)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise RootDatumError("PGL(n) needs n >= 2")
        return adjoint_from_cartan(f"PGL{n}", type_a_cartan(n - 1))
    if key in ("SL2", "SL(2)"):
        return from_coroot_matrix("SL2", ((2,),), ((1,),))
    if key in _CARTANS:
        return adjoint_from_cartan(key, _CARTANS[key])
    raise RootDatumError(f"unknown preset {name!r}")


def build_datum(spec) -> RootDatum:
    """Build from a preset name or a mapping ``{name, cartan, lattice}``.

    ``lattice`` is ``"adjoint"`` (default) or a matrix whose rows are the
    simple-coroot coordinates in a basis of the chosen lattice.
    """
    if isinstance(spec, RootDatum):
        return spec
    if isinstance(spec, str):
        return preset(spec)
    try:
        name = str(spec.get("name", "custom"))
        cartan = spec["cartan"]
    except (AttributeError, KeyError):
        raise RootDatumError("datum description needs a 'cartan' field") from None
    lattice = spec.get("lattice", "adjoint")
    if lattice == "adjoint":
        return adjoint_from_cartan(name, cartan)
    return from_coroot_matrix(name, cartan, lattice)


def adjoint_of(datum: RootDatum) -> RootDatum:
    if datum.adjoint and datum.to_adjoint == _identity(datum.lattice_rank):
        return datum
    return adjoint_from_cartan(f"{datum.name}_ad", datum.cartan)
