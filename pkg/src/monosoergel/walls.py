"""Fixed loci of Weyl elements on the dual torus and the wall "kill" test.

The fixed subscheme of ``u`` on the dual torus Spec k[Lambda] has character
lattice Q = Lambda / (u - 1) Lambda. Writing Q = Z^f + sum Z/d_i via the Smith
form, its geometric components are indexed by characters psi of the torsion
part (residue tuples), and e^beta - 1 vanishes on the component psi exactly
when beta has zero free image and psi(torsion image of beta) = 1.

The graph of ``w`` is {(x, y) : x(lambda) = y(w^{-1} lambda)}; two graphs
meet in a copy of Fix(w^{-1} v), seen in the right-hand coordinate ``y``,
which is where wall localisation happens.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .fields import QQ, FieldSpec
from .lattice import CokernelDescriptor, cokernel
from .rootdata import RootDatum, Vector, WeylElement

POINT_CAP = 200000


@dataclass(frozen=True)
class FixedLocusDescriptor:
    element: WeylElement
    free_rank: int
    invariant_factors: tuple[int, ...]
    coroot_images: dict
    quotient: CokernelDescriptor = field(repr=False)
    characteristic: int = 0

    def components(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def image(self, beta: Vector):
        beta = tuple(beta)
        if beta in self.coroot_images:
            return self.coroot_images[beta]
        return self.quotient.image(beta)

    def phases(self, psi) -> tuple[Fraction, ...]:
        """Torsion phase of the component at each lattice basis vector (mod 1)."""
        n = len(self.element.matrix)
        out = []
        for i in range(n):
            _, tors = self.quotient.image(tuple(int(i == j) for j in range(n)))
            out.append(_pair(psi, tors, self.invariant_factors) % 1)
        return tuple(out)

    @property
    def characteristic_flags(self) -> tuple[bool, ...]:
        """True where the characteristic divides an invariant factor."""
        p = self.characteristic
        return tuple(bool(p) and d % p == 0 for d in self.invariant_factors)

    @property
    def geometric_component_count(self) -> int:
        """Components over an algebraic closure (p-parts collapse in char p)."""
        out = 1
        p = self.characteristic
        for d in self.invariant_factors:
            while p and d % p == 0:
                d //= p
            out *= d
        return out


def point_label(phases) -> str:
    """Coordinates of a torsion point, e.g. ``(-1)`` or ``(exp(2 pi i 1/3), 1)``."""
    out = []
    for p in phases:
        p = Fraction(p) % 1
        out.append("1" if p == 0 else "-1" if p == Fraction(1, 2) else f"exp(2 pi i {p})")
    return "(" + ", ".join(out) + ")"


def _pair(psi, tors, factors) -> Fraction:
    return sum((Fraction(a * b, d) for a, b, d in zip(psi, tors, factors)), Fraction(0))


@lru_cache(maxsize=4096)
def _fixed_locus(datum: RootDatum, u: WeylElement, characteristic: int) -> FixedLocusDescriptor:
    n = datum.lattice_rank
    a = [[u.matrix[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    q = cokernel(a, n)
    images = {c.coroot: q.image(c.coroot) for c in datum.positive_coroots}
    return FixedLocusDescriptor(datum.element(u), q.free_rank, q.invariant_factors, images, q,
                                characteristic)


def fixed_locus(datum: RootDatum, u: WeylElement, field: FieldSpec = QQ) -> FixedLocusDescriptor:
    return _fixed_locus(datum, datum.element(u), field.characteristic)


def component_on_wall(fl: FixedLocusDescriptor, beta: Vector, psi) -> bool:
    """Whether e^beta - 1 vanishes identically on the component ``psi``."""
    psi = tuple(psi)
    if len(psi) != len(fl.invariant_factors) or any(
        not 0 <= x < d for x, d in zip(psi, fl.invariant_factors)
    ):
        raise ValueError(f"{psi} is not a character of the torsion part {fl.invariant_factors}")
    free, tors = fl.image(beta)
    if any(free):
        return False
    return _pair(psi, tors, fl.invariant_factors).denominator == 1


# ---------------------------------------------------------------------------
# separation report


@dataclass(frozen=True)
class ComponentVerdict:
    psi: tuple[int, ...]
    killed_by: Vector | None
    on_allowed_wall: bool
    phases: tuple[Fraction, ...]

    @property
    def survives(self) -> bool:
        return self.killed_by is None


@dataclass(frozen=True)
class PairVerdict:
    w: WeylElement
    v: WeylElement
    u: WeylElement
    components: tuple[ComponentVerdict, ...]

    @property
    def survivors(self) -> list[ComponentVerdict]:
        return [c for c in self.components if c.survives]


@dataclass(frozen=True)
class Violation:
    u: WeylElement
    psi: tuple[int, ...]
    phases: tuple[Fraction, ...]
    on_allowed_wall: bool
    pairs: tuple[tuple[WeylElement, WeylElement], ...]

    def reason(self) -> str:
        if self.on_allowed_wall:
            return f"surviving component of Fix({self.u.name()}) with {self.u.name()} not the reflection"
        return f"surviving fixed point of {self.u.name()} off the allowed wall"


@dataclass(frozen=True)
class SeparationReport:
    datum: str
    beta: Vector
    reflection: WeylElement
    pairs: tuple[PairVerdict, ...]
    violations: tuple[Violation, ...]
    blocks: tuple[tuple[WeylElement, ...], ...]
    flags: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def components_of(self, u: WeylElement) -> tuple[ComponentVerdict, ...]:
        """Component verdicts of Fix(u) (empty for the identity)."""
        for p in self.pairs:
            if p.u == u:
                return p.components
        return ()

    def pairing(self) -> set[frozenset]:
        return {frozenset(b) for b in self.blocks}

    def to_dict(self) -> dict:
        return {
            "datum": self.datum,
            "beta": list(self.beta),
            "reflection": self.reflection.name(),
            "passed": self.passed,
            "blocks": [[w.name() for w in b] for b in self.blocks],
            "flags": list(self.flags),
            "violations": [
                {
                    "u": v.u.name(),
                    "component": list(v.psi),
                    "point": point_label(v.phases),
                    "on_allowed_wall": v.on_allowed_wall,
                    "reason": v.reason(),
                    "pairs": [[a.name(), b.name()] for a, b in v.pairs],
                }
                for v in self.violations
            ],
            "pairs": [
                {
                    "w": p.w.name(),
                    "v": p.v.name(),
                    "u": p.u.name(),
                    "components": [
                        {
                            "component": list(c.psi),
                            "point": point_label(c.phases),
                            "killed_by": list(c.killed_by) if c.killed_by else None,
                            "on_allowed_wall": c.on_allowed_wall,
                        }
                        for c in p.components
                    ],
                }
                for p in self.pairs
            ],
        }


def wall_vector(datum: RootDatum, beta) -> Vector:
    """A positive coroot given by its 0-based index or as a vector."""
    if isinstance(beta, int):
        return datum.positive_coroots[beta].coroot
    beta = tuple(beta)
    datum.coroot_index(beta)
    return beta


def separation_check(datum: RootDatum, beta, field: FieldSpec = QQ) -> SeparationReport:
    """Localise away from every wall but ``beta`` and test graph separation.

    A component of Gamma_w meet Gamma_v = Fix(w^{-1} v) is killed when it lies on
    some other positive wall. Surviving components are acceptable only when
    ``w^{-1} v`` is the reflection ``t`` of ``beta`` and the component lies on
    the wall of ``beta`` itself; anything else is recorded as a violation.
    """
    beta = wall_vector(datum, beta)
    t = datum.reflection(beta)
    others = [c.coroot for c in datum.positive_coroots if c.coroot != beta]
    verdict_cache: dict[WeylElement, tuple[ComponentVerdict, ...]] = {}
    flags = set()
    pairs = []
    for w in datum.weyl:
        winv = datum.inverse(w)
        for v in datum.weyl:
            if v == w:
                continue
            u = datum.mul(winv, v)
            if u not in verdict_cache:
                fl = fixed_locus(datum, u, field)
                if any(fl.characteristic_flags):
                    flags.add(
                        f"characteristic {field.characteristic} divides invariant factors "
                        f"{fl.invariant_factors} of Fix({u.name()})"
                    )
                comps = []
                for psi in fl.components():
                    killer = next((b for b in others if component_on_wall(fl, b, psi)), None)
                    comps.append(
                        ComponentVerdict(psi, killer, component_on_wall(fl, beta, psi), fl.phases(psi))
                    )
                verdict_cache[u] = tuple(comps)
            pairs.append(PairVerdict(w, v, u, verdict_cache[u]))

    violations: dict[tuple, list] = {}
    for p in pairs:
        for c in p.survivors:
            if p.u == t and c.on_allowed_wall:
                continue
            violations.setdefault((p.u, c.psi), [c, []])[1].append((p.w, p.v))
    viol = tuple(
        Violation(u, psi, c.phases, c.on_allowed_wall, tuple(ps))
        for (u, psi), (c, ps) in violations.items()
    )
    return SeparationReport(datum.name, beta, t, tuple(pairs), viol, _blocks(datum, pairs),
                            tuple(sorted(flags)))


def _blocks(datum: RootDatum, pairs) -> tuple[tuple[WeylElement, ...], ...]:
    """Connected components of W under 'graphs still meet after localising'."""
    order = {w: i for i, w in enumerate(datum.weyl)}
    parent = {w: w for w in datum.weyl}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in pairs:
        if p.survivors:
            a, b = find(p.w), find(p.v)
            if a != b:
                parent[max(a, b, key=order.get)] = min(a, b, key=order.get)
    groups: dict = {}
    for w in datum.weyl:
        groups.setdefault(find(w), []).append(w)
    return tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: order[g[0]]))


# ---------------------------------------------------------------------------
# point-count oracles


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def fq_point_count(datum: RootDatum, u: WeylElement, q: int) -> tuple[int, int]:
    """(Smith-form count, brute-force count) of F_q-points of Fix(u).

    Points of the dual torus over F_q are homomorphisms Lambda -> F_q^x, a
    cyclic group of order q - 1, so the brute force runs over (Z/(q-1))^n.
    """
    if not _is_prime_power(q):
        raise ValueError(f"{q} is not a prime power")
    n = datum.lattice_rank
    m = q - 1
    if m**n > POINT_CAP:
        raise ValueError(f"enumeration cap exceeded: {m}^{n} points")
    fl = fixed_locus(datum, u)
    from math import gcd

    formula = m**fl.free_rank
    for d in fl.invariant_factors:
        formula *= gcd(d, m)
    cols = [[u.matrix[i][j] - int(i == j) for i in range(n)] for j in range(n)]
    brute = 0
    for y in itertools.product(range(m), repeat=n):
        if all(sum(a * b for a, b in zip(y, c)) % m == 0 for c in cols):
            brute += 1
    return formula, brute


def fq_survivors(datum: RootDatum, beta, q: int) -> dict[WeylElement, list[tuple[tuple[int, ...], bool]]]:
    """Point-level oracle for :func:`separation_check` over F_q.

    For every ``u != 1`` list the F_q-points fixed by ``u`` that avoid all
    walls except ``beta``, each tagged with whether it lies on ``beta``'s wall.
    Points are logarithms (Z/(q-1))^n with respect to a generator of F_q^x.
    """
    beta = wall_vector(datum, beta)
    n = datum.lattice_rank
    m = q - 1
    if m**n > POINT_CAP:
        raise ValueError(f"enumeration cap exceeded: {m}^{n} points")
    others = [c.coroot for c in datum.positive_coroots if c.coroot != beta]
    out = {}
    points = list(itertools.product(range(m), repeat=n))
    for u in datum.weyl[1:]:
        cols = [[u.matrix[i][j] - int(i == j) for i in range(n)] for j in range(n)]
        found = []
        for y in points:
            if any(sum(a * b for a, b in zip(y, c)) % m for c in cols):
                continue
            if any(sum(a * b for a, b in zip(y, b2)) % m == 0 for b2 in others):
                continue
            found.append((y, sum(a * b for a, b in zip(y, beta)) % m == 0))
        out[u] = found
    return out


def graph_intersection(datum: RootDatum, w: WeylElement, v: WeylElement) -> CokernelDescriptor:
    """Character lattice of Gamma_w meet Gamma_v inside the product torus.

    Computed from the defining equations e^lambda (x) 1 = 1 (x) e^{w^{-1} lambda}
    directly, independently of :func:`fixed_locus`.
    """
    n = datum.lattice_rank
    cols = []
    for g in (datum.inverse(w), datum.inverse(v)):
        for i in range(n):
            lam = tuple(int(i == j) for j in range(n))
            glam = g(lam)
            cols.append(list(lam) + [-x for x in glam])
    a = [list(r) for r in zip(*cols)]
    return cokernel(a, 2 * n)
