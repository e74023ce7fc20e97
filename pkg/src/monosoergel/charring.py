"""The group ring R = k[Lambda] and its localisations away from walls.

Elements of R are sparse Laurent polynomials keyed by exponent tuples. All
arithmetic is exact; the only divisions performed are those the theory says
are exact (Demazure operators, unit determinants, basis expansions), and a
failed division raises :class:`NotDivisible` instead of approximating.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .fields import QQ, FieldSpec
from .rootdata import RootDatum, Vector, WeylElement


class NotDivisible(ArithmeticError):
    """Exact division in R failed; ``witness`` carries the offending quotient."""

    def __init__(self, msg: str, numerator=None, denominator=None):
        super().__init__(msg)
        self.numerator = numerator
        self.denominator = denominator


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class LaurentPoly:
    """Immutable Laurent polynomial sum c_lambda e^lambda over a field."""

    __slots__ = ("terms", "nvars", "field", "_hash")

    def __init__(self, terms: Mapping[Vector, object] | None = None, nvars: int | None = None,
                 field: FieldSpec = QQ, _clean: bool = False):
        if terms is None:
            terms = {}
        if nvars is None:
            if not terms:
                raise ValueError("nvars required for the zero polynomial")
            nvars = len(next(iter(terms)))
        if not _clean:
            t = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                c = field(c)
                if c:
                    t[e] = field.reduce(t.get(e, 0) + c)
                    if not t[e]:
                        del t[e]
            terms = t
        self.terms = terms
        self.nvars = nvars
        self.field = field
        self._hash = None

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, field: FieldSpec = QQ) -> "LaurentPoly":
        return cls({}, nvars, field, _clean=True)

    @classmethod
    def const(cls, c, nvars: int, field: FieldSpec = QQ) -> "LaurentPoly":
        c = field(c)
        return cls({(0,) * nvars: c} if c else {}, nvars, field, _clean=True)

    @classmethod
    def one(cls, nvars: int, field: FieldSpec = QQ) -> "LaurentPoly":
        return cls.const(1, nvars, field)

    @classmethod
    def monomial(cls, exp: Iterable[int], c=1, field: FieldSpec = QQ) -> "LaurentPoly":
        exp = tuple(int(x) for x in exp)
        c = field(c)
        return cls({exp: c} if c else {}, len(exp), field, _clean=True)

    def _new(self, terms) -> "LaurentPoly":
        return LaurentPoly(terms, self.nvars, self.field, _clean=True)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.field != self.field or other.nvars != self.nvars:
                raise ValueError(
                    f"mixed rings: {self.field}[{self.nvars}] vs {other.field}[{other.nvars}]"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other, self.nvars, self.field)
        return NotImplemented

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.field.reduce
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = red(t.get(e, 0) + c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return self._new({e: red(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self._new({})
        if len(a) < len(b):
            a, b = b, a
        red = self.field.reduce
        t: dict = {}
        if len(b) == 1:
            (eb, cb), = b.items()
            for ea, ca in a.items():
                t[_vadd(ea, eb)] = red(ca * cb)
            return self._new(t)
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = _vadd(ea, eb)
                v = red(t.get(e, 0) + ca * cb)
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise NotDivisible("negative power of a non-unit")
            (e, c), = self.terms.items()
            return self._new({tuple(k * x for x in e): self.field.power(c, k)})
        out = LaurentPoly.one(self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "LaurentPoly":
        c = self.field(c)
        red = self.field.reduce
        return self._new({e: red(v * c) for e, v in self.terms.items()} if c else {})

    def shift(self, exp: Vector) -> "LaurentPoly":
        return self._new({_vadd(e, exp): c for e, c in self.terms.items()})

    # predicates ------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, self.nvars, self.field)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, 0)

    def support(self) -> list[Vector]:
        return sorted(self.terms)

    def support_radius(self) -> int:
        return max((abs(x) for e in self.terms for x in e), default=0)

    def coeff(self, exp) -> object:
        return self.terms.get(tuple(exp), 0)

    # ring actions ----------------------------------------------------------
    def act(self, w: WeylElement) -> "LaurentPoly":
        """e^lambda -> e^{w lambda}."""
        return self._new({w(e): c for e, c in self.terms.items()})

    def evaluate(self, chi):
        """Ring homomorphism e^lambda -> prod chi_i^{lambda_i}."""
        f = self.field
        chi = [f(x) for x in chi]
        if any(not x for x in chi):
            raise ZeroDivisionError("evaluation point must have nonzero coordinates")
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(chi, e):
                if k:
                    v = v * f.power(x, k)
            total = f.reduce(total + v)
        return f.reduce(total)

    # exact division --------------------------------------------------------
    def exact_div(self, g: "LaurentPoly") -> "LaurentPoly":
        """Return q with q * g == self, or raise :class:`NotDivisible`.

        Degrees add coordinatewise under multiplication, so any quotient has
        support in the box [min f - min g, max f - max g]; lex-leading-term
        reduction inside that box either terminates with remainder zero or
        leaves the box.
        """
        g = self._coerce(g)
        if not g:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return self
        fd = self.field
        if g.is_unit():
            (eg, cg), = g.terms.items()
            inv = fd.inv(cg)
            return self._new({_vsub(e, eg): fd.reduce(c * inv) for e, c in self.terms.items()})
        n = self.nvars
        fmin = [min(e[i] for e in self.terms) for i in range(n)]
        fmax = [max(e[i] for e in self.terms) for i in range(n)]
        gmin = [min(e[i] for e in g.terms) for i in range(n)]
        gmax = [max(e[i] for e in g.terms) for i in range(n)]
        lo = [a - b for a, b in zip(fmin, gmin)]
        hi = [a - b for a, b in zip(fmax, gmax)]
        if any(a > b for a, b in zip(lo, hi)):
            raise NotDivisible("quotient box empty", self, g)
        lead = max(g.terms)
        inv = fd.inv(g.terms[lead])
        gterms = list(g.terms.items())
        rem = dict(self.terms)
        q: dict = {}
        red = fd.reduce
        while rem:
            m = max(rem)
            t = _vsub(m, lead)
            if any(x < a or x > b for x, a, b in zip(t, lo, hi)):
                raise NotDivisible("remainder leaves the quotient box", self, g)
            c = red(rem[m] * inv)
            q[t] = c
            for e, cg in gterms:
                ee = _vadd(e, t)
                v = red(rem.get(ee, 0) - c * cg)
                if v:
                    rem[ee] = v
                else:
                    rem.pop(ee, None)
        return self._new(q)

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    # display ---------------------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "e^(" + ",".join(map(str, e)) + ")" if any(e) else ""
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1 or (self.field.p and c == self.field.p - 1):
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict[str, str]:
        return {",".join(map(str, e)): self.field.fmt(self.terms[e]) for e in sorted(self.terms)}

    @classmethod
    def from_dict(cls, d: Mapping[str, str], nvars: int, field: FieldSpec = QQ) -> "LaurentPoly":
        terms = {}
        for k, v in d.items():
            e = tuple(int(x) for x in k.split(",")) if k else ()
            terms[e] = field(Fraction(v) if field.is_rational else int(v))
        return cls(terms, nvars, field)


def e(exp, field: FieldSpec = QQ) -> LaurentPoly:
    return LaurentPoly.monomial(exp, 1, field)


# ---------------------------------------------------------------------------
# Weyl action, Demazure operators and invariants


def weyl_act_poly(w: WeylElement, f: LaurentPoly) -> LaurentPoly:
    return f.act(w)


def _check_adjoint(datum: RootDatum):
    if not datum.adjoint:
        raise ValueError(f"{datum.name}: Demazure operators need an adjoint datum")


def _wall_denominator(datum: RootDatum, s: int, field: FieldSpec) -> LaurentPoly:
    omega = datum.fundamental_coweight(s)
    s_omega = datum.simple_reflections[s](omega)
    return e(omega, field) - e(s_omega, field)


def demazure(datum: RootDatum, s: int, f: LaurentPoly) -> LaurentPoly:
    """(f - s f) / (e^omega - e^{s omega}) with omega the s-th fundamental coweight."""
    _check_adjoint(datum)
    num = f - f.act(datum.simple_reflections[s])
    try:
        return num.exact_div(_wall_denominator(datum, s, f.field))
    except NotDivisible as exc:  # pragma: no cover - would be an arithmetic bug
        raise ArithmeticError(f"Demazure division failed for s={s}: {exc}") from exc


def rs_decompose(datum: RootDatum, s: int, f: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Split f = a + e^omega b with a, b invariant under s.

    ``b = D(f)`` and ``a = f - e^omega D(f)``, which equals ``-D(e^{s omega} f)``.
    """
    b = demazure(datum, s, f)
    a = f - e(datum.fundamental_coweight(s), f.field) * b
    return a, b


def selfadjoint_matrix(datum: RootDatum, s: int, field: FieldSpec = QQ):
    """2x2 matrix over R^s of R -> Hom_{R^s}(R, R^s) in bases {1, e^w}, {1*, (e^w)*}.

    Column ``j`` lists the coordinates of ``e^omega * x_j`` (``x_0 = 1``,
    ``x_1 = e^omega``) with the ``e^omega``-coefficient first, which yields
    the columns ``(1, 0)`` and ``(e^w + e^{sw}, -e^{w + sw})`` and determinant
    ``-e^{w + sw}``.
    """
    _check_adjoint(datum)
    n = datum.lattice_rank
    omega = datum.fundamental_coweight(s)
    eo = e(omega, field)
    cols = []
    for x in (LaurentPoly.one(n, field), eo):
        a, b = rs_decompose(datum, s, eo * x)
        cols.append((b, a))
    return ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))


def orbit(datum: RootDatum, lam: Vector) -> list[Vector]:
    return sorted({w(tuple(lam)) for w in datum.weyl})


def orbit_sum(datum: RootDatum, lam: Vector, field: FieldSpec = QQ) -> LaurentPoly:
    return LaurentPoly({mu: 1 for mu in orbit(datum, lam)}, datum.lattice_rank, field)


def is_invariant(f: LaurentPoly, w: WeylElement) -> bool:
    return f.act(w) == f


def evaluate(f, chi):
    return f.evaluate(chi)


def box(nvars: int, radius: int) -> list[Vector]:
    """All exponents with every coordinate in [-radius, radius], sorted."""
    out = [()]
    for _ in range(nvars):
        out = [v + (k,) for v in out for k in range(-radius, radius + 1)]
    return out


# ---------------------------------------------------------------------------
# wall localisation


class WallFraction:
    """num / prod_beta (e^beta - 1)^m, with beta never equal to +-allowed.

    Denominators are kept factored; equality is decided by cross-multiplying.
    """

    __slots__ = ("num", "den", "allowed")

    def __init__(self, num: LaurentPoly, den: Mapping[Vector, int] | None = None,
                 allowed: Vector | None = None):
        den = {tuple(b): int(m) for b, m in (den or {}).items() if m}
        if allowed is not None:
            allowed = tuple(allowed)
            neg = tuple(-x for x in allowed)
            for b in den:
                if b == allowed or b == neg:
                    raise ValueError(f"cannot invert the allowed wall {allowed}")
        if any(m < 0 for m in den.values()):
            raise ValueError("wall exponents must be positive")
        self.num = num
        self.den = dict(sorted(den.items()))
        self.allowed = allowed

    @classmethod
    def lift(cls, f, allowed=None, like: "WallFraction | None" = None) -> "WallFraction":
        if isinstance(f, WallFraction):
            return f
        if like is not None:
            if not isinstance(f, LaurentPoly):
                f = LaurentPoly.const(f, like.num.nvars, like.num.field)
            allowed = like.allowed
        return cls(f, {}, allowed)

    @classmethod
    def inverse_wall(cls, beta: Vector, field: FieldSpec = QQ, allowed=None) -> "WallFraction":
        return cls(LaurentPoly.one(len(beta), field), {tuple(beta): 1}, allowed)

    def _ctx(self, other):
        if isinstance(other, WallFraction):
            if other.allowed != self.allowed and None not in (other.allowed, self.allowed):
                raise ValueError("fractions localised at different walls")
            return other
        return WallFraction.lift(other, like=self)

    def _allowed(self, other):
        return self.allowed if self.allowed is not None else other.allowed

    @staticmethod
    def wall_poly(beta: Vector, field: FieldSpec) -> LaurentPoly:
        return e(beta, field) - LaurentPoly.one(len(beta), field)

    def _den_poly(self, den=None) -> LaurentPoly:
        den = self.den if den is None else den
        f = self.num.field
        out = LaurentPoly.one(self.num.nvars, f)
        for b, m in den.items():
            out = out * self.wall_poly(b, f) ** m
        return out

    def __add__(self, other):
        other = self._ctx(other)
        den = dict(self.den)
        for b, m in other.den.items():
            den[b] = max(den.get(b, 0), m)
        a = self.num * self._den_poly({b: m - self.den.get(b, 0) for b, m in den.items()})
        c = other.num * self._den_poly({b: m - other.den.get(b, 0) for b, m in den.items()})
        return WallFraction(a + c, den, self._allowed(other))

    __radd__ = __add__

    def __neg__(self):
        return WallFraction(-self.num, self.den, self.allowed)

    def __sub__(self, other):
        return self + (-self._ctx(other))

    def __rsub__(self, other):
        return self._ctx(other) - self

    def __mul__(self, other):
        other = self._ctx(other)
        den = dict(self.den)
        for b, m in other.den.items():
            den[b] = den.get(b, 0) + m
        return WallFraction(self.num * other.num, den, self._allowed(other))

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            other = WallFraction.lift(other, like=self)
        if not isinstance(other, WallFraction):
            return NotImplemented
        return self.num * other._den_poly() == other.num * self._den_poly()

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, tuple(r.den.items())))

    def reduced(self) -> "WallFraction":
        """Cancel wall factors that divide the numerator."""
        num = self.num
        den = dict(self.den)
        f = num.field
        for b in list(den):
            while den[b]:
                try:
                    num = num.exact_div(self.wall_poly(b, f))
                except NotDivisible:
                    break
                den[b] -= 1
        return WallFraction(num, den, self.allowed)

    def as_poly(self) -> LaurentPoly:
        r = self.reduced()
        if r.den and any(r.den.values()):
            raise NotDivisible("fraction has a genuine wall denominator", r.num, r._den_poly())
        return r.num

    def evaluate(self, chi):
        f = self.num.field
        d = self._den_poly().evaluate(chi)
        if not d:
            raise ZeroDivisionError("a denominator wall vanishes at the evaluation point")
        return f.div(self.num.evaluate(chi), d)

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        den = "*".join(f"(e^{b}-1)^{m}" for b, m in self.den.items())
        return f"({self.num!r})/({den})"

    def to_dict(self) -> dict:
        return {
            "num": self.num.to_dict(),
            "den": {",".join(map(str, b)): m for b, m in self.den.items()},
        }

    @classmethod
    def from_dict(cls, d, nvars, field, allowed=None) -> "WallFraction":
        den = {tuple(int(x) for x in k.split(",")): m for k, m in d["den"].items()}
        return cls(LaurentPoly.from_dict(d["num"], nvars, field), den, allowed)
