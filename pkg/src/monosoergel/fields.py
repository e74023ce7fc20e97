"""Coefficient fields: the rationals and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field. ``p is None`` means Q, otherwise F_p.

    Rational elements are stored as ``int`` when integral and ``Fraction``
    otherwise; prime-field elements are ints in ``range(p)``.
    """

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p}")

    @classmethod
    def parse(cls, text: str | int | None) -> "FieldSpec":
        """Accept ``Q``/``rational``/``0`` or ``F5``/``5``/``p=5``."""
        if text is None:
            return cls()
        if isinstance(text, int):
            return cls(text or None)
        t = text.strip().lower()
        if t in ("q", "qq", "rational", "rationals", "0", ""):
            return cls()
        for prefix in ("gf", "f", "p=", "prime"):
            if t.startswith(prefix):
                t = t[len(prefix):]
                break
        try:
            return cls(int(t))
        except ValueError:
            raise ValueError(f"unrecognised field {text!r}") from None

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def __str__(self):
        return "Q" if self.p is None else f"F{self.p}"

    def __call__(self, x) -> int | Fraction:
        if self.p is None:
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else x
            return int(x) if not isinstance(x, Fraction) else x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        """Normalise the result of ``+``/``*`` on two elements."""
        if self.p is None:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        return x % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return self.reduce(Fraction(1) / x)
        return pow(x, -1, self.p)

    def div(self, a, b):
        if self.p is None:
            return self.reduce(Fraction(a) / b)
        return a * self.inv(b) % self.p

    def power(self, x, k: int):
        if k >= 0:
            return self.reduce(x**k) if self.p is None else pow(x, k, self.p)
        return self.power(self.inv(x), -k)

    def fmt(self, x) -> str:
        return str(x)

    def units(self):
        """Nonzero elements of a prime field, in increasing order."""
        if self.p is None:
            raise ValueError("Q has infinitely many units")
        return range(1, self.p)


QQ = FieldSpec()
