"""Dense matrices over R (or its wall localisations), as tuples of rows.

Entries only need ``+ - *``, truthiness for zero, and ``exact_div`` where a
fraction-free elimination is requested.
"""

from __future__ import annotations

from .charring import LaurentPoly, NotDivisible, WallFraction


def zeros(rows: int, cols: int, nvars: int, field):
    z = LaurentPoly.zero(nvars, field)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity(n: int, nvars: int, field):
    z = LaurentPoly.zero(nvars, field)
    o = LaurentPoly.one(nvars, field)
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def scalar(f, n: int):
    z = f - f
    return tuple(tuple(f if i == j else z for j in range(n)) for i in range(n))


def matmul(a, b):
    if not a:
        return ()
    if len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} @ {len(b)}x{len(b[0]) if b else 0}")
    cols = list(zip(*b))
    zero = a[0][0] - a[0][0]
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = zero
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def matadd(a, b):
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def matsub(a, b):
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def matscale(a, f):
    return tuple(tuple(x * f for x in r) for r in a)


def transpose(a):
    return tuple(zip(*a))


def is_zero(a) -> bool:
    return not any(x for r in a for x in r)


def mat_eq(a, b) -> bool:
    return len(a) == len(b) and all(
        len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b)
    )


def evaluate(a, chi):
    return [[x.evaluate(chi) for x in r] for r in a]


def block(rows):
    """Assemble a block matrix from a grid of equal-height/width blocks."""
    out = []
    for brow in rows:
        for i in range(len(brow[0])):
            out.append(tuple(x for b in brow for x in b[i]))
    return tuple(out)


def localize(a, allowed):
    return tuple(tuple(WallFraction.lift(x, allowed) for x in r) for r in a)


def fraction_free_solve(a, b):
    """Fraction-free Gauss-Jordan on ``[a | b]`` for square nonsingular ``a``.

    Returns ``(d, x)`` with ``a x = d b`` and ``d = +-det(a)``. Pivot rows are
    left untouched and every other division is exact (Bareiss), so after the
    last step the left block is ``d`` times the identity.
    Raises ``ZeroDivisionError`` if ``a`` is singular.
    """
    n = len(a)
    m = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    width = len(m[0]) if m else 0
    prev = None
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        pk = m[k]
        p = pk[k]
        for i in range(n):
            if i == k:
                continue
            ri = m[i]
            f = ri[k]
            new = []
            for j in range(width):
                v = p * ri[j] if ri[j] else ri[j]
                if f and pk[j]:
                    v = v - f * pk[j]
                if prev is not None and v:
                    v = v.exact_div(prev)
                new.append(v)
            m[i] = new
        prev = p
    return prev, tuple(tuple(r[n:]) for r in m)


def det(a):
    """Exact determinant by Bareiss elimination."""
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    m = [list(r) for r in a]
    sign = 1
    prev = None
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return m[0][0] - m[0][0]
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = v.exact_div(prev) if (prev is not None and v) else v
        prev = m[k][k]
    return m[n - 1][n - 1] if sign == 1 else -m[n - 1][n - 1]


def inverse(a):
    """Inverse of a matrix whose determinant is a unit of R."""
    n = len(a)
    nvars, field = a[0][0].nvars, a[0][0].field
    d, x = fraction_free_solve(a, identity(n, nvars, field))
    if not d.is_unit():
        raise NotDivisible("determinant is not a unit", None, d)
    return tuple(tuple(v.exact_div(d) if v else v for v in r) for r in x)


def solve_exact(a, b):
    """Solve ``a x = b`` with ``x`` over R; raise NotDivisible with a witness."""
    d, x = fraction_free_solve(a, b)
    out = []
    for i, r in enumerate(x):
        row = []
        for j, v in enumerate(r):
            try:
                row.append(v.exact_div(d) if v else v)
            except NotDivisible:
                raise NotDivisible(f"coefficient ({i},{j}) is not in R", v, d) from None
        out.append(tuple(row))
    return tuple(out)
