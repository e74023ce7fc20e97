"""Independent brute-force reference implementations used by the tests.

Nothing here imports the package's algorithms; only plain integers, Fractions
and dicts are used so that agreement is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def matmul(a, b):
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in zip(*b)) for r in a)


def reflection_matrix(coroot, root):
    """lambda -> lambda - <lambda, root> coroot, as a matrix acting on columns."""
    n = len(coroot)
    return tuple(
        tuple(int(i == j) - coroot[i] * root[j] for j in range(n)) for i in range(n)
    )


def closure(gens):
    """All products of the generator matrices (breadth first)."""
    n = len(gens[0])
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = matmul(g, m)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return seen


def det(m):
    """Cofactor expansion (any commutative ring with + - *)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def poly_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for a, x in f.items():
        for b, y in g.items():
            e = tuple(i + j for i, j in zip(a, b))
            out[e] = out.get(e, 0) + x * y
    return {e: c for e, c in out.items() if c}


def poly_add(f: dict, g: dict, sign=1) -> dict:
    out = dict(f)
    for e, c in g.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def poly_eval(f: dict, chi) -> Fraction:
    total = Fraction(0)
    for e, c in f.items():
        v = Fraction(c)
        for x, k in zip(chi, e):
            v *= Fraction(x) ** k
        total += v
    return total


def fixed_point_count(u, q):
    """#{y in (Z/(q-1))^n : y . (u - 1) e_j = 0 for all j}."""
    n = len(u)
    m = q - 1
    cols = [[u[i][j] - int(i == j) for i in range(n)] for j in range(n)]
    return sum(
        1
        for y in itertools.product(range(m), repeat=n)
        if all(sum(a * b for a, b in zip(y, c)) % m == 0 for c in cols)
    )


def subword_products(gens, word):
    """Counter-like dict: matrix -> number of subwords multiplying to it."""
    n = len(gens[0])
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    out: dict = {}
    for mask in itertools.product((0, 1), repeat=len(word)):
        m = ident
        for s, b in zip(word, mask):
            if b:
                m = matmul(m, gens[s])
        out[m] = out.get(m, 0) + 1
    return out


def group_order_torsion(a):
    """|coker a| for a square nonsingular integer matrix."""
    return abs(det([list(r) for r in a]))
