"""Smith normal form and integer kernels for small integer matrices."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SmithForm:
    """``U A V = D`` with ``U``, ``V`` unimodular and ``D`` diagonal, d_1 | d_2 | ..."""

    U: list
    D: list
    V: list

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a) -> SmithForm:
    m = len(a)
    n = len(a[0]) if m else 0
    D = [list(map(int, r)) for r in a]
    U = _eye(m)
    V = _eye(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        D[dst] = [x - q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for M in (D, V):
            for r in M:
                r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // D[t][t])
                    dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, D[t][j] // D[t][t])
                    dirty |= D[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if all(D[i][j] == 0 for i in range(t, m) for j in range(t, n)):
            break
    for t in range(min(m, n)):
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(U, D, V)


def integer_kernel(a, ncols: int | None = None) -> list[list[int]]:
    """Z-basis (as column vectors) of {x in Z^n : a x = 0}."""
    if not a:
        return _eye(ncols or 0)
    snf = smith_normal_form(a)
    n = len(a[0])
    r = snf.rank
    return [[snf.V[i][j] for i in range(n)] for j in range(r, n)]


@dataclass(frozen=True)
class CokernelDescriptor:
    """Z^m / (column span of a) = Z^free_rank + sum Z/d_i."""

    free_rank: int
    invariant_factors: tuple[int, ...]
    U: list
    diag: tuple[int, ...]

    def image(self, x) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(free coordinates, torsion residues) of a vector of Z^m."""
        y = [sum(u * v for u, v in zip(row, x)) for row in self.U]
        free, tors = [], []
        for k, yk in enumerate(y):
            d = self.diag[k] if k < len(self.diag) else 0
            if d == 0:
                free.append(yk)
            elif d > 1:
                tors.append(yk % d)
        return tuple(free), tuple(tors)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out


def cokernel(a, m: int | None = None) -> CokernelDescriptor:
    """Cokernel of an integer matrix (m rows) acting on column vectors."""
    if not a or not a[0]:
        m = m if m is not None else len(a)
        return CokernelDescriptor(m, (), _eye(m), tuple([0] * m))
    snf = smith_normal_form(a)
    rows = len(a)
    diag = list(snf.diagonal) + [0] * (rows - len(snf.diagonal))
    free = sum(1 for d in diag if d == 0)
    inv = tuple(d for d in diag if d > 1)
    return CokernelDescriptor(free, inv, snf.U, tuple(diag))
