"""Exact linear algebra over a :class:`FieldSpec` (dense and sparse)."""

from __future__ import annotations

from .fields import FieldSpec


def rref(rows, field: FieldSpec):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[field(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.reduce(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.reduce(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, field: FieldSpec) -> int:
    return len(rref(rows, field)[1]) if rows else 0


def nullspace(rows, field: FieldSpec, ncols: int | None = None):
    """Basis of {x : rows x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, p in enumerate(pivots):
            x[p] = field.reduce(-m[i][f])
        basis.append(x)
    return basis


def matmul(a, b, field: FieldSpec):
    cols = list(zip(*b))
    return [[field.reduce(sum(x * y for x, y in zip(r, c))) for c in cols] for r in a]


def shift(a, t, field: FieldSpec):
    return [[field.reduce(x - t) if i == j else x for j, x in enumerate(r)] for i, r in enumerate(a)]


def matpow(a, k: int, field: FieldSpec):
    n = len(a)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    base = a
    while k:
        if k & 1:
            out = matmul(out, base, field)
        base = matmul(base, base, field)
        k >>= 1
    return out


def joint_kernel_dim(mats, field: FieldSpec) -> int:
    n = len(mats[0][0])
    stacked = [row for m in mats for row in m]
    return n - rank(stacked, field)


def joint_eigen_dims(mats, values, field: FieldSpec) -> tuple[int, int]:
    """(eigenspace dim, generalised eigenspace dim) of commuting ``mats`` at ``values``."""
    n = len(mats[0])
    shifted = [shift(m, t, field) for m, t in zip(mats, values)]
    eig = joint_kernel_dim(shifted, field)
    if eig == 0:
        return 0, 0
    gen = joint_kernel_dim([matpow(s, n, field) for s in shifted], field)
    return eig, gen


class SparseEchelon:
    """Incremental sparse row echelon form for nullspace computation.

    Rows are dicts ``column -> value``. Each inserted row is reduced against
    the existing pivots, so a pivot row never contains earlier pivot columns;
    back substitution therefore runs in reverse insertion order.
    """

    def __init__(self, ncols: int, field: FieldSpec):
        self.ncols = ncols
        self.field = field
        self.pivot_rows: dict[int, dict[int, object]] = {}
        self.order: list[int] = []

    def add(self, row: dict) -> bool:
        f = self.field
        row = {c: v for c, v in row.items() if v}
        # one pass in insertion order: eliminating pivot p only introduces
        # free columns or pivots inserted after p
        for p in self.order:
            v = row.get(p)
            if not v:
                continue
            for cc, pv in self.pivot_rows[p].items():
                nv = f.reduce(row.get(cc, 0) - v * pv)
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        if not row:
            return False
        c = min(row)
        inv = f.inv(row[c])
        self.pivot_rows[c] = {k: f.reduce(v * inv) for k, v in row.items()}
        self.order.append(c)
        return True

    def nullspace(self) -> list[dict[int, object]]:
        f = self.field
        free = [c for c in range(self.ncols) if c not in self.pivot_rows]
        out = []
        for fc in free:
            x = {fc: 1}
            for p in reversed(self.order):
                s = 0
                for c, v in self.pivot_rows[p].items():
                    if c != p and c in x:
                        s = f.reduce(s + v * x[c])
                if s:
                    x[p] = f.reduce(-s)
            out.append(x)
        return out
