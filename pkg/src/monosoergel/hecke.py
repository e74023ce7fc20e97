"""Decategorified monodromic Hecke calculus: characters and rewrite rules."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .rootdata import RootDatum, WeylElement

SUBWORD_CAP = 20


class DeltaCharacter:
    """Standard-filtration multiplicities, a finite multiset of Weyl elements."""

    def __init__(self, datum: RootDatum, mults=None):
        self.datum = datum
        self.mults = Counter({datum.element(w): m for w, m in (mults or {}).items() if m})

    def __getitem__(self, w) -> int:
        return self.mults.get(self.datum.element(w), 0)

    def __eq__(self, other):
        if isinstance(other, DeltaCharacter):
            return self.mults == other.mults
        if isinstance(other, dict):
            return self.mults == DeltaCharacter(self.datum, other).mults
        return NotImplemented

    __hash__ = None

    @property
    def mass(self) -> int:
        return sum(self.mults.values())

    def items(self):
        order = {w: i for i, w in enumerate(self.datum.weyl)}
        return sorted(self.mults.items(), key=lambda kv: order[kv[0]])

    def by_name(self) -> dict[str, int]:
        return {w.name(): m for w, m in self.items()}

    def __repr__(self):
        return f"DeltaCharacter({self.by_name()})"


def delta_char_bott_samelson(datum: RootDatum, word) -> DeltaCharacter:
    """Each letter s sends the character c to u -> c(u) + c(us)."""
    cur = Counter({datum.identity: 1})
    for s in word:
        t = datum.simple_reflections[s]
        new = Counter()
        for u in datum.weyl:
            m = cur.get(u, 0) + cur.get(datum.mul(u, t), 0)
            if m:
                new[u] = m
        cur = new
    return DeltaCharacter(datum, cur)


def subword_char(datum: RootDatum, word) -> DeltaCharacter:
    """Brute force over all 2^r subwords, multiplied in word order."""
    word = list(word)
    if len(word) > SUBWORD_CAP:
        raise ValueError(f"word longer than the enumeration cap {SUBWORD_CAP}")
    gens = datum.simple_reflections
    cnt = Counter()
    for mask in itertools.product((0, 1), repeat=len(word)):
        cnt[datum.mul(*(gens[s] for s, b in zip(word, mask) if b))] += 1
    return DeltaCharacter(datum, cnt)


# ---------------------------------------------------------------------------
# symbols and rewriting


@dataclass(frozen=True)
class Symbol:
    kind: str  # "D" (standard), "N" (costandard) or "X" (Xi_s)
    w: WeylElement

    def __post_init__(self):
        if self.kind not in ("D", "N", "X"):
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    def __str__(self):
        return {"D": "Delta", "N": "Nabla", "X": "Xi"}[self.kind] + "_" + self.w.name()


@dataclass(frozen=True)
class LengthNotAdditive:
    """No convolution rule applies at this level when lengths do not add."""

    v: WeylElement
    w: WeylElement

    def __bool__(self):
        return False


ConvolutionExpr = tuple  # of Symbol, read left to right


def convolve_standards(datum: RootDatum, kind: str, v: WeylElement, w: WeylElement):
    if kind not in ("D", "N"):
        raise ValueError("only standards and costandards convolve by this rule")
    vw = datum.mul(v, w)
    if vw.length != datum.element(v).length + datum.element(w).length:
        return LengthNotAdditive(datum.element(v), datum.element(w))
    return Symbol(kind, vw)


def simplify_inverse_pairs(datum: RootDatum, expr) -> ConvolutionExpr:
    """Rewrite Delta_w Nabla_{w^-1} and Nabla_{w^-1} Delta_w to the unit and drop units.

    A single left-to-right stack pass reaches the normal form since every
    rewrite only shortens the word and exposes the new neighbour pair to the
    same test.
    """
    one = datum.identity
    stack: list[Symbol] = []
    for sym in expr:
        sym = Symbol(sym.kind, datum.element(sym.w))
        if sym.kind in ("D", "N") and sym.w == one:
            continue
        if stack:
            top = stack[-1]
            pair = {top.kind, sym.kind} == {"D", "N"} and datum.mul(top.w, sym.w) == one
            if pair:
                stack.pop()
                continue
        stack.append(sym)
    if not stack:
        return (Symbol("D", one),)
    return tuple(stack)


def localized_block(datum: RootDatum, w: WeylElement, v: WeylElement, beta) -> bool:
    """Whether v lies in {w, w t} for the reflection t of ``beta``."""
    t = datum.reflection(tuple(beta))
    w, v = datum.element(w), datum.element(v)
    return v == w or v == datum.mul(w, t)


def localized_blocks(datum: RootDatum, beta) -> tuple[tuple[WeylElement, ...], ...]:
    """W partitioned into the blocks predicted by :func:`localized_block`."""
    seen = set()
    out = []
    for w in datum.weyl:
        if w in seen:
            continue
        blk = tuple(v for v in datum.weyl if localized_block(datum, w, v, beta))
        seen.update(blk)
        out.append(blk)
    return tuple(out)
