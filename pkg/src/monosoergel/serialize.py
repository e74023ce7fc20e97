"""JSON round-tripping for polynomials, wall fractions, bimodules, and an on-disk cache."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .bimodule import MatrixBimodule
from .charring import LaurentPoly, WallFraction
from .fields import FieldSpec
from .rootdata import RootDatum, RootDatumError, build_datum

FORMAT_VERSION = 1


def datum_spec(datum: RootDatum) -> dict:
    """The ``{name, cartan, lattice}`` description that rebuilds ``datum``."""
    cartan = [list(r) for r in datum.cartan]
    if datum.adjoint:
        return {"name": datum.name, "cartan": cartan, "lattice": "adjoint"}
    return {"name": datum.name, "cartan": cartan, "lattice": [list(c) for c in datum.simple_coroots]}


def _entry_from(d, nvars, field, allowed):
    if allowed is not None:
        return WallFraction.from_dict(d, nvars, field, allowed)
    return LaurentPoly.from_dict(d, nvars, field)


def matrix_to(m) -> list:
    return [[x.to_dict() for x in r] for r in m]


def matrix_from(rows, nvars, field, allowed=None) -> tuple:
    return tuple(tuple(_entry_from(x, nvars, field, allowed) for x in r) for r in rows)


def bimodule_to_dict(m: MatrixBimodule) -> dict:
    return {
        "format": FORMAT_VERSION,
        "datum": datum_spec(m.datum),
        "field": str(m.field),
        "ring_tag": m.ring_tag,
        "allowed": list(m.allowed) if m.allowed is not None else None,
        "rank": m.rank,
        "recipe": m.recipe,
        "left_action": [matrix_to(a) for a in m.left_action],
        "left_action_inv": [matrix_to(a) for a in m.left_action_inv],
    }


def bimodule_from_dict(d: dict, datum: RootDatum | None = None) -> MatrixBimodule:
    if d.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported bimodule format {d.get('format')!r}")
    datum = datum or build_datum(d["datum"])
    field = FieldSpec.parse(d["field"])
    allowed = tuple(d["allowed"]) if d["allowed"] is not None else None
    n = datum.lattice_rank
    ls = [matrix_from(a, n, field, allowed) for a in d["left_action"]]
    li = [matrix_from(a, n, field, allowed) for a in d["left_action_inv"]]
    m = MatrixBimodule(datum, field, ls, li, d["ring_tag"], allowed, d.get("recipe", ""))
    if m.rank != d["rank"]:
        raise ValueError("rank field disagrees with the matrices")
    return m


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class BimoduleCache:
    """Directory of JSON bimodules keyed by (datum, field, construction recipe)."""

    def __init__(self, directory):
        self.dir = Path(directory)

    @staticmethod
    def key(datum: RootDatum, field: FieldSpec, recipe: str) -> str:
        blob = json.dumps({"datum": datum_spec(datum), "field": str(field), "recipe": recipe,
                           "format": FORMAT_VERSION}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def path(self, datum, field, recipe) -> Path:
        return self.dir / f"{self.key(datum, field, recipe)}.json"

    def load(self, datum, field, recipe) -> MatrixBimodule | None:
        """The cached value, or None when absent or unreadable."""
        p = self.path(datum, field, recipe)
        try:
            with open(p, encoding="utf-8") as fh:
                return bimodule_from_dict(json.load(fh), datum)
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError, IndexError, RootDatumError, OSError):
            return None

    def store(self, m: MatrixBimodule, recipe: str) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.path(m.datum, m.field, recipe)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(dumps(bimodule_to_dict(m)))
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return p

    def get_or_build(self, datum, field, recipe, build) -> tuple[MatrixBimodule, bool]:
        """(bimodule, was_hit)."""
        hit = self.load(datum, field, recipe)
        if hit is not None:
            return hit, True
        m = build()
        self.store(m, recipe)
        return m, False
