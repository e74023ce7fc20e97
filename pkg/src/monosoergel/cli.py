"""Command-line driver: ``monosoergel <command> [options]``.

Exit codes: 0 when every check is green, 1 when a check fails, 2 on invalid
input (unknown group, malformed word or wall, unreadable datum file).

Datum files are JSON documents::

    {"name": "SL2", "cartan": [[2]], "lattice": [[1]]}

``lattice`` is either ``"adjoint"`` (basis of fundamental coweights) or a
matrix whose rows are the simple-coroot coordinates in a basis of the chosen
lattice. Words are comma-separated 1-based simple indices (``1,2,1``) and
``--wall`` is a 1-based index into the positive coroots as listed by
``datum-info``, or ``all``.

Reports are deterministic. ``--json`` prints one canonical JSON document;
wall-clock timings and the cache hit/miss status appear only with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, hecke
from .bimodule import (
    DefectiveFiber,
    MatrixBimodule,
    NotGraphFiltered,
    bott_samelson,
    generic_decompose,
)
from .fields import FieldSpec
from .rootdata import RootDatum, RootDatumError, adjoint_of, build_datum
from .serialize import BimoduleCache, datum_spec, dumps
from .soergel import (
    BigBimodule,
    Report,
    basis_check,
    build_big_bimodule,
    end_check,
    localized_split_check,
    pi1_report,
    embedding_matrix,
    ses_rank1,
    steinberg_basis,
)
from .walls import fixed_locus, fq_point_count, graph_intersection, point_label, separation_check

COMMANDS = (
    "datum-info", "walls-check", "walls-intersections", "bs-char", "bs-decompose",
    "soergel-basis", "soergel-end", "soergel-ses", "soergel-split", "pi1-report", "suite",
)
POINT_COUNT_QS = (3, 4, 5, 7, 8, 9)


class InvalidInput(ValueError):
    pass


class RunConfig:
    def __init__(self, ns: argparse.Namespace):
        self.command = ns.command
        self.group = ns.group
        try:
            self.field = FieldSpec.parse(ns.field)
        except ValueError as exc:
            raise InvalidInput(str(exc)) from None
        if ns.box < 0:
            raise InvalidInput("--box must be nonnegative")
        self.box = ns.box
        self.wall = ns.wall
        self.word_text = ns.word
        self.json = ns.json
        self.timing = ns.timing
        self.cache_dir = ns.cache_dir
        self.point = ns.point
        self.datum = load_datum(ns.group)
        self.cache = BimoduleCache(ns.cache_dir) if ns.cache_dir else None

    def echo(self) -> dict:
        return {
            "group": self.datum.name,
            "field": str(self.field),
            "box": self.box,
            "wall": self.wall,
            "word": self.word_text,
        }

    def word(self, default=None) -> list[int]:
        text = self.word_text if self.word_text is not None else default
        if text is None:
            raise InvalidInput("this command needs --word")
        return parse_word(text, self.datum)

    def walls(self) -> list[int]:
        return parse_wall(self.wall, self.datum)


def load_datum(group: str) -> RootDatum:
    try:
        p = Path(group)
        if group.endswith(".json") or p.is_file():
            with open(p, encoding="utf-8") as fh:
                return build_datum(json.load(fh))
        return build_datum(group)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read datum file {group!r}: {exc}") from None
    except (RootDatumError, ValueError, TypeError) as exc:
        raise InvalidInput(str(exc)) from None


def parse_word(text: str, datum: RootDatum) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        word = [int(x) - 1 for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"malformed word {text!r}") from None
    if any(not 0 <= s < datum.rank for s in word):
        raise InvalidInput(f"word {text!r} uses an index outside 1..{datum.rank}")
    return word


def parse_wall(text: str, datum: RootDatum) -> list[int]:
    n = len(datum.positive_coroots)
    if text.strip().lower() == "all":
        return list(range(n))
    try:
        k = int(text)
    except ValueError:
        raise InvalidInput(f"malformed wall selector {text!r}") from None
    if not 1 <= k <= n:
        raise InvalidInput(f"wall index {k} outside 1..{n}")
    return [k - 1]


def _ordered(datum, mults: dict) -> dict:
    return {w.name(): mults[w] for w in datum.weyl if mults.get(w)}


# ---------------------------------------------------------------------------
# commands


def cmd_datum_info(cfg: RunConfig) -> Report:
    d = cfg.datum
    rep = Report(f"datum-info {d.name}")
    rep.data.update(d.describe())
    rep.data["weyl"] = [w.name() for w in d.weyl]
    rep.data["positive_coroots"] = [
        {"index": k + 1, "coroot": list(c.coroot), "reflection": c.reflection.name()}
        for k, c in enumerate(d.positive_coroots)
    ]
    rep.add("lengths equal inversion counts",
            all(d.length_by_inversions(w) == w.length for w in d.weyl))
    return rep


def cmd_walls_check(cfg: RunConfig) -> Report:
    d = cfg.datum
    rep = Report(f"walls-check {d.name}")
    out = []
    for k in cfg.walls():
        c = d.positive_coroots[k]
        sep = separation_check(d, c.coroot, cfg.field)
        predicted = {frozenset(b) for b in hecke.localized_blocks(d, c.coroot)}
        rep.add(f"wall {k + 1} {list(c.coroot)}: no surviving intersection off the reflection",
                sep.passed, [f"{v.reason()} at {point_label(v.phases)}" for v in sep.violations])
        if sep.passed:
            rep.add(f"wall {k + 1}: blocks pair w with wt", sep.pairing() == predicted)
        fixed = [
            {"component": list(cv.psi), "point": point_label(cv.phases),
             "on_wall": cv.on_allowed_wall, "survives": cv.survives}
            for cv in sep.components_of(c.reflection)
        ]
        body = sep.to_dict()
        body.pop("pairs")
        body["reflection_fixed_points"] = fixed
        out.append(body)
    rep.data["walls"] = out
    return rep


def cmd_walls_intersections(cfg: RunConfig) -> Report:
    d = cfg.datum
    rep = Report(f"walls-intersections {d.name}")
    loci = []
    mismatches = []
    for u in d.weyl:
        fl = fixed_locus(d, u, cfg.field)
        gi = graph_intersection(d, d.identity, u)
        entry = {"u": u.name(), "free_rank": fl.free_rank,
                 "invariant_factors": list(fl.invariant_factors),
                 "characteristic_flags": list(fl.characteristic_flags)}
        ok = (gi.free_rank, gi.invariant_factors) == (fl.free_rank, fl.invariant_factors)
        rep.add(f"graph intersection of 1 and {u.name()} matches Fix({u.name()})", ok)
        counts = {}
        for q in POINT_COUNT_QS:
            if (q - 1) ** d.lattice_rank > 20000:
                continue
            formula, brute = fq_point_count(d, u, q)
            counts[str(q)] = formula
            if formula != brute:
                mismatches.append({"u": u.name(), "q": q, "formula": formula, "brute": brute})
        entry["fq_counts"] = counts
        loci.append(entry)
    rep.add("point counts agree with enumeration", not mismatches, mismatches)
    rep.data["fixed_loci"] = loci
    return rep


def cmd_bs_char(cfg: RunConfig) -> Report:
    d = cfg.datum
    word = cfg.word()
    rep = Report(f"bs-char {d.name} word={[s + 1 for s in word]}")
    rec = hecke.delta_char_bott_samelson(d, word)
    brute = hecke.subword_char(d, word)
    rep.add("recursion equals subword enumeration", rec == brute)
    rep.add(f"total mass 2^{len(word)}", rec.mass == 2 ** len(word), rec.mass)
    rep.data["character"] = rec.by_name()
    rep.data["total"] = rec.mass
    return rep


def _cached(cfg, recipe, build) -> tuple[MatrixBimodule, str]:
    if cfg.cache is None:
        return build(), "off"
    m, hit = cfg.cache.get_or_build(cfg.datum, cfg.field, recipe, build)
    return m, "hit" if hit else "miss"


def _needs_adjoint(cfg):
    if not cfg.datum.adjoint:
        raise InvalidInput(f"{cfg.datum.name} is not adjoint; this command needs an adjoint datum")


def cmd_bs_decompose(cfg: RunConfig) -> Report:
    _needs_adjoint(cfg)
    d = cfg.datum
    word = cfg.word()
    rep = Report(f"bs-decompose {d.name} word={[s + 1 for s in word]}")
    m, cache = _cached(cfg, f"bott_samelson:{word}", lambda: bott_samelson(d, word, cfg.field))
    rep.data["cache"] = cache
    rep.data["rank"] = m.rank
    try:
        dec = generic_decompose(m)
    except (NotGraphFiltered, DefectiveFiber) as exc:
        rep.add("generic fibre is graph filtered", False, str(exc))
        return rep
    pred = hecke.delta_char_bott_samelson(d, word)
    rep.data["decomposition"] = _ordered(d, dec)
    rep.add("generic decomposition equals the character", pred == dec)
    rep.add("multiplicities sum to the rank", sum(dec.values()) == m.rank)
    return rep


def cmd_soergel_basis(cfg: RunConfig) -> Report:
    _needs_adjoint(cfg)
    d = cfg.datum
    rep = Report(f"soergel-basis {d.name}")
    try:
        sb = steinberg_basis(d, cfg.field)
    except ValueError as exc:
        rep.add("monomial basis found", False, str(exc))
        return rep
    cert = basis_check(d, sb.exponents, cfg.field)
    rep.add("basis certified", cert.ok, cert.witness or None)
    rep.data["source"] = sb.source
    rep.data["basis"] = [[w.name(), list(lam)] for w, lam in sb.entries]
    rep.data["determinant"] = repr(cert.determinant)
    return rep


def _big(cfg) -> tuple[BigBimodule, str]:
    d = cfg.datum
    sb = steinberg_basis(d, cfg.field)
    if cfg.cache is None:
        return build_big_bimodule(d, cfg.field, sb), "off"
    recipe = f"big:{sb.exponents}"
    inner, hit = cfg.cache.get_or_build(d, cfg.field, recipe,
                                        lambda: build_big_bimodule(d, cfg.field, sb).inner)
    return BigBimodule(inner, sb, embedding_matrix(d, sb.exponents, cfg.field)), "hit" if hit else "miss"


def cmd_soergel_end(cfg: RunConfig) -> Report:
    _needs_adjoint(cfg)
    big, cache = _big(cfg)
    rep = end_check(cfg.datum, cfg.box, cfg.field, big=big)
    rep.title = f"soergel-end {cfg.datum.name} box={cfg.box}"
    rep.data["cache"] = cache
    return rep


def cmd_soergel_ses(cfg: RunConfig) -> Report:
    _needs_adjoint(cfg)
    d = cfg.datum
    rep = Report(f"soergel-ses {d.name}")
    for s in range(d.rank):
        seq = ses_rank1(d, s, cfg.field)
        for item in seq.report.items:
            rep.add(f"s{s + 1}: {item.name}", item.ok, item.detail)
        rep.data[f"s{s + 1}"] = {"iota": [repr(x[0]) for x in seq.iota.matrix],
                                 "pi": [repr(x) for x in seq.pi.matrix[0]]}
    return rep


def cmd_soergel_split(cfg: RunConfig) -> Report:
    _needs_adjoint(cfg)
    d = cfg.datum
    word = cfg.word()
    walls = cfg.walls()
    chi = None
    if cfg.point:
        try:
            chi = tuple(int(x) for x in cfg.point.split(","))
        except ValueError:
            raise InvalidInput(f"malformed point {cfg.point!r}") from None
        if len(chi) != d.lattice_rank:
            raise InvalidInput(f"point needs {d.lattice_rank} coordinates")
    rep = Report(f"soergel-split {d.name} word={[s + 1 for s in word]}")
    out = []
    for k in walls:
        beta = d.positive_coroots[k].coroot
        sub = localized_split_check(d, word, beta, cfg.field, chi)
        for item in sub.items:
            rep.add(f"wall {k + 1}: {item.name}", item.ok, item.detail)
        out.append({"wall": k + 1, "beta": list(beta), **sub.data})
    rep.data["walls"] = out
    return rep


def cmd_pi1_report(cfg: RunConfig) -> Report:
    d = cfg.datum
    ad = adjoint_of(d)
    n = d.lattice_rank
    rep = Report(f"pi1-report {d.name}")
    sub = [list(r) for r in d.to_adjoint]
    full = [[int(i == j) for j in range(n)] for i in range(n)]
    out = {}
    for label, lat in (("unmodified", full), ("modified", sub)):
        rows = []
        for p in pi1_report(ad, lat):
            rows.append({"w": p.w.name(), "v": p.v.name(), "free_rank": p.free_rank,
                         "invariant_factors": list(p.invariant_factors), "points": p.points})
        out[label] = rows
    modified_ok = all(r["free_rank"] == 0 and not r["invariant_factors"]
                      for r in out["modified"] if r["w"] != r["v"])
    diag_ok = all(r["free_rank"] == n for r in out["modified"] if r["w"] == r["v"])
    rep.add("modified lattice: distinct graphs meet only at the identity", modified_ok)
    rep.add("diagonal pairs give the whole graph", diag_ok)
    rep.data["sublattice"] = sub
    rep.data["pairs"] = out
    return rep


def cmd_suite(cfg: RunConfig) -> Report:
    d = cfg.datum
    rep = Report(f"suite {d.name}")
    runs = [("datum-info", cmd_datum_info), ("walls-intersections", cmd_walls_intersections)]
    if d.adjoint:
        runs += [("walls-check", cmd_walls_check), ("soergel-basis", cmd_soergel_basis),
                 ("soergel-ses", cmd_soergel_ses), ("soergel-end", cmd_soergel_end)]
        word = cfg.word_text or ",".join(str(s + 1) for s in d.longest.word[: 4])
        cfg.word_text = word
        runs += [("bs-char", cmd_bs_char), ("bs-decompose", cmd_bs_decompose)]
    else:
        runs += [("pi1-report", cmd_pi1_report)]
    saved = cfg.wall
    cfg.wall = "all"
    for name, fn in runs:
        sub = fn(cfg)
        for item in sub.items:
            rep.add(f"{name}: {item.name}", item.ok, item.detail)
    if not d.adjoint:
        sep = [separation_check(d, c.coroot, cfg.field) for c in d.positive_coroots]
        viol = [
            {"wall": list(s.beta), "u": v.u.name(), "point": point_label(v.phases)}
            for s in sep for v in s.violations
        ]
        rep.data["expected_wall_violations"] = viol
        rep.add("non-adjoint datum: wall separation fails before modification", bool(viol))
    cfg.wall = saved
    return rep


HANDLERS = {
    "datum-info": cmd_datum_info,
    "walls-check": cmd_walls_check,
    "walls-intersections": cmd_walls_intersections,
    "bs-char": cmd_bs_char,
    "bs-decompose": cmd_bs_decompose,
    "soergel-basis": cmd_soergel_basis,
    "soergel-end": cmd_soergel_end,
    "soergel-ses": cmd_soergel_ses,
    "soergel-split": cmd_soergel_split,
    "pi1-report": cmd_pi1_report,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monosoergel", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", default="PGL2", help="preset (PGL2, PGL3, SL2, B2, ...) or datum JSON file")
    p.add_argument("--field", default="Q", help="Q or a prime p (e.g. 5 or F5)")
    p.add_argument("--box", type=int, default=2, help="support radius for bounded Hom solving")
    p.add_argument("--wall", default="all", help="1-based positive coroot index, or 'all'")
    p.add_argument("--word", default=None, help="comma-separated 1-based simple indices")
    p.add_argument("--point", default=None, help="wall point for soergel-split, e.g. 3,9")
    p.add_argument("--json", action="store_true", help="print one JSON document")
    p.add_argument("--cache-dir", default=None, help="directory for cached bimodules")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def render_text(doc: dict) -> str:
    lines = [f"{doc['title']}: {'PASS' if doc['passed'] else 'FAIL'}"]
    for c in doc["checks"]:
        line = f"  [{'ok' if c['ok'] else 'FAIL'}] {c['name']}"
        if not c["ok"] and c["detail"] not in (None, [], ""):
            line += f"  -- {c['detail']}"
        lines.append(line)
    for k in sorted(doc["data"]):
        v = doc["data"][k]
        lines.append(f"  {k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        cfg = RunConfig(ns)
        rep = HANDLERS[ns.command](cfg)
    except InvalidInput as exc:
        print(f"monosoergel: error: {exc}", file=sys.stderr)
        return 2
    cache = rep.data.pop("cache", None)
    doc = rep.to_dict()
    doc["command"] = ns.command
    doc["config"] = cfg.echo()
    doc["datum"] = datum_spec(cfg.datum)
    doc["version"] = __version__
    if cfg.timing:
        doc["seconds"] = round(time.perf_counter() - start, 3)
        if cache is not None:
            doc["cache"] = cache
    out.write(dumps(doc) if cfg.json else render_text(doc))
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
