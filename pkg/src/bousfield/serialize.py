"""Canonical JSON persistence for complexes, catalogs, lattices and reports.

Serialization is deterministic: sorted keys, compact separators, a trailing
newline, and no wall-clock values, so identical inputs give byte-identical
documents and every file round-trips bit-exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import algebra as alg
from .algebra import AlgebraSpec
from .catalog import Catalog, NullityMatrix
from .complexes import DegreeWindow, FreeComplex, HomologyTable, ZeroStatus
from .errors import ConfigError
from .lattice import FiniteTensorLattice
from .scalars import CoefficientRing


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def write(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(payload))


def read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- ring / spec ------------------------------------------------------------------


def ring_to_json(ring: CoefficientRing) -> dict:
    return {"kind": ring.kind, "p": ring.p}


def ring_from_json(data) -> CoefficientRing:
    return CoefficientRing(data["kind"], data["p"])


def spec_to_json(spec: AlgebraSpec) -> dict:
    return {
        "ring": ring_to_json(spec.ring),
        "exponent_prefix": list(spec.exponent_prefix),
        "exponent_default": spec.exponent_default,
        "degree_prefix": list(spec.degree_prefix),
    }


def spec_from_json(data) -> AlgebraSpec:
    return AlgebraSpec(
        ring_from_json(data["ring"]),
        tuple(data["exponent_prefix"]),
        data["exponent_default"],
        tuple(data["degree_prefix"]),
    )


# -- elements and complexes ----------------------------------------------------------


def scalar_to_text(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def scalar_from_text(ring: CoefficientRing, text: str):
    if "/" in text:
        num, den = text.split("/")
        return ring.normalize(int(num), int(den))
    if ring.kind == "fp":
        return int(text) % ring.p
    return Fraction(int(text))


def element_to_json(f) -> list:
    return [
        [[list(pair) for pair in mono], scalar_to_text(coef)]
        for mono, coef in f
    ]


def element_from_json(spec: AlgebraSpec, data):
    terms = []
    for mono, coef in data:
        m = tuple((int(i), int(e)) for i, e in mono)
        terms.append((m, scalar_from_text(spec.ring, coef)))
    return alg.element_from_terms(spec, terms)


def complex_to_json(x: FreeComplex) -> dict:
    return {
        "spec": spec_to_json(x.spec),
        "generators": [[c, list(degs)] for c, degs in x.generators],
        "differentials": [
            [c, i, j, element_to_json(f)]
            for c, entries in x.differentials
            for i, j, f in entries
        ],
    }


def complex_from_json(data) -> FreeComplex:
    spec = spec_from_json(data["spec"])
    gens = tuple((c, tuple(degs)) for c, degs in data["generators"])
    blocks: dict = {}
    for c, i, j, f in data["differentials"]:
        blocks.setdefault(c, []).append((i, j, element_from_json(spec, f)))
    diffs = tuple(
        (c, tuple(sorted(entries, key=lambda e: (e[0], e[1]))))
        for c, entries in sorted(blocks.items())
    )
    return FreeComplex(spec, gens, diffs)


# -- window / statuses / tables -------------------------------------------------------


def window_to_json(w: DegreeWindow) -> list:
    return [w.lo, w.hi, w.c_lo, w.c_hi]


def window_from_json(data) -> DegreeWindow:
    return DegreeWindow(*data)


def status_to_json(s: ZeroStatus) -> dict:
    out = {"kind": s.kind}
    if s.kind == "witness":
        out["bidegree"] = list(s.bidegree)
        out["descriptor"] = [s.descriptor[0], list(s.descriptor[1])]
    if s.kind == "inconclusive":
        out["reason"] = s.reason
    if s.stage:
        out["stage"] = s.stage
    return out


def status_from_json(data) -> ZeroStatus:
    kind = data["kind"]
    if kind == "witness":
        return ZeroStatus(
            kind,
            tuple(data["bidegree"]),
            (data["descriptor"][0], tuple(data["descriptor"][1])),
            stage=data.get("stage", 0),
        )
    return ZeroStatus(kind, reason=data.get("reason", ""),
                      stage=data.get("stage", 0))


def table_to_json(t: HomologyTable) -> dict:
    return {
        "ring": t.ring_name,
        "entries": [
            [c, d, rank, list(torsion)]
            for (c, d), (rank, torsion) in t.entries
        ],
    }


def table_from_json(data) -> HomologyTable:
    entries = tuple(
        ((c, d), (rank, tuple(torsion)))
        for c, d, rank, torsion in data["entries"]
    )
    return HomologyTable(data["ring"], entries)


# -- catalogs -----------------------------------------------------------------------


def catalog_to_json(cat: Catalog, nullity: NullityMatrix = None) -> dict:
    out = {
        "prime": cat.prime,
        "exponent_prefix": list(cat.specs["zp"].exponent_prefix),
        "exponent_default": cat.specs["zp"].exponent_default,
        "degree_prefix": list(cat.specs["zp"].degree_prefix),
        "objects": [
            {"id": o.ident, "home": o.home, "provenance": o.provenance}
            for o in cat.objects
        ],
        "hash": cat.hash(),
    }
    if nullity is not None:
        out["nullity"] = {
            "window": window_to_json(nullity.window),
            "cutoff": nullity.cutoff,
            "consecutive": nullity.consecutive,
            "statuses": [status_to_json(s) for s in nullity.statuses],
        }
    return out


def catalog_from_json(data):
    cat = Catalog(
        data["prime"],
        tuple(data["exponent_prefix"]),
        data["exponent_default"],
        tuple(data["degree_prefix"]),
    )
    for entry in data["objects"]:
        ident = cat.add_object(entry["provenance"])
        if ident != entry["id"]:
            raise ConfigError("catalog file ids are not in construction order")
    nullity = None
    if "nullity" in data:
        nd = data["nullity"]
        nullity = NullityMatrix(
            window_from_json(nd["window"]),
            nd["cutoff"],
            nd["consecutive"],
            cat.hash(),
            tuple(status_from_json(s) for s in nd["statuses"]),
        )
    return cat, nullity


# -- lattices -----------------------------------------------------------------------


def lattice_to_json(lat: FiniteTensorLattice) -> dict:
    return {
        "names": list(lat.names),
        "leq": [[1 if v else 0 for v in row] for row in lat.leq],
        "join": [list(row) for row in lat.join],
        "meet": [list(row) for row in lat.meet],
        "tensor": [list(row) for row in lat.tensor],
        "bottom": lat.bottom,
        "top": lat.top,
        "unital": lat.unital,
        "label": lat.label,
    }


def lattice_from_json(data) -> FiniteTensorLattice:
    return FiniteTensorLattice(
        tuple(data["names"]),
        tuple(tuple(bool(v) for v in row) for row in data["leq"]),
        tuple(tuple(row) for row in data["join"]),
        tuple(tuple(row) for row in data["meet"]),
        tuple(tuple(row) for row in data["tensor"]),
        data["bottom"],
        data["top"],
        data["unital"],
        data.get("label", ""),
    )
