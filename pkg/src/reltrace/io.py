"""Input documents and invariant reports.

A document is one JSON object::

    {"name": ..., "tier": "simplicial" | "cw",
     "simplicial": {"vertices": [...], "simplices": [[...], ...],
                    "A_simplices": [[...], ...], "vertex_map": {v: w}},
     "cw": {"generators": [{"name": "a", "in_A": true}, ...],
            "vertex_in_A": true,
            "cells": {"2": [{"name": "T", "in_A": true, "relator": WORD}],
                      "3": [{"name": "E", "in_A": false,
                             "boundary": {"T": [[1, WORD]], ...}}]},
            "map": {"phi": {"a": WORD, ...},
                    "cell_images": {"T": "derive", "D": {"D": [[-1, []]]}}}},
     "assertions": {"A_closed_smooth_manifold": bool,
                    "B_closed_smooth_manifold": bool,
                    "dimensions": {"A": int, "B": int}}}

Words are lists of ``[generator, exponent]`` pairs. ``simplices`` may also
be given per dimension as ``{"0": [...], "1": [...]}``.
"""
import json
from dataclasses import dataclass, field

from reltrace.complexes import (
    Cell, CellularPairData, Diagnostic, SimplicialPair, VertexSelfMap,
)
from reltrace.fundamental_group import parse_word

REPORT_VERSION = 1


class DocumentError(ValueError):
    """The document does not follow the input schema."""


@dataclass
class InputDocument:
    name: str
    tier: str
    payload: object          # SimplicialPair or CellularPairData
    fmap: object = None      # VertexSelfMap for the simplicial tier
    assertions: dict = field(default_factory=dict)


def _word(data, where):
    try:
        return parse_word(data)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: malformed word {data!r}") from exc


def _pairs(data, where):
    if not isinstance(data, list):
        raise DocumentError(f"{where}: expected [[coeff, word], ...]")
    out = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], int)):
            raise DocumentError(f"{where}: expected [coeff, word], got {item!r}")
        out.append((item[0], _word(item[1], where)))
    return out


def _simplex_list(data, where):
    if isinstance(data, dict):
        flat = []
        for k in sorted(data, key=int):
            flat.extend(data[k])
        data = flat
    if not isinstance(data, list) or any(not isinstance(s, list) or not s for s in data):
        raise DocumentError(f"{where}: expected a list of vertex arrays")
    return data


def parse_simplicial(payload):
    for key in ("vertices", "simplices"):
        if key not in payload:
            raise DocumentError(f"simplicial payload lacks {key!r}")
    verts = payload["vertices"]
    if not isinstance(verts, list):
        raise DocumentError("'vertices' must be a list")
    index = {v: i for i, v in enumerate(verts)}
    simplices = _simplex_list(payload["simplices"], "simplices")
    a_simplices = _simplex_list(payload.get("A_simplices", []), "A_simplices")
    for s in simplices + a_simplices:
        for v in s:
            if v not in index:
                raise DocumentError(f"simplex {s} uses unknown vertex {v!r}")
        if len(set(s)) != len(s):
            raise DocumentError(f"simplex {s} repeats a vertex")
    pair = SimplicialPair.from_names(verts, simplices, a_simplices)
    fmap = None
    if "vertex_map" in payload:
        m = payload["vertex_map"]
        if not isinstance(m, dict) or set(m) != set(map(str, verts)) and set(m) != set(verts):
            raise DocumentError("'vertex_map' must assign every vertex")
        lookup = {str(v): v for v in verts}
        images = []
        for v in verts:
            w = m.get(v, m.get(str(v)))
            w = lookup.get(str(w), w)
            if w not in index:
                raise DocumentError(f"vertex_map sends {v!r} to unknown vertex {w!r}")
            images.append(index[w])
        fmap = VertexSelfMap(tuple(images))
    return pair, fmap


def parse_cw(payload):
    for key in ("generators", "map"):
        if key not in payload:
            raise DocumentError(f"cw payload lacks {key!r}")
    gens = []
    for g in payload["generators"]:
        if not isinstance(g, dict) or "name" not in g:
            raise DocumentError(f"generator entry {g!r} lacks a name")
        gens.append((str(g["name"]), bool(g.get("in_A", False))))
    cells = []
    for dim, entries in sorted(payload.get("cells", {}).items(), key=lambda kv: int(kv[0])):
        d = int(dim)
        for c in entries:
            name = str(c["name"])
            relator = _word(c["relator"], f"relator of {name}") if "relator" in c else None
            boundary = None
            if "boundary" in c:
                if not isinstance(c["boundary"], dict):
                    raise DocumentError(f"boundary of {name} must map cell names to pairs")
                boundary = {str(t): _pairs(p, f"boundary of {name}")
                            for t, p in c["boundary"].items()}
            cells.append(Cell(name, d, bool(c.get("in_A", False)), relator, boundary))
    m = payload["map"]
    if "phi" not in m:
        raise DocumentError("cw map lacks 'phi'")
    phi = {str(g): _word(w, f"phi({g})") for g, w in m["phi"].items()}
    images = {}
    for name, img in m.get("cell_images", {}).items():
        if img == "derive":
            images[str(name)] = "derive"
        elif isinstance(img, dict):
            images[str(name)] = {str(t): _pairs(p, f"image of {name}") for t, p in img.items()}
        else:
            raise DocumentError(f"image of {name} must be a vector or \"derive\"")
    any_a = any(a for _, a in gens) or any(c.in_a for c in cells)
    vertex_in_a = bool(payload.get("vertex_in_A", any_a))
    return CellularPairData(tuple(gens), tuple(cells), phi, images, vertex_in_a)


def parse_document(doc, tier=None):
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    tier = tier or doc.get("tier")
    if tier not in ("simplicial", "cw"):
        present = [t for t in ("simplicial", "cw") if t in doc]
        if len(present) != 1:
            raise DocumentError("document must name its tier or carry exactly one tier payload")
        tier = present[0]
    if tier not in doc:
        raise DocumentError(f"document has no {tier!r} payload")
    assertions = doc.get("assertions", {})
    if not isinstance(assertions, dict):
        raise DocumentError("'assertions' must be an object")
    name = str(doc.get("name", ""))
    if tier == "simplicial":
        pair, fmap = parse_simplicial(doc[tier])
        return InputDocument(name, tier, pair, fmap, assertions)
    return InputDocument(name, tier, parse_cw(doc[tier]), None, assertions)


def load_document(path, tier=None):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: {exc}") from exc
    return parse_document(doc, tier)


@dataclass
class InvariantReport:
    """Plain-data report; ``data`` holds only JSON types in a fixed key order."""

    data: dict

    def to_json(self):
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text))

    def to_text(self):
        lines = []
        _render(self.data, 0, lines)
        return "\n".join(lines) + "\n"


def _scalar(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _render(value, indent, lines):
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}-")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(pad + _scalar(value))


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return _scalar(v)


def diagnostic_json(d):
    if isinstance(d, Diagnostic):
        return {"module": d.module, "severity": d.severity, "code": d.code, "message": d.message}
    return {"module": "cli", "severity": "error", "code": "invalid-input", "message": str(d)}
