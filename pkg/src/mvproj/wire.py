"""JSON file formats.

* one-variable function: a list of node pairs, e.g.
  ``[["0","0"], ["1/6","1"], ["1","1"]]``;
* two-variable function: a list of ``{"triangle": [[x,y],[x,y],[x,y]],
  "form": [a, b, c]}`` with integer a, b, c;
* substitution pair: ``{"d1": <2-var>, "d2": <2-var>}``;
* case-i spec: ``{"f1": <1-var>, "f2": ..., "g1": ..., "g2": ...}``;
* triangle fan: ``{"triangles": [{"oa": [a, b], "ob": [a1, b1],
  "ab": [a2, b2, c], ...optional parameters}]}``.

Rationals travel as strings "p/q" (denominator omitted when 1); loading
validates shape and, for functions, the free-algebra conditions.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .builders import RectTypeSpec, TriangleFanSpec, TriangleSpec
from .errors import InputError
from .geometry import CellComplex, ConvexCell, Point, form
from .projectivity import SubstitutionPair
from .pwl1 import Pwl1
from .pwl2 import Pwl2
from .rationals import format_rational, parse_rational


def point_to_json(p: Point) -> list[str]:
    return [format_rational(p[0]), format_rational(p[1])]


def point_from_json(data: Any) -> Point:
    if not isinstance(data, (list, tuple)) or len(data) != 2:
        raise InputError(f"a point is a two-element list, got {data!r}")
    return (parse_rational(data[0]), parse_rational(data[1]))


def pwl1_to_json(f: Pwl1) -> list[list[str]]:
    return [[format_rational(x), format_rational(y)] for x, y in f.nodes]


def pwl1_from_json(data: Any, validate: bool = True) -> Pwl1:
    if not isinstance(data, list):
        raise InputError("a one-variable function is a list of node pairs")
    f = Pwl1.from_nodes([point_from_json(node) for node in data])
    if validate:
        problems = f.validate()
        if problems:
            raise InputError("not a free-algebra element: " + "; ".join(problems))
    return f


def pwl2_to_json(f: Pwl2) -> list[dict]:
    return [
        {
            "triangle": [point_to_json(v) for v in cell.vertices],
            "form": [int(g.a), int(g.b), int(g.c)] if g.has_integer_coefficients()
            else [str(g.a), str(g.b), str(g.c)],
        }
        for cell, g in f.tiles
    ]


def pwl2_from_json(data: Any, validate: bool = True) -> Pwl2:
    if not isinstance(data, list):
        raise InputError("a two-variable function is a list of triangle records")
    tiles = []
    for rec in data:
        if not isinstance(rec, dict) or "triangle" not in rec or "form" not in rec:
            raise InputError("each tile needs 'triangle' and 'form'")
        pts = [point_from_json(p) for p in rec["triangle"]]
        if len(pts) != 3:
            raise InputError("a tile triangle has exactly three vertices")
        coeffs = rec["form"]
        if len(coeffs) != 3:
            raise InputError("a form has exactly three coefficients")
        cell = ConvexCell.from_points(pts)
        if cell is None or cell.kind != "polygon":
            raise InputError(f"degenerate triangle {rec['triangle']}")
        tiles.append((cell, form(*(parse_rational(str(c)) for c in coeffs))))
    f = Pwl2.from_tiles(tiles, merge=False)
    if validate:
        problems = f.validate()
        if problems:
            raise InputError("not a free-algebra element: " + "; ".join(problems[:5]))
    return f


PwlFunction = Union[Pwl1, Pwl2]


def function_to_json(f: PwlFunction) -> Any:
    return pwl1_to_json(f) if isinstance(f, Pwl1) else pwl2_to_json(f)


def function_from_json(data: Any, validate: bool = True) -> PwlFunction:
    if isinstance(data, list) and data and isinstance(data[0], dict):
        return pwl2_from_json(data, validate=validate)
    return pwl1_from_json(data, validate=validate)


def pair_to_json(pair: SubstitutionPair) -> dict:
    return {"d1": pwl2_to_json(pair.d1), "d2": pwl2_to_json(pair.d2)}


def pair_from_json(data: Any) -> SubstitutionPair:
    if not isinstance(data, dict) or "d1" not in data or "d2" not in data:
        raise InputError("a pair file holds {'d1': ..., 'd2': ...}")
    return SubstitutionPair(pwl2_from_json(data["d1"]), pwl2_from_json(data["d2"]))


def rect_spec_from_json(data: Any) -> RectTypeSpec:
    if not isinstance(data, dict) or set(data) < {"f1", "f2", "g1", "g2"}:
        raise InputError("a case-i spec holds f1, f2, g1 and g2 node lists")
    return RectTypeSpec(
        f1=pwl1_from_json(data["f1"]),
        f2=pwl1_from_json(data["f2"]),
        g1=pwl1_from_json(data["g1"]),
        g2=pwl1_from_json(data["g2"]),
    )


def fan_spec_from_json(data: Any) -> TriangleFanSpec:
    if not isinstance(data, dict) or "triangles" not in data:
        raise InputError("a fan file holds {'triangles': [...]}")
    triangles = []
    for rec in data["triangles"]:
        for key in ("oa", "ob", "ab"):
            if key not in rec:
                raise InputError(f"fan triangle needs '{key}'")
        triangles.append(TriangleSpec(
            oa=tuple(int(v) for v in rec["oa"]),
            ob=tuple(int(v) for v in rec["ob"]),
            ab=tuple(int(v) for v in rec["ab"]),
            s=rec.get("s"),
            s1=rec.get("s1"),
            l=rec.get("l"),
            m=rec.get("m"),
            t=rec.get("t"),
            t_hat=rec.get("t_hat"),
        ))
    return TriangleFanSpec(tuple(triangles))


def complex_to_json(c: CellComplex) -> list[dict]:
    return [{"kind": cell.kind, "vertices": [point_to_json(v) for v in cell.vertices]}
            for cell in c.cells]


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(data: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
