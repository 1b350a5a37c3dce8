"""JSON manifests describing varieties and curves.

Accepted shapes::

    {"name": ..., "params": [...], "coords": ["expr", ...], "tags": [...]}
    {"builtin": "segre:2:2"}
    {"op": "cone", "of": <manifest>, "k": 1}
    {"op": "project", "of": <manifest>, "center": [[row], ...]}
    {"op": "join", "of": [<manifest>, <manifest>]}
    {"op": "curve", "degree": d, "forms": ["expr in t", x5]}   (or without "op")
"""
from __future__ import annotations

import hashlib
import json
import re
from typing import Any

from .catalog import LinearCenter, ParamVariety, builtin, cone_over, join, project
from .curves import InvalidCurveError, RationalCurveP4
from .parse import ParseError, parse_poly, parse_rational

__all__ = ["ManifestError", "load", "loads", "parse_manifest", "emit", "digest"]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ManifestError(ValueError):
    pass


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise ManifestError(f"{where}: missing field {key!r}")
    return obj[key]


def _explicit(obj: dict) -> ParamVariety:
    name = str(obj.get("name", "variety"))
    params = _require(obj, "params", name)
    coords = _require(obj, "coords", name)
    if not isinstance(params, list) or not all(
            isinstance(p, str) and _IDENT.match(p) for p in params):
        raise ManifestError(f"{name}: params must be a list of identifiers")
    if len(set(params)) != len(params):
        raise ManifestError(f"{name}: duplicate parameter names")
    if not isinstance(coords, list) or not coords:
        raise ManifestError(f"{name}: coords must be a non-empty list of expressions")
    polys = []
    for i, src in enumerate(coords):
        try:
            polys.append(parse_poly(src, params))
        except ParseError as exc:
            raise ManifestError(f"{name}: coordinate {i}: {exc}") from None
    tags = obj.get("tags", [])
    expected = obj.get("expected", {})
    try:
        return ParamVariety(name, tuple(params), tuple(polys), frozenset(tags), dict(expected),
                            obj.get("case"))
    except ValueError as exc:
        raise ManifestError(f"{name}: {exc}") from None


def _curve(obj: dict) -> RationalCurveP4:
    d = _require(obj, "degree", "curve")
    forms = _require(obj, "forms", "curve")
    if not isinstance(d, int) or isinstance(d, bool):
        raise ManifestError("curve: degree must be an integer")
    if not isinstance(forms, list) or len(forms) != 5:
        raise ManifestError("curve: forms must be a list of 5 expressions in t")
    polys = []
    for i, src in enumerate(forms):
        try:
            polys.append(parse_poly(src, ["t"]).to_upoly())
        except ParseError as exc:
            raise ManifestError(f"curve: form {i}: {exc}") from None
    try:
        return RationalCurveP4(d, tuple(polys))
    except InvalidCurveError as exc:
        raise ManifestError(f"curve: {exc}") from None


def parse_manifest(obj: Any):
    """Build a ParamVariety or RationalCurveP4 from decoded JSON."""
    if not isinstance(obj, dict):
        raise ManifestError("manifest must be a JSON object")
    if "builtin" in obj:
        try:
            return builtin(str(obj["builtin"]))
        except KeyError as exc:
            raise ManifestError(str(exc.args[0])) from None
    op = obj.get("op")
    if op is None:
        if "forms" in obj:
            return _curve(obj)
        return _explicit(obj)
    if op == "curve":
        return _curve(obj)
    if op == "cone":
        base = _variety(_require(obj, "of", "cone"))
        k = obj.get("k", 1)
        if not isinstance(k, int) or k < 1:
            raise ManifestError("cone: k must be a positive integer")
        return cone_over(base, k)
    if op == "project":
        base = _variety(_require(obj, "of", "project"))
        rows = _require(obj, "center", "project")
        try:
            center = LinearCenter.from_rows([[parse_rational(x) for x in row] for row in rows],
                                            base.ncoords)
            return project(base, center)
        except (ParseError, ValueError) as exc:
            raise ManifestError(f"project: {exc}") from None
    if op == "join":
        parts = _require(obj, "of", "join")
        if not isinstance(parts, list) or len(parts) != 2:
            raise ManifestError("join: 'of' must list two manifests")
        try:
            return join(_variety(parts[0]), _variety(parts[1]))
        except ValueError as exc:
            raise ManifestError(f"join: {exc}") from None
    raise ManifestError(f"unknown op {op!r}")


def _variety(obj: Any) -> ParamVariety:
    out = parse_manifest(obj)
    if not isinstance(out, ParamVariety):
        raise ManifestError("expected a variety, got a curve")
    return out


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_manifest(obj)


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def emit(obj) -> dict:
    """Explicit manifest for a variety or curve (round-trips through :func:`parse_manifest`)."""
    if isinstance(obj, RationalCurveP4):
        return {"degree": obj.d, "forms": [f.to_str("t") for f in obj.forms]}
    out = {
        "name": obj.name,
        "params": list(obj.params),
        "coords": [c.to_str() for c in obj.coords],
    }
    if obj.tags:
        out["tags"] = sorted(obj.tags)
    if obj.expected:
        out["expected"] = dict(sorted(obj.expected.items()))
    if obj.case:
        out["case"] = obj.case
    return out


def digest(obj: Any) -> str:
    """sha256 of the canonical JSON encoding."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()
