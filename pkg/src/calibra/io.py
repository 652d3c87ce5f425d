"""JSON input/output for complexes, chains, cochains and Plateau instances."""
from __future__ import annotations

import json
from pathlib import Path

from .complex import Chain, DiscreteCochain, SimplicialComplex
from .plateau import PlateauInstance


class InputError(ValueError):
    """Malformed input; the message names the offending field or line."""


def _field(data, key, kind, where):
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected an object")
    if key not in data:
        raise InputError(f"{where}: missing field '{key}'")
    val = data[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise InputError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def complex_from_json(data: dict, where: str = "$") -> SimplicialComplex:
    verts = _field(data, "vertices", list, where)
    dim = data.get("dim")
    for i, v in enumerate(verts):
        if not isinstance(v, list) or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v):
            raise InputError(f"{where}.vertices[{i}]: expected a list of numbers")
        if dim is not None and len(v) != dim:
            raise InputError(f"{where}.vertices[{i}]: expected {dim} coordinates")
    simp = data.get("simplices", {})
    if not isinstance(simp, dict):
        raise InputError(f"{where}.simplices: expected an object keyed by degree")
    parsed = {}
    for d, ss in simp.items():
        try:
            deg = int(d)
        except ValueError:
            raise InputError(f"{where}.simplices: bad degree key {d!r}") from None
        if not isinstance(ss, list):
            raise InputError(f"{where}.simplices.{d}: expected a list")
        for i, s in enumerate(ss):
            if not isinstance(s, list) or len(s) != deg + 1 or not all(isinstance(v, int) for v in s):
                raise InputError(f"{where}.simplices.{d}[{i}]: expected {deg + 1} vertex indices")
        parsed[deg] = ss
    try:
        return SimplicialComplex(verts, parsed)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def chain_from_json(K: SimplicialComplex, data: dict, where: str) -> Chain:
    _field(data, "degree", int, where)
    _field(data, "coeffs", list, where)
    try:
        return Chain.from_json(K, data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from None


def cochain_from_json(K: SimplicialComplex, data: dict, where: str) -> DiscreteCochain:
    _field(data, "degree", int, where)
    _field(data, "values", list, where)
    try:
        return DiscreteCochain.from_json(K, data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from None


def instance_from_json(data: dict, name: str = "") -> PlateauInstance:
    K = complex_from_json(data)
    k = _field(data, "k", int, "$")
    b = chain_from_json(K, _field(data, "boundary", dict, "$"), "$.boundary")
    cand = chain_from_json(K, data["candidate"], "$.candidate") if "candidate" in data else None
    cert = cochain_from_json(K, data["certificate"], "$.certificate") if "certificate" in data else None
    try:
        return PlateauInstance(K, k, b, cand, cert, data.get("name", name))
    except ValueError as exc:
        raise InputError(f"$: {exc}") from None


def load_instance(path) -> PlateauInstance:
    return instance_from_json(read_json(path), Path(path).stem)


def dumps(report: dict) -> str:
    """Deterministic JSON text for reports."""
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=True) + "\n"
