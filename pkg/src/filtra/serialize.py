"""JSON interchange with exact scalars written as strings.

Integer keys (degrees, indices) are emitted in numeric order so that
re-encoding a decoded value reproduces the original bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .chain import ChainComplex, ChainMap, tensor
from .errors import InvariantViolation
from .exactlin import Field, Matrix
from .filtalg import FilteredAlgebra, GradedAlgebra
from .graded import GradedObject
from .sequence import Sequence, SequenceMap
from .specseq import SpectralSequencePage

__all__ = [
    "encode_field",
    "decode_field",
    "encode_matrix",
    "decode_matrix",
    "encode_complex",
    "decode_complex",
    "encode_chain_map",
    "decode_chain_map",
    "encode_sequence",
    "decode_sequence",
    "encode_sequence_map",
    "decode_sequence_map",
    "encode_graded",
    "decode_graded",
    "encode_algebra",
    "decode_algebra",
    "encode_graded_algebra",
    "encode_pages",
    "dumps",
]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


def encode_field(f: Field) -> dict:
    return {"kind": "rational"} if not f.is_prime else {"kind": "prime-order", "p": f.p}


def decode_field(obj: dict) -> Field:
    kind = obj.get("kind")
    if kind == "rational":
        return Field("rational")
    if kind in ("prime", "prime-order"):
        try:
            return Field("prime", int(obj["p"]))
        except ValueError as exc:
            raise InvariantViolation(str(exc)) from exc
    raise InvariantViolation(f"unknown field kind {kind!r}")


def encode_matrix(m: Matrix) -> list:
    return [[m.field.format(v) for v in m.row(i)] for i in range(m.rows)]


def decode_matrix(field: Field, rows: list, shape: tuple[int, int]) -> Matrix:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
        raise InvariantViolation(f"matrix does not have shape {r}x{c}")
    try:
        return Matrix._raw(field, r, c, [[field.parse(str(v)) for v in row] for row in rows])
    except (ValueError, ZeroDivisionError) as exc:
        raise InvariantViolation(f"bad scalar: {exc}") from exc


def _int_keys(d: dict) -> dict[int, Any]:
    try:
        return {int(k): v for k, v in d.items()}
    except ValueError as exc:
        raise InvariantViolation(f"non-integer key: {exc}") from exc


# complexes and maps


def encode_complex(c: ChainComplex) -> dict:
    return {
        "field": encode_field(c.field),
        "degrees": {str(k): n for k, n in sorted(c.dims.items())},
        "differentials": {str(k): encode_matrix(m) for k, m in sorted(c.diff.items()) if not m.is_zero()},
    }


def decode_complex(obj: dict) -> ChainComplex:
    field = decode_field(obj["field"])
    dims = {k: int(v) for k, v in _int_keys(obj.get("degrees", {})).items()}
    diff = {
        k: decode_matrix(field, rows, (dims.get(k - 1, 0), dims.get(k, 0)))
        for k, rows in _int_keys(obj.get("differentials", {})).items()
    }
    return ChainComplex(field, dims, diff)


def _encode_components(f: ChainMap) -> dict:
    return {str(k): encode_matrix(m) for k, m in sorted(f.comp.items())}


def _decode_components(source: ChainComplex, target: ChainComplex, obj: Any) -> ChainMap:
    if isinstance(obj, list):
        # a bare matrix is read as the degree 0 component
        obj = {"0": obj}
    comp = {
        k: decode_matrix(source.field, rows, (target.dim(k), source.dim(k)))
        for k, rows in _int_keys(obj).items()
    }
    return ChainMap(source, target, comp)


def encode_chain_map(f: ChainMap) -> dict:
    return {
        "source": encode_complex(f.source),
        "target": encode_complex(f.target),
        "components": _encode_components(f),
    }


def decode_chain_map(obj: dict) -> ChainMap:
    return _decode_components(decode_complex(obj["source"]), decode_complex(obj["target"]), obj["components"])


# sequences


def encode_sequence(x: Sequence) -> dict:
    return {
        "window": list(x.window),
        "levels": [encode_complex(c) for c in x.levels],
        "steps": [_encode_components(s) for s in x.steps],
    }


def decode_sequence(obj: dict) -> Sequence:
    n, m = (int(v) for v in obj["window"])
    levels = [decode_complex(c) for c in obj["levels"]]
    if len(levels) != m - n + 1 or len(obj["steps"]) != m - n:
        raise InvariantViolation("level/step counts do not match the window")
    steps = [_decode_components(levels[i], levels[i + 1], s) for i, s in enumerate(obj["steps"])]
    return Sequence((n, m), levels, steps)


def encode_sequence_map(f: SequenceMap) -> dict:
    return {
        "window": list(f.window),
        "source": encode_sequence(f.source),
        "target": encode_sequence(f.target),
        "components": [_encode_components(c) for c in f.comps],
    }


def decode_sequence_map(obj: dict) -> SequenceMap:
    x = decode_sequence(obj["source"])
    y = decode_sequence(obj["target"])
    comps = obj["components"]
    if len(comps) != len(x.levels):
        raise InvariantViolation("one component per level required")
    return SequenceMap(x, y, [
        _decode_components(x.at(n), y.at(n), c) for n, c in zip(x.indices(), comps)
    ])


# graded objects and algebras


def encode_graded(g: GradedObject) -> dict:
    return {
        "field": encode_field(g.field),
        "components": {str(n): encode_complex(c) for n, c in sorted(g.comps.items())},
    }


def decode_graded(obj: dict) -> GradedObject:
    field = decode_field(obj["field"])
    return GradedObject(field, {n: decode_complex(c) for n, c in _int_keys(obj["components"]).items()})


def encode_algebra(a: FilteredAlgebra) -> dict:
    return {
        "carrier": encode_sequence(a.carrier),
        "mult": {f"{p},{q}": _encode_components(f) for (p, q), f in sorted(a.mult.items())},
        "unit": _encode_components(a.unit),
    }


def decode_algebra(obj: dict) -> FilteredAlgebra:
    x = decode_sequence(obj["carrier"])
    mult = {}
    for key, comp in obj["mult"].items():
        try:
            p, q = (int(v) for v in key.split(","))
        except ValueError as exc:
            raise InvariantViolation(f"bad multiplication key {key!r}") from exc
        t = min(max(p + q, x.N), x.M)
        mult[(p, q)] = _decode_components(tensor(x.at(p), x.at(q)), x.at(t), comp)
    unit_target = x.at(min(max(0, x.N), x.M))
    unit = _decode_components(ChainComplex.unit(x.field), unit_target, obj["unit"])
    return FilteredAlgebra(x, mult, unit)


def encode_graded_algebra(g: GradedAlgebra) -> dict:
    return {
        "carrier": encode_graded(g.carrier),
        "mult": {f"{p},{q}": _encode_components(f) for (p, q), f in sorted(g.mult.items())},
        "unit": _encode_components(g.unit),
    }


def encode_pages(pages: list[SpectralSequencePage]) -> list:
    out = []
    for page in pages:
        cells = []
        for (p, q), cell in sorted(page.grid.items()):
            if cell.dim:
                cells.append({"p": p, "q": q, "dim": cell.dim, "d_rank": page.d_rank(p, q)})
        out.append({"r": page.r, "cells": cells})
    return out
