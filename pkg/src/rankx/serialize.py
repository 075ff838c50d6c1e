"""JSON encoding of fields, matrices, families, blocking sets and reports.

Field elements are written as coefficient arrays (low to high), matrices as
row-major nested arrays of those.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .algebra.field import GF
from .blocking import BiasedSet, BlockingSet
from .extract import BadnessReport, MatrixFamily
from .funcfield import FFElement, FunctionField

FORMAT_VERSION = 1


class ParseError(ValueError):
    pass


def _plain(obj: Any):
    """Recursively convert numpy / Fraction values into JSON-native types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    return obj


def field_to_json(F: GF) -> dict:
    return {"p": F.p, "d": F.d, "modulus": list(F.modulus)}


def field_from_json(obj) -> GF:
    try:
        return GF(int(obj["p"]), int(obj["d"]), obj.get("modulus"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad field description: {exc}") from exc


def element_to_json(F: GF, a: int) -> list[int]:
    return F.coeffs(int(a))


def element_from_json(F: GF, cs) -> int:
    if not isinstance(cs, list) or len(cs) != F.d or any(not isinstance(c, int) or not 0 <= c < F.p for c in cs):
        raise ParseError(f"bad element {cs!r} for {F!r}")
    return F.from_coeffs(cs)


def matrix_to_json(F: GF, M) -> list:
    M = np.asarray(M)
    if F.d == 1:
        return [[[int(x)] for x in row] for row in M]
    digits = F._digits[M.astype(np.int64)]
    return digits.tolist()


def matrix_from_json(F: GF, rows) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=object if F.dtype is object else np.int64)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"ragged matrix: {exc}") from exc
    if arr.ndim < 1 or arr.shape[-1] != F.d:
        raise ParseError("matrix entries must be coefficient arrays of length d")
    if arr.size and (arr.min() < 0 or arr.max() >= F.p):
        raise ParseError("coefficient outside [0, p)")
    pows = np.array([F.p**i for i in range(F.d)], dtype=arr.dtype)
    return (arr * pows).sum(axis=-1)


def ffelement_to_json(e: FFElement) -> dict:
    return {f"{a},{b}": c for (a, b), c in e.terms}


def ffelement_from_json(FF: FunctionField, obj) -> FFElement:
    try:
        return FF.element({tuple(int(t) for t in k.split(",")): int(v) for k, v in obj.items()})
    except (AttributeError, ValueError) as exc:
        raise ParseError(f"bad function field element: {exc}") from exc


def _envelope(kind: str, body: dict, run_config: dict | None = None) -> dict:
    out = {"format_version": FORMAT_VERSION, "type": kind}
    out.update(body)
    if run_config is not None:
        out["run_config"] = run_config
    return _plain(out)


def family_to_json(fam: MatrixFamily, run_config: dict | None = None) -> dict:
    F = fam.field
    return _envelope("MatrixFamily", {
        "field": field_to_json(F), "r": fam.r, "k": fam.k, "n": fam.n,
        "matrices": [matrix_to_json(F, E) for E in fam.matrices], "meta": fam.meta,
    }, run_config)


def family_from_json(obj) -> MatrixFamily:
    _check_envelope(obj, "MatrixFamily")
    F = field_from_json(obj["field"])
    try:
        mats = np.stack([matrix_from_json(F, m) for m in obj["matrices"]])
        return MatrixFamily(F, int(obj["r"]), int(obj["k"]), mats, dict(obj.get("meta", {})))
    except (KeyError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def blocking_to_json(B: BlockingSet, certificate: dict | None = None, run_config: dict | None = None) -> dict:
    F = B.field
    body = {"mode": B.mode, "field": field_to_json(F), "k": B.k, "size": len(B),
            "points": [[element_to_json(F, x) for x in pt] for pt in B.points], "meta": B.meta}
    if certificate is not None:
        body["certificate"] = certificate
    return _envelope("BlockingSet", body, run_config)


def blocking_from_json(obj) -> BlockingSet:
    _check_envelope(obj, "BlockingSet")
    F = field_from_json(obj["field"])
    try:
        k = int(obj["k"])
        pts = matrix_from_json(F, obj["points"]) if obj["points"] else np.zeros((0, k), dtype=np.int64)
        return BlockingSet(obj["mode"], F, k, pts, dict(obj.get("meta", {})))
    except (KeyError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def biased_to_json(S: BiasedSet, run_config: dict | None = None) -> dict:
    F = S.field
    return _envelope("BiasedSet", {
        "field": field_to_json(F), "k": S.k, "vectors": [[element_to_json(F, x) for x in v] for v in S.vectors],
        "measured_bias": S.measured_bias, "meta": S.meta}, run_config)


def biased_from_json(obj) -> BiasedSet:
    _check_envelope(obj, "BiasedSet")
    F = field_from_json(obj["field"])
    mb = obj.get("measured_bias")
    if isinstance(mb, dict):
        mb = Fraction(mb["num"], mb["den"])
    try:
        return BiasedSet(F, int(obj["k"]), matrix_from_json(F, obj["vectors"]), mb, dict(obj.get("meta", {})))
    except (KeyError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def badness_to_json(rep: BadnessReport, F: GF) -> dict:
    return _plain({
        "max_bad": rep.max_bad, "histogram": rep.histogram,
        "worst_witness": None if rep.worst_witness is None else matrix_to_json(F, rep.worst_witness),
        "subspaces_checked": rep.subspaces_checked, "exhaustive": rep.exhaustive, "n": rep.n,
        "theoretical_L": rep.theoretical_L, "vacuous": rep.vacuous, "bound_holds": rep.bound_holds,
    })


def _check_envelope(obj, kind: str):
    if not isinstance(obj, dict):
        raise ParseError("artifact must be a JSON object")
    if obj.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {obj.get('format_version')!r}")
    if obj.get("type") != kind:
        raise ParseError(f"expected a {kind}, found {obj.get('type')!r}")


PARSERS = {"MatrixFamily": family_from_json, "BlockingSet": blocking_from_json, "BiasedSet": biased_from_json}


def load_artifact(path: str | Path):
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("type") not in PARSERS:
        raise ParseError(f"unknown artifact type in {path}")
    return PARSERS[obj["type"]](obj)


def dump(obj: dict, path: str | Path | None):
    text = json.dumps(_plain(obj), indent=1, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")
