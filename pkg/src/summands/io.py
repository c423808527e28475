"""JSON formats for input files and certificates.

All numbers are integers and matrices are row-major lists of rows.  Module
and morphism files may refer to other files by path (relative to the file
itself) or embed the referenced object inline.  A module may carry
``"side": "right"``, in which case it is a representation of the opposite
algebra: arrow ``a: v -> w`` then has a ``dims[v] x dims[w]`` matrix.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .algebra import AlgebraError, AlgebraTable, Relation, RelationSet, build_algebra, opposite_algebra, quiver_from_lists
from .linalg import PrimeField
from .reps import Rep, RepError, RepMap

PathLike = Union[str, Path]


class FormatError(ValueError):
    """Malformed input file; the message names the offending field."""


_ALGEBRA_KEYS = {"prime", "nilpotency_bound", "vertices", "arrows", "relations"}
_MODULE_KEYS = {"algebra", "dims", "arrows", "side"}
_MORPHISM_KEYS = {"from", "to", "blocks"}


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"{path}: cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def write_json(path: PathLike, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def _require(obj: Any, kind: type, where: str):
    if not isinstance(obj, kind) or (isinstance(obj, bool) and kind is not bool):
        raise FormatError(f"{where}: expected {kind.__name__}")
    return obj


def _check_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise FormatError(f"{where}.{unknown[0]}: unknown field")
    for k in sorted(required):
        if k not in obj:
            raise FormatError(f"{where}.{k}: missing field")


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{where}: expected an integer")
    return x


def _matrix(x: Any, rows: int, cols: int, p: int, where: str) -> np.ndarray:
    if rows == 0:
        if x not in ([], None):
            raise FormatError(f"{where}: expected an empty matrix ({rows}x{cols})")
        return np.zeros((0, cols), np.int64)
    _require(x, list, where)
    if len(x) != rows:
        raise FormatError(f"{where}: expected {rows} rows, got {len(x)}")
    out = np.zeros((rows, cols), np.int64)
    for i, row in enumerate(x):
        _require(row, list, f"{where}[{i}]")
        if len(row) != cols:
            raise FormatError(f"{where}[{i}]: expected {cols} entries, got {len(row)}")
        for j, e in enumerate(row):
            out[i, j] = _int(e, f"{where}[{i}][{j}]") % p
    return out


def _matrix_json(m: np.ndarray) -> list:
    return [[int(e) for e in row] for row in np.asarray(m)]


# -- algebras -------------------------------------------------------------------

def algebra_from_json(obj: Any, default_prime: int = 101, default_bound: int = 12,
                      where: str = "algebra") -> AlgebraTable:
    _require(obj, dict, where)
    _check_keys(obj, _ALGEBRA_KEYS, {"vertices", "arrows"}, where)
    prime = _int(obj.get("prime", default_prime), f"{where}.prime")
    bound = _int(obj.get("nilpotency_bound", default_bound), f"{where}.nilpotency_bound")
    try:
        field = PrimeField(prime)
    except ValueError as exc:
        raise FormatError(f"{where}.prime: {exc}") from None
    verts = _require(obj["vertices"], list, f"{where}.vertices")
    for i, v in enumerate(verts):
        _require(v, str, f"{where}.vertices[{i}]")
    arrows = []
    for i, a in enumerate(_require(obj["arrows"], list, f"{where}.arrows")):
        w = f"{where}.arrows[{i}]"
        _require(a, dict, w)
        _check_keys(a, {"name", "source", "target"}, {"name", "source", "target"}, w)
        arrows.append(tuple(_require(a[k], str, f"{w}.{k}") for k in ("name", "source", "target")))
    rels = []
    for i, rel in enumerate(_require(obj.get("relations", []), list, f"{where}.relations")):
        terms = []
        for j, t in enumerate(_require(rel, list, f"{where}.relations[{i}]")):
            w = f"{where}.relations[{i}][{j}]"
            _require(t, dict, w)
            _check_keys(t, {"coeff", "path"}, {"coeff", "path"}, w)
            path = _require(t["path"], list, f"{w}.path")
            for k, name in enumerate(path):
                _require(name, str, f"{w}.path[{k}]")
            terms.append((_int(t["coeff"], f"{w}.coeff") % prime, tuple(path)))
        rels.append(Relation(tuple(terms)))
    try:
        quiver = quiver_from_lists(verts, arrows)
        return build_algebra(field, quiver, RelationSet(tuple(rels), bound))
    except AlgebraError as exc:
        raise FormatError(f"{where}: {exc}") from None


def algebra_to_json(alg: AlgebraTable) -> dict:
    return {
        "prime": alg.p,
        "nilpotency_bound": alg.nilpotency_bound,
        "vertices": list(alg.vertices),
        "arrows": [{"name": a.name, "source": a.source, "target": a.target} for a in alg.arrows],
        "relations": [[{"coeff": int(c) % alg.p, "path": list(w)} for c, w in r.terms]
                      for r in alg.relations],
    }


_ALGEBRA_CACHE: dict[tuple, AlgebraTable] = {}


def load_algebra(path: PathLike, default_prime: int = 101, default_bound: int = 12) -> AlgebraTable:
    key = Path(path).resolve()
    cache_key = (key, default_prime, default_bound)
    if cache_key not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[cache_key] = algebra_from_json(read_json(path), default_prime, default_bound,
                                                      where=str(path))
    return _ALGEBRA_CACHE[cache_key]


_INLINE_CACHE: dict[tuple, AlgebraTable] = {}


def _inline_algebra(obj: dict, where: str, **defaults) -> AlgebraTable:
    try:
        key = (json.dumps(obj, sort_keys=True), tuple(sorted(defaults.items())))
    except TypeError:
        raise FormatError(f"{where}: not a JSON object") from None
    if key not in _INLINE_CACHE:
        _INLINE_CACHE[key] = algebra_from_json(obj, where=where, **defaults)
    return _INLINE_CACHE[key]


def _resolve_algebra(ref: Any, base: Optional[Path], where: str, **defaults) -> AlgebraTable:
    if isinstance(ref, dict):
        return _inline_algebra(ref, where, **defaults)
    if isinstance(ref, str):
        path = (base / ref) if base is not None else Path(ref)
        return load_algebra(path, **defaults)
    raise FormatError(f"{where}: expected a path or an inline algebra object")


# -- modules ------------------------------------------------------------------

def rep_from_json(obj: Any, base: Optional[Path] = None, where: str = "module",
                  algebra: Optional[AlgebraTable] = None, **defaults) -> Rep:
    """Parse a module object.  ``algebra`` overrides the ``"algebra"`` field."""
    _require(obj, dict, where)
    _check_keys(obj, _MODULE_KEYS, {"dims", "arrows"} | ({"algebra"} if algebra is None else set()), where)
    side = obj.get("side", "left")
    if side not in ("left", "right"):
        raise FormatError(f"{where}.side: expected 'left' or 'right'")
    alg = algebra if algebra is not None else _resolve_algebra(obj["algebra"], base, f"{where}.algebra", **defaults)
    if side == "right":
        alg = opposite_algebra(alg)
    dims_obj = _require(obj["dims"], dict, f"{where}.dims")
    for v in dims_obj:
        if v not in alg.quiver.vertex_index:
            raise FormatError(f"{where}.dims.{v}: unknown vertex")
    dims = []
    for v in alg.vertices:
        d = _int(dims_obj.get(v, 0), f"{where}.dims.{v}")
        if d < 0:
            raise FormatError(f"{where}.dims.{v}: negative dimension")
        dims.append(d)
    arr_obj = _require(obj["arrows"], dict, f"{where}.arrows")
    for name in arr_obj:
        if name not in alg.quiver.arrow_by_name:
            raise FormatError(f"{where}.arrows.{name}: unknown arrow")
    mats = []
    for a in alg.arrows:
        rows, cols = dims[alg.vertex(a.target)], dims[alg.vertex(a.source)]
        if a.name not in arr_obj and rows * cols:
            raise FormatError(f"{where}.arrows.{a.name}: missing matrix")
        raw = arr_obj.get(a.name, [] if rows == 0 else [[0] * cols for _ in range(rows)])
        mats.append(_matrix(raw, rows, cols, alg.p, f"{where}.arrows.{a.name}"))
    try:
        return Rep(alg, dims, mats)
    except RepError as exc:
        raise FormatError(f"{where}: {exc}") from None


def rep_to_json(m: Rep, algebra_ref: Any = None) -> dict:
    """Module object; ``algebra_ref`` is a path string, or None to embed the algebra.

    Modules over an opposite algebra built by this package are written as
    right modules over the original algebra.
    """
    alg = m.algebra
    side, base = "left", alg
    if alg.is_opposite:
        side, base = "right", opposite_algebra(alg)
    obj = {
        "algebra": algebra_ref if algebra_ref is not None else algebra_to_json(base),
        "dims": {v: int(d) for v, d in zip(alg.vertices, m.dims)},
        "arrows": {a.name: _matrix_json(mat) for a, mat in zip(alg.arrows, m.mats)},
    }
    if side == "right":
        obj["side"] = "right"
    return obj


def load_rep(path: PathLike, **defaults) -> Rep:
    path = Path(path)
    return rep_from_json(read_json(path), path.parent, where=str(path), **defaults)


# -- morphisms ------------------------------------------------------------------

def _resolve_rep(ref: Any, base: Optional[Path], where: str, **defaults) -> Rep:
    if isinstance(ref, dict):
        return rep_from_json(ref, base, where, **defaults)
    if isinstance(ref, str):
        path = (base / ref) if base is not None else Path(ref)
        return load_rep(path, **defaults)
    raise FormatError(f"{where}: expected a path or an inline module object")


def map_from_json(obj: Any, base: Optional[Path] = None, where: str = "morphism",
                  source: Optional[Rep] = None, target: Optional[Rep] = None, **defaults) -> RepMap:
    _require(obj, dict, where)
    required = {"blocks"} | ({"from"} if source is None else set()) | ({"to"} if target is None else set())
    _check_keys(obj, _MORPHISM_KEYS, required, where)
    src = source if source is not None else _resolve_rep(obj["from"], base, f"{where}.from", **defaults)
    tgt = target if target is not None else _resolve_rep(obj["to"], base, f"{where}.to", **defaults)
    if src.algebra != tgt.algebra:
        raise FormatError(f"{where}.to: source and target live over different algebras")
    alg = src.algebra
    blk_obj = _require(obj["blocks"], dict, f"{where}.blocks")
    for v in blk_obj:
        if v not in alg.quiver.vertex_index:
            raise FormatError(f"{where}.blocks.{v}: unknown vertex")
    blocks = []
    for i, v in enumerate(alg.vertices):
        rows, cols = tgt.dims[i], src.dims[i]
        if v not in blk_obj and rows * cols:
            raise FormatError(f"{where}.blocks.{v}: missing block")
        raw = blk_obj.get(v, [] if rows == 0 else [[0] * cols for _ in range(rows)])
        blocks.append(_matrix(raw, rows, cols, alg.p, f"{where}.blocks.{v}"))
    try:
        return RepMap(src, tgt, blocks)
    except RepError as exc:
        raise FormatError(f"{where}.blocks: {exc}") from None


def map_to_json(f: RepMap, source_ref: Any = None, target_ref: Any = None) -> dict:
    """Morphism object; ``None`` references embed the modules inline."""
    return {
        "from": source_ref if source_ref is not None else rep_to_json(f.source),
        "to": target_ref if target_ref is not None else rep_to_json(f.target),
        "blocks": {v: _matrix_json(b) for v, b in zip(f.source.algebra.vertices, f.blocks)},
    }


def load_map(path: PathLike, **defaults) -> RepMap:
    path = Path(path)
    return map_from_json(read_json(path), path.parent, where=str(path), **defaults)


# -- certificates ---------------------------------------------------------------

def certificate_to_json(cert, report=None) -> dict:
    """Certificate document with the descent chain, plus the verification table when given."""
    obj = {
        "backend": cert.tag.value,
        "A": rep_to_json(cert.a),
        "f": map_to_json(cert.f),
        "chain": [
            {"A": rep_to_json(st.a), "f": map_to_json(st.f),
             "alpha": map_to_json(st.alpha), "beta": map_to_json(st.beta)}
            for st in cert.steps
        ],
        "B": rep_to_json(cert.b),
        "final": map_to_json(cert.final),
        "inclusion": map_to_json(cert.inclusion),
        "projection": map_to_json(cert.projection),
        "terminal": cert.terminal,
    }
    if report is not None:
        obj["verification"] = {
            "passed": report.passed,
            "invariant_failures": list(report.invariant_failures),
            "battery": [
                {"label": r.label, "dims": list(r.dims), "dim_G_A": r.dim_g_a, "rank_e": r.rank_e,
                 "dim_G_B": r.dim_g_b, "idempotent": r.idempotent, "transported": r.transported,
                 "passed": r.passed}
                for r in report.rows
            ],
        }
    return obj
