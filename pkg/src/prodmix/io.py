"""File formats.

Group files::

    {"degree": d, "generators": [[images...], ...]}

Character table files::

    {"order": n, "class_sizes": [...], "class_reps": [...],
     "characters": [[[re, im], ...], ...]}

Reports are JSON documents in which exact rationals are written as
``"p/q"`` strings and complex numbers as ``[re, im]`` pairs.  Floats are
written with Python's shortest round-trip repr, so a parsed document dumps
back to the same bytes.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .chartable import CharTable
from .errors import FormatSyntaxError, NotABijection, ValidationFailed
from .groups import DEFAULT_MAX_ORDER, ElementSet, GroupTable, as_permutation, build_group

CORPUS = ("trivial", "c2", "s3", "s4", "a4", "a5", "psl27", "sl28")


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatSyntaxError(exc.msg, exc.lineno, exc.colno) from None


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("prodmix") / "data" / f"{name}.json"))


def resolve_group_path(spec: str | Path) -> Path:
    """A bundled corpus name (``"a5"``) or a filesystem path."""
    if isinstance(spec, str) and spec in CORPUS:
        return corpus_path(spec)
    return Path(spec)


# groups

def parse_group_text(text: str) -> list[tuple[int, ...]]:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise FormatSyntaxError("group file must be a JSON object")
    degree = doc.get("degree")
    if not _is_int(degree) or degree < 1:
        raise FormatSyntaxError(f"'degree' must be a positive integer, got {degree!r}")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise FormatSyntaxError("'generators' must be a nonempty list")
    out = []
    for k, g in enumerate(gens):
        if not isinstance(g, list) or not all(_is_int(x) for x in g):
            raise FormatSyntaxError(f"generator {k} is not a list of integers")
        if len(g) != degree:
            raise FormatSyntaxError(f"generator {k} has {len(g)} images, degree is {degree}")
        try:
            out.append(as_permutation(g))
        except NotABijection:
            raise NotABijection(f"generator {k} {g} is not a bijection on 0..{degree - 1}") from None
    return out


def parse_group_file(path: str | Path) -> list[tuple[int, ...]]:
    return parse_group_text(Path(path).read_text(encoding="utf-8"))


def load_group(spec: str | Path, max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    return build_group(parse_group_file(resolve_group_path(spec)), max_order=max_order)


def dump_group(generators) -> str:
    gens = [list(map(int, g)) for g in generators]
    return json.dumps({"degree": len(gens[0]), "generators": gens}) + "\n"


# character tables

def char_table_to_dict(T: CharTable) -> dict:
    return {
        "order": int(T.order),
        "class_sizes": [int(s) for s in T.class_sizes],
        "class_reps": [int(r) for r in T.class_reps],
        "characters": [[[float(v.real), float(v.imag)] for v in row] for row in T.values],
    }


def dump_char_table(T: CharTable) -> str:
    return json.dumps(char_table_to_dict(T)) + "\n"


def parse_char_table_text(text: str, G: GroupTable, tol: float | None = None) -> CharTable:
    """Read a table for G, reorder its columns into G's class order and
    validate it.  Raises :class:`ValidationFailed` naming the first broken
    invariant."""
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise FormatSyntaxError("character table file must be a JSON object")
    for key in ("order", "class_sizes", "class_reps", "characters"):
        if key not in doc:
            raise FormatSyntaxError(f"missing field {key!r}")
    order, sizes, reps, chars = doc["order"], doc["class_sizes"], doc["class_reps"], doc["characters"]
    if not _is_int(order) or not all(_is_int(x) for x in sizes) or not all(_is_int(x) for x in reps):
        raise FormatSyntaxError("order, class_sizes and class_reps must be integers")
    m = len(sizes)
    if len(reps) != m:
        raise FormatSyntaxError("class_sizes and class_reps differ in length")
    try:
        values = np.array([[complex(float(re), float(im)) for re, im in row] for row in chars], dtype=complex)
    except (TypeError, ValueError):
        raise FormatSyntaxError("characters must be lists of [re, im] number pairs") from None
    if values.ndim != 2 or values.shape[1] != m:
        raise FormatSyntaxError(f"every character needs {m} values")

    if order != G.order:
        raise ValidationFailed("group order", float(abs(order - G.order)), f"table is for |G| = {order}")
    if m != G.num_classes:
        raise ValidationFailed("class count", float(abs(m - G.num_classes)))
    if not all(0 <= r < G.order for r in reps):
        raise ValidationFailed("class representatives", 1.0, "representative out of range")
    cols = [int(G.class_of[r]) for r in reps]
    if sorted(cols) != list(range(m)):
        raise ValidationFailed("class representatives", 1.0, "two representatives share a class")
    for c, s in zip(cols, sizes):
        if G.class_sizes[c] != s:
            raise ValidationFailed("class sizes", float(abs(G.class_sizes[c] - s)), f"class of rep {reps[c]}")
    perm = np.argsort(cols)
    values = values[:, perm]
    values.setflags(write=False)
    trivial = np.flatnonzero(np.all(np.abs(values - 1) <= 1e-6, axis=1))
    if trivial.size == 0:
        raise ValidationFailed("trivial character", float(np.min(np.max(np.abs(values - 1), axis=1))),
                               "no row is identically 1")
    T = CharTable(G.order, values, G.class_sizes.copy(), G.class_reps.copy(), int(trivial[0]))
    return T.validate(tol)


def parse_char_table_file(path: str | Path, G: GroupTable, tol: float | None = None) -> CharTable:
    return parse_char_table_text(Path(path).read_text(encoding="utf-8"), G, tol)


# set specifications

def parse_set_spec(spec: str, G: GroupTable) -> ElementSet:
    """``class:<i>``, ``union:[i, ...]``, ``random:{"density": d, "seed": s}``
    (add ``"normal": true`` to draw whole classes), ``all``, ``empty``, or
    an explicit JSON list of element indices."""
    from .mixing import random_normal_subset, random_subset

    spec = spec.strip()
    try:
        if spec == "all":
            return G.full_set()
        if spec == "empty":
            return G.empty_set()
        if spec.startswith("class:"):
            i = int(spec[6:])
            if not 0 <= i < G.num_classes:
                raise FormatSyntaxError(f"class index {i} out of range")
            return G.class_set(i)
        if spec.startswith("union:"):
            idx = _loads(spec[6:])
            if not isinstance(idx, list) or not all(_is_int(i) and 0 <= i < G.num_classes for i in idx):
                raise FormatSyntaxError(f"bad class list in {spec!r}")
            return G.union_of_classes(idx)
        if spec.startswith("random:"):
            params = _loads(spec[7:])
            if not isinstance(params, dict) or "density" not in params or "seed" not in params:
                raise FormatSyntaxError("random sets need density and seed")
            rng = np.random.default_rng(int(params["seed"]))
            draw = random_normal_subset if params.get("normal") else random_subset
            return draw(G, float(params["density"]), rng)
        idx = _loads(spec)
        if not isinstance(idx, list) or not all(_is_int(i) and 0 <= i < G.order for i in idx):
            raise FormatSyntaxError(f"bad element list in {spec!r}")
        return G.subset(idx)
    except ValueError as exc:
        if isinstance(exc, FormatSyntaxError):
            raise
        raise FormatSyntaxError(f"cannot parse set specification {spec!r}: {exc}") from None


# certification requests

REQUEST_KEYS = {"group", "epsilon", "eta", "i", "mode", "budget", "seed"}


def parse_certify_request(path: str | Path) -> dict:
    """Read a request; a relative group path is resolved against the
    request file's directory."""
    path = Path(path)
    doc = _loads(path.read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise FormatSyntaxError("request must be a JSON object")
    missing = {"group", "epsilon", "eta"} - set(doc)
    if missing:
        raise FormatSyntaxError(f"request is missing {sorted(missing)}")
    unknown = set(doc) - REQUEST_KEYS
    if unknown:
        raise FormatSyntaxError(f"unknown request fields {sorted(unknown)}")
    out = dict(doc)
    g = out["group"]
    if g not in CORPUS and not Path(g).is_absolute():
        out["group"] = str(path.parent / g)
    return out


# reports

def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    return obj


def dump_report(doc) -> str:
    return json.dumps(to_jsonable(doc), indent=2) + "\n"


def load_report(text: str) -> dict:
    return _loads(text)


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
