"""JSON documents for classes and derivation traces.

Class document::

    {"p": 2, "m": 1, "n": 1, "variables": ["x", "y"],
     "terms": [{"witt": ["x"], "slots": ["x + y"]}]}

A trace document is a class document (the start expression) with an extra
``"steps"`` list; every step holds ``kind``, ``params`` and ``result``, where
``result`` is ``{"m": ..., "terms": [...]}`` over the same field.  All field
elements are strings in the expression grammar of :mod:`kmsymbols.arith`.

Dumps are canonical: ``json.dumps(indent=2, ensure_ascii=False)`` plus a
trailing newline, so emit -> parse -> emit is byte-identical.
"""

from __future__ import annotations

import json

import jsonschema

from ..arith import FieldSpec, RatFunc, parse_ratfunc, render_ratfunc
from ..errors import KMError, SchemaError
from ..witt import WittVector
from .moves import KINDS, DerivationTrace, RewriteMove
from .symbols import ClassExpr, SymbolTerm

_EXPR = {"type": "string", "minLength": 1}
_WITT = {"type": "array", "items": _EXPR, "minItems": 1}
_TERM = {
    "type": "object",
    "required": ["witt", "slots"],
    "properties": {"witt": _WITT, "slots": {"type": "array", "items": _EXPR, "minItems": 1}},
    "additionalProperties": False,
}
_POS = {"type": "integer", "minimum": 1}

CLASS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["p", "m", "n", "variables", "terms"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "m": _POS,
        "n": _POS,
        "variables": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "terms": {"type": "array", "items": _TERM},
    },
}

STEP_SCHEMA = {
    "type": "object",
    "required": ["kind", "params", "result"],
    "properties": {
        "kind": {"enum": list(KINDS)},
        "params": {"type": "object"},
        "result": {
            "type": "object",
            "required": ["m", "terms"],
            "properties": {"m": _POS, "terms": {"type": "array", "items": _TERM}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

TRACE_SCHEMA = {
    **CLASS_SCHEMA,
    "required": CLASS_SCHEMA["required"] + ["steps"],
    "properties": {**CLASS_SCHEMA["properties"], "steps": {"type": "array", "items": STEP_SCHEMA}},
}

CANONICAL_SCHEMA = {
    **CLASS_SCHEMA,
    "required": ["p", "m", "n", "variables", "tuples"],
    "properties": {
        **{k: v for k, v in CLASS_SCHEMA["properties"].items() if k != "terms"},
        "tuples": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["indices", "witt"],
                "properties": {"indices": {"type": "array", "items": _POS}, "witt": _WITT},
                "additionalProperties": False,
            },
        },
    },
}

SCHEMAS = {"class": CLASS_SCHEMA, "trace": TRACE_SCHEMA, "canonical": CANONICAL_SCHEMA}


def _pointer(path):
    return "/" + "/".join(str(x) for x in path)


def schema_validate(doc, kind="class"):
    """Structural check of ``doc`` against one of ``SCHEMAS``; raises SchemaError with a JSON pointer."""
    if kind not in SCHEMAS:
        raise KMError(f"unknown document kind {kind!r}")
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.path), list(map(str, e.path))))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))
    return True


def detect_kind(doc):
    if isinstance(doc, dict):
        if "steps" in doc:
            return "trace"
        if "tuples" in doc:
            return "canonical"
    return "class"


# -- encoding ---------------------------------------------------------------

def _e(x: RatFunc):
    return render_ratfunc(x)


def term_to_json(t: SymbolTerm):
    return {"witt": t.witt.to_strings(), "slots": [_e(b) for b in t.slots]}


def _header(spec, m, n):
    return {"p": spec.p, "m": m, "n": n, "variables": list(spec.variables)}


def class_to_json(pi: ClassExpr):
    return {**_header(pi.spec, pi.m, pi.n), "terms": [term_to_json(t) for t in pi.terms]}


def _param_to_json(key, value):
    if key == "witness":
        return value.to_strings()
    if key == "parts":
        return [w.to_strings() for w in value]
    if key == "base":
        return _e(value)
    if key == "factors":
        return [_e(b) for b in value]
    if key == "introduce":
        return term_to_json(value)
    if key in ("indices", "positions"):
        return list(value)
    return value


def move_to_json(mv: RewriteMove):
    return {k: _param_to_json(k, v) for k, v in sorted(mv.params.items())}


def trace_to_json(trace: DerivationTrace):
    doc = class_to_json(trace.start)
    doc["steps"] = [
        {"kind": mv.kind, "params": move_to_json(mv),
         "result": {"m": res.m, "terms": [term_to_json(t) for t in res.terms]}}
        for mv, res in trace.steps
    ]
    return doc


def canonical_to_json(cf):
    return {**_header(cf.spec, cf.m, cf.n), **cf.as_json()}


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- decoding ---------------------------------------------------------------

def _spec(doc):
    try:
        return FieldSpec(doc["p"], tuple(doc["variables"]))
    except KMError as exc:
        raise SchemaError(str(exc), "/p" if "prime" in str(exc) else "/variables") from exc


def _rat(spec, text, path):
    try:
        return parse_ratfunc(text, spec)
    except KMError as exc:
        exc.path = path
        raise


def _witt(spec, coords, path):
    return WittVector.field(spec, [_rat(spec, c, f"{path}/{i}") for i, c in enumerate(coords)])


def term_from_json(spec, doc, path="") -> SymbolTerm:
    w = _witt(spec, doc["witt"], f"{path}/witt")
    slots = tuple(_rat(spec, s, f"{path}/slots/{i}") for i, s in enumerate(doc["slots"]))
    return SymbolTerm(w, slots)


def _terms(spec, m, n, rows, path):
    terms = []
    for i, row in enumerate(rows):
        where = f"{path}/{i}"
        if len(row["witt"]) != m:
            raise SchemaError(f"Witt vector has length {len(row['witt'])}, expected m = {m}", f"{where}/witt")
        if len(row["slots"]) != n:
            raise SchemaError(f"term has {len(row['slots'])} slots, expected n = {n}", f"{where}/slots")
        terms.append(term_from_json(spec, row, where))
    return ClassExpr(spec, m, n, tuple(terms))


def class_from_json(doc) -> ClassExpr:
    schema_validate(doc, "class")
    spec = _spec(doc)
    return _terms(spec, doc["m"], doc["n"], doc["terms"], "/terms")


def _param_from_json(spec, key, value, path):
    if key == "witness":
        return _witt(spec, value, path)
    if key == "parts":
        return [_witt(spec, w, f"{path}/{i}") for i, w in enumerate(value)]
    if key == "base":
        return _rat(spec, value, path)
    if key == "factors":
        return [_rat(spec, b, f"{path}/{i}") for i, b in enumerate(value)]
    if key == "introduce":
        return term_from_json(spec, value, path)
    return value


def trace_from_json(doc) -> DerivationTrace:
    schema_validate(doc, "trace")
    spec = _spec(doc)
    n = doc["n"]
    start = _terms(spec, doc["m"], n, doc["terms"], "/terms")
    steps = []
    for k, step in enumerate(doc["steps"]):
        where = f"/steps/{k}"
        res = step["result"]
        params = {key: _param_from_json(spec, key, v, f"{where}/params/{key}")
                  for key, v in step["params"].items()}
        steps.append((RewriteMove(step["kind"], params),
                      _terms(spec, res["m"], n, res["terms"], f"{where}/result/terms")))
    return DerivationTrace(start, tuple(steps))


def canonical_from_json(doc):
    from ..decompose import CanonicalForm

    schema_validate(doc, "canonical")
    spec = _spec(doc)
    for i, row in enumerate(doc["tuples"]):
        if len(row["witt"]) != doc["m"]:
            raise SchemaError("Witt vector length differs from m", f"/tuples/{i}/witt")
    return CanonicalForm.from_json(doc, spec, doc["m"], doc["n"])


def loads(text):
    """Parse a class, trace or canonical-form document (kind detected from its keys)."""
    doc = json.loads(text)
    kind = detect_kind(doc)
    return {"class": class_from_json, "trace": trace_from_json, "canonical": canonical_from_json}[kind](doc)
