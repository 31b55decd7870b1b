"""Batch command-line front end.

Exit status: 0 on success, 1 on a domain error (a JSON object
``{"error": {"kind", "message", ...}}`` is written to stderr, and ``verify``
uses 1 for a rejected trace), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys

from . import __version__
from .arith import FieldSpec, parse_ratfunc, render_ratfunc
from .bounds import BoundsInput, best_bounds
from .decompose import decompose
from .errors import KMError, SchemaError
from .km import generic_sum, present_cyclic, verify_derivation
from .km import serialize as ser
from .sampling import random_class
from .witt import WittVector, ghost, scalar_mul, teichmuller, v_split, wp

log = logging.getLogger("kmsymbols")


class UsageError(Exception):
    pass


# -- input / output -------------------------------------------------------------

def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _parse_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", "") from exc


def _load_doc(args, required=True):
    if getattr(args, "json", None) is not None:
        return _parse_json(args.json)
    if getattr(args, "input", None):
        return _parse_json(_read_text(args.input))
    if required:
        raise UsageError("an input document is required (--input PATH or --json TEXT)")
    return None


def _write(args, text):
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, doc):
    _write(args, ser.dumps(doc))


def _error_doc(exc):
    err = {"kind": getattr(exc, "kind", type(exc).__name__), "message": str(exc)}
    for attr in ("path", "position"):
        if getattr(exc, attr, None) not in (None, ""):
            err[attr] = getattr(exc, attr)
    return {"error": err}


# -- commands -------------------------------------------------------------------

def _witt_from(doc, key, spec, p):
    coords = doc.get(key)
    if not isinstance(coords, list) or not coords:
        raise SchemaError(f"{key!r} must be a nonempty list of coordinates", f"/{key}")
    if spec is None:
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in coords):
            raise SchemaError("integer-mode coordinates must be integers", f"/{key}")
        return WittVector.integer(coords, p)
    return WittVector.field(spec, [parse_ratfunc(str(c), spec) for c in coords])


def _witt_out(w):
    return list(w.coords) if w.spec is None else w.to_strings()


WITT_OPS = ("add", "sub", "mul", "neg", "frobenius", "wp", "verschiebung", "teichmuller",
            "scalar", "ghost", "v_split", "truncate")


def cmd_witt_eval(args):
    doc = _load_doc(args)
    if not isinstance(doc, dict) or "p" not in doc or "op" not in doc:
        raise SchemaError("witt-eval needs an object with 'p' and 'op'", "")
    p, op = doc["p"], doc["op"]
    if op not in WITT_OPS:
        raise SchemaError(f"unknown op {op!r}; expected one of {', '.join(WITT_OPS)}", "/op")
    spec = FieldSpec(p, tuple(doc["variables"])) if "variables" in doc else None
    if spec is None and not isinstance(p, int):
        raise SchemaError("p must be an integer", "/p")
    if op == "teichmuller":
        a = doc.get("a")
        m = doc.get("m")
        if not isinstance(m, int) or m < 1:
            raise SchemaError("teichmuller needs a positive integer 'm'", "/m")
        w = teichmuller(parse_ratfunc(str(a), spec) if spec else int(a), m, p=p, spec=spec)
        out = {"result": _witt_out(w)}
    else:
        w = _witt_from(doc, "w", spec, p)
        if op in ("add", "sub", "mul"):
            u = _witt_from(doc, "u", spec, p)
            res = {"add": lambda: u + w, "sub": lambda: u - w, "mul": lambda: u * w}[op]()
            out = {"result": _witt_out(res)}
        elif op == "neg":
            out = {"result": _witt_out(-w)}
        elif op == "frobenius":
            out = {"result": _witt_out(w.frobenius())}
        elif op == "wp":
            out = {"result": _witt_out(wp(w))}
        elif op == "verschiebung":
            out = {"result": _witt_out(w.shift(doc.get("k", 1)))}
        elif op == "truncate":
            out = {"result": _witt_out(w.truncate(doc.get("k", w.m)))}
        elif op == "scalar":
            k = doc.get("k")
            if not isinstance(k, int) or isinstance(k, bool):
                raise SchemaError("scalar needs an integer 'k'", "/k")
            out = {"result": _witt_out(scalar_mul(k, w))}
        elif op == "ghost":
            out = {"result": ghost(w)}
        else:
            first, tail = v_split(w)
            out = {"first": first if spec is None else render_ratfunc(first), "tail": _witt_out(tail)}
    _emit(args, {"p": p, "op": op, **out})
    return 0


def cmd_decompose(args):
    pi = ser.class_from_json(_load_doc(args))
    cf, trace = decompose(pi)
    doc = ser.canonical_to_json(cf)
    log.info("decompose: %d terms -> %d tuples in %d steps", len(pi.terms), len(cf), len(trace))
    if args.trace is not None:
        tdoc = ser.trace_to_json(trace)
        if args.trace == "-":
            doc["trace"] = tdoc
        else:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write(ser.dumps(tdoc))
    _emit(args, doc)
    return 0


def _parse_kv(items, origin):
    data = {}
    for item in items:
        item = item.strip()
        if not item or item.startswith("#"):
            continue
        if "=" not in item:
            raise UsageError(f"expected key=value in {origin}, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        data[key] = value
    return data


def cmd_bounds(args):
    data = {}
    if args.input:
        text = _read_text(args.input)
        if text.lstrip().startswith("{"):
            data.update(_parse_json(text))
        else:
            data.update(_parse_kv(text.splitlines(), args.input))
    if args.json is not None:
        data.update(_parse_json(args.json))
    data.update(_parse_kv(args.params, "arguments"))
    if not data:
        raise UsageError("no bound parameters given")
    report = best_bounds(BoundsInput.from_mapping(data))
    _emit(args, report.to_json())
    return 0


def cmd_verify(args):
    trace = ser.trace_from_json(_load_doc(args))
    verdict = verify_derivation(trace)
    doc = {"ok": verdict.ok, "steps": len(trace.steps)}
    if not verdict.ok:
        doc.update(failed_step=verdict.failed_step, reason=verdict.reason)
    _emit(args, doc)
    return 0 if verdict.ok else 1


def cmd_generic_sum(args):
    doc = _load_doc(args, required=False) or {}
    vals = {k: doc.get(k, getattr(args, k)) for k in ("p", "ell", "m", "n")}
    missing = [k for k, v in vals.items() if v is None]
    if missing:
        raise UsageError(f"missing parameters: {', '.join(missing)}")
    _emit(args, ser.class_to_json(generic_sum(vals["p"], vals["ell"], vals["m"], vals["n"])))
    return 0


def cmd_present_cyclic(args):
    doc = _load_doc(args)
    for key in ("p", "variables", "witt", "b"):
        if key not in doc:
            raise SchemaError(f"{key!r} is a required property", "")
    spec = FieldSpec(doc["p"], tuple(doc["variables"]))
    w = WittVector.field(spec, [parse_ratfunc(str(c), spec) for c in doc["witt"]])
    _emit(args, present_cyclic(w, parse_ratfunc(str(doc["b"]), spec)).as_dict())
    return 0


_LOADERS = {"class": ser.class_from_json, "trace": ser.trace_from_json, "canonical": ser.canonical_from_json}
_DUMPERS = {"class": ser.class_to_json, "trace": ser.trace_to_json, "canonical": ser.canonical_to_json}


def cmd_validate(args):
    doc = _load_doc(args)
    kind = ser.detect_kind(doc) if args.kind == "auto" else args.kind
    _LOADERS[kind](doc)  # structural check, then expressions and shapes
    _emit(args, {"valid": True, "kind": kind})
    return 0


def cmd_normalize(args):
    doc = _load_doc(args)
    kind = ser.detect_kind(doc)
    _emit(args, _DUMPERS[kind](_LOADERS[kind](doc)))
    return 0


def cmd_sample(args):
    seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2 ** 32)
    log.warning("sample: seed=%d", seed)
    rng = random.Random(seed)
    spec = FieldSpec(args.p, tuple(v.strip() for v in args.variables.split(",") if v.strip()))
    pi = random_class(spec, args.m, args.n, rng, max_terms=args.terms, degree=args.degree)
    _emit(args, ser.class_to_json(pi))
    return 0


# -- parser -----------------------------------------------------------------------

def _io(sp, with_input=True):
    if with_input:
        sp.add_argument("--input", "-i", metavar="PATH", help="input document ('-' for stdin)")
        sp.add_argument("--json", metavar="TEXT", help="inline input document")
    sp.add_argument("--output", "-o", metavar="PATH", help="write the result here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="kmsymbols", description="Kato-Milne symbol calculus over F_p(x_1..x_r).")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("witt-eval", help="truncated Witt vector arithmetic")
    _io(sp)
    sp.set_defaults(func=cmd_witt_eval)

    sp = sub.add_parser("decompose", help="rewrite a class into basis form with a certificate")
    _io(sp)
    sp.add_argument("--trace", nargs="?", const="-", metavar="PATH",
                    help="also emit the derivation trace (embedded, or written to PATH)")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("bounds", help="evaluate symbol-length and essential-dimension bounds")
    sp.add_argument("params", nargs="*", metavar="KEY=VALUE")
    _io(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="replay a derivation trace")
    _io(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generic-sum", help="the generic sum of l symbols")
    for name in ("p", "ell", "m", "n"):
        sp.add_argument(f"--{name}", type=int)
    _io(sp)
    sp.set_defaults(func=cmd_generic_sum)

    sp = sub.add_parser("present-cyclic", help="generators and relations of a cyclic algebra")
    _io(sp)
    sp.set_defaults(func=cmd_present_cyclic)

    sp = sub.add_parser("validate", help="check a class, trace or canonical-form document")
    _io(sp)
    sp.add_argument("--kind", choices=("auto", "class", "trace", "canonical"), default="auto")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("normalize", help="parse a document and re-emit it canonically")
    _io(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("sample", help="a seeded random class")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--variables", default="x,y,z")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--terms", type=int, default=4)
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--seed", type=int)
    _io(sp, with_input=False)
    sp.set_defaults(func=cmd_sample)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (KMError, ValueError, ZeroDivisionError) as exc:
        print(json.dumps(_error_doc(exc), ensure_ascii=False), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
