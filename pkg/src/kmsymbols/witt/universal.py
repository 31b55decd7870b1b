"""Universal Witt polynomials over Z, obtained by inverting ghost components.

For each (p, m) the table holds, per coordinate n < m, integer polynomials
S_n (sum), P_n (product) in the 2m indeterminates X_0..X_{m-1}, Y_0..Y_{m-1}
and N_n (negation) in X_0..X_{m-1}.  Every division by p**n performed while
solving the ghost equations is checked to be exact.

Set ``KMSYMBOLS_CACHE_DIR`` to persist tables as JSON between runs.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from pathlib import Path

from ..errors import InternalError
from ..arith.poly import Poly

log = logging.getLogger(__name__)

CACHE_ENV = "KMSYMBOLS_CACHE_DIR"

_tables: dict[tuple[int, int], "UniversalPolyTable"] = {}
_lock = threading.Lock()


def ghost_poly(p, n, nvars, offset=0):
    """w_n = sum_{j<=n} p**j * X_j**(p**(n-j)) with X_j the variable ``offset + j``."""
    terms = {}
    for j in range(n + 1):
        e = [0] * nvars
        e[offset + j] = p ** (n - j)
        terms[tuple(e)] = p ** j
    return Poly(0, nvars, terms)


def _solve_ghost(p, m, targets, nvars):
    """Witt coordinates whose ghost components equal ``targets`` (polynomials over Z)."""
    coords = []
    powers = []  # powers[j][k] == coords[j] ** (p**k)
    for n in range(m):
        acc = targets[n]
        for j in range(n):
            chain = powers[j]
            while len(chain) <= n - j:
                chain.append(chain[-1] ** p)
            acc = acc - chain[n - j].scale(p ** j)
        q = p ** n
        bad = [c for c in acc.terms.values() if c % q]
        if bad:
            raise InternalError(f"ghost inversion for p={p}, coordinate {n}: coefficient {bad[0]} not divisible by {q}")
        coord = Poly._raw(0, nvars, {e: c // q for e, c in acc.terms.items()})
        coords.append(coord)
        powers.append([coord])
    return coords


class UniversalPolyTable:
    """Sum / product / negation polynomials of W_m over Z for a fixed prime."""

    def __init__(self, p, m, sums, prods, negs):
        self.p = p
        self.m = m
        self.sum = sums
        self.prod = prods
        self.neg = negs
        self._compiled = {}
        self._reduced = {}

    @classmethod
    def compute(cls, p, m):
        n2 = 2 * m
        gx = [ghost_poly(p, n, n2, 0) for n in range(m)]
        gy = [ghost_poly(p, n, n2, m) for n in range(m)]
        sums = _solve_ghost(p, m, [a + b for a, b in zip(gx, gy)], n2)
        prods = _solve_ghost(p, m, [a * b for a, b in zip(gx, gy)], n2)
        negs = _solve_ghost(p, m, [-ghost_poly(p, n, m, 0) for n in range(m)], m)
        return cls(p, m, sums, prods, negs)

    # -- persistence ----------------------------------------------------
    def to_json(self):
        def enc(polys):
            return [[[list(e), c] for e, c in sorted(f.terms.items())] for f in polys]
        return {"p": self.p, "m": self.m, "sum": enc(self.sum), "prod": enc(self.prod), "neg": enc(self.neg)}

    @classmethod
    def from_json(cls, doc):
        p, m = doc["p"], doc["m"]

        def dec(rows, nvars):
            return [Poly(0, nvars, {tuple(e): c for e, c in row}) for row in rows]
        return cls(p, m, dec(doc["sum"], 2 * m), dec(doc["prod"], 2 * m), dec(doc["neg"], m))

    # -- evaluation -----------------------------------------------------
    def polys(self, op):
        return {"sum": self.sum, "prod": self.prod, "neg": self.neg}[op]

    def reduced(self, op):
        """The ``op`` polynomials with coefficients reduced mod p."""
        if op not in self._reduced:
            self._reduced[op] = [Poly(self.p, f.nvars, f.terms) for f in self.polys(op)]
        return self._reduced[op]

    def compiled(self, op, modulus=0):
        """A Python function mapping integer inputs to all output coordinates."""
        key = (op, modulus)
        fn = self._compiled.get(key)
        if fn is None:
            fn = _compile(self.reduced(op) if modulus else self.polys(op), modulus)
            self._compiled[key] = fn
        return fn


def _compile(polys, modulus):
    nvars = polys[0].nvars
    names = [f"v{i}" for i in range(nvars)]
    exprs = []
    for f in polys:
        parts = []
        for e, c in f.terms.items():
            factors = [str(c)] + [names[i] if k == 1 else f"{names[i]}**{k}" for i, k in enumerate(e) if k]
            parts.append("*".join(factors))
        body = " + ".join(parts) or "0"
        exprs.append(f"({body}) % {modulus}" if modulus else f"({body})")
    src = f"lambda {', '.join(names)}: ({', '.join(exprs)},)"
    return eval(src, {})  # generated from integer coefficients and exponents only


def get_table(p, m) -> UniversalPolyTable:
    """Memoized table for (p, m); population is idempotent and lock-protected."""
    key = (p, m)
    table = _tables.get(key)
    if table is not None:
        return table
    with _lock:
        table = _tables.get(key)
        if table is None:
            table = _load(p, m) or UniversalPolyTable.compute(p, m)
            _store(table)
            _tables[key] = table
    return table


def _cache_path(p, m):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"witt_p{p}_m{m}.json"


def _load(p, m):
    path = _cache_path(p, m)
    if path is None or not path.exists():
        return None
    try:
        return UniversalPolyTable.from_json(json.loads(path.read_text()))
    except (OSError, ValueError, KeyError) as exc:
        log.warning("ignoring unreadable Witt table cache %s: %s", path, exc)
        return None


def _store(table):
    path = _cache_path(table.p, table.m)
    if path is None or path.exists():
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_json()))
        tmp.replace(path)
    except OSError as exc:
        log.warning("could not write Witt table cache %s: %s", path, exc)
