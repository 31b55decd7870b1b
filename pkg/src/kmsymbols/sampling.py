"""Seeded random field elements, Witt vectors and classes for property checks."""

from __future__ import annotations

import random

from .arith import FieldSpec, Poly, RatFunc
from .km import ClassExpr, SymbolTerm
from .witt import WittVector


def random_poly(spec: FieldSpec, rng: random.Random, degree: int = 3, max_terms: int = 4, nonzero=True) -> Poly:
    p, r = spec.p, spec.r
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            total = rng.randint(0, degree)
            e = [0] * r
            for _ in range(total if r else 0):
                e[rng.randrange(r)] += 1
            terms[tuple(e)] = rng.randrange(1, p)
        f = Poly(p, r, terms)
        if not (nonzero and f.is_zero()):
            return f


def random_ratfunc(spec, rng, degree=3, max_terms=4, nonzero=True, denominators=True) -> RatFunc:
    num = random_poly(spec, rng, degree, max_terms, nonzero=nonzero)
    den = random_poly(spec, rng, degree, max_terms) if denominators and rng.random() < 0.5 else Poly.one(spec.p, spec.r)
    return RatFunc(spec, num, den)


def random_witt(spec, m, rng, degree=3, max_terms=3, zero_rate=0.2) -> WittVector:
    coords = []
    for _ in range(m):
        if rng.random() < zero_rate:
            coords.append(spec.zero())
        else:
            coords.append(random_ratfunc(spec, rng, degree, max_terms))
    return WittVector.field(spec, coords)


def random_class(spec, m, n, rng, max_terms=4, degree=3, witt_degree=2) -> ClassExpr:
    """A class with 1..max_terms terms; slot numerators and denominators have degree <= ``degree``."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        w = random_witt(spec, m, rng, degree=witt_degree, max_terms=2)
        slots = tuple(random_ratfunc(spec, rng, degree, max_terms=3) for _ in range(n))
        terms.append(SymbolTerm(w, slots))
    return ClassExpr(spec, m, n, tuple(terms))
