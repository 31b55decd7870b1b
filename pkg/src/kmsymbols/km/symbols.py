"""Formal sums of symbols w (x) b_1 (x) ... (x) b_n over a rational function field."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..arith import FieldSpec, RatFunc
from ..arith.parse import parse_ratfunc, render_ratfunc
from ..errors import KMError, ModeMismatch, SpecMismatch
from ..witt import WittVector, scalar_mul


@dataclass(frozen=True)
class SymbolTerm:
    witt: WittVector
    slots: tuple

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if not self.witt.is_field_mode:
            raise ModeMismatch("symbols need a field-mode Witt vector")
        if not self.slots:
            raise KMError("a symbol needs at least one slot")
        for b in self.slots:
            if not isinstance(b, RatFunc) or b.spec != self.witt.spec:
                raise SpecMismatch(f"slot {b!r} is not an element of {self.witt.spec}")
            if b.is_zero():
                raise KMError("symbol slots must be nonzero")

    @property
    def spec(self):
        return self.witt.spec

    def with_witt(self, witt):
        return SymbolTerm(witt, self.slots)

    def with_slot(self, k, value):
        return SymbolTerm(self.witt, self.slots[:k] + (value,) + self.slots[k + 1:])

    def render(self):
        return " (x) ".join([self.witt.render()] + [f"({render_ratfunc(b)})" for b in self.slots])

    def __str__(self):
        return self.render()


def symbol(spec: FieldSpec, witt, slots) -> SymbolTerm:
    """Build a term from coordinate and slot values given as ints, strings or RatFuncs."""
    w = witt if isinstance(witt, WittVector) else WittVector.field(spec, witt)
    return SymbolTerm(w, tuple(b if isinstance(b, RatFunc) else
                               (parse_ratfunc(b, spec) if isinstance(b, str) else RatFunc.from_int(spec, b))
                               for b in slots))


@dataclass(frozen=True)
class ClassExpr:
    """A class of H^{n+1}_{p^m}(F) given as a list of symbols (empty list = 0)."""

    spec: FieldSpec
    m: int
    n: int
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.m < 1 or self.n < 1:
            raise KMError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        for t in self.terms:
            if t.spec != self.spec:
                raise SpecMismatch(f"term over {t.spec} in a class over {self.spec}")
            if t.witt.m != self.m or len(t.slots) != self.n:
                raise SpecMismatch(f"term shape (m={t.witt.m}, n={len(t.slots)}) != ({self.m}, {self.n})")

    @property
    def p(self):
        return self.spec.p

    @classmethod
    def zero(cls, spec, m, n):
        return cls(spec, m, n, ())

    @classmethod
    def of(cls, *terms):
        if not terms:
            raise ValueError("use ClassExpr.zero for the empty class")
        t = terms[0]
        return cls(t.spec, t.witt.m, len(t.slots), terms)

    def with_terms(self, terms, m=None):
        return ClassExpr(self.spec, self.m if m is None else m, self.n, tuple(terms))

    def is_zero_expr(self):
        return not self.terms

    def same_terms(self, other):
        """Equality as formal sums (term order ignored)."""
        return (self.spec == other.spec and self.m == other.m and self.n == other.n
                and Counter(self.terms) == Counter(other.terms))

    def __add__(self, other):
        return class_add(self, other)

    def __len__(self):
        return len(self.terms)

    def render(self):
        if not self.terms:
            return "0"
        return " + ".join(t.render() for t in self.terms)

    def __str__(self):
        return self.render()


def _check_compatible(a, b):
    if (a.spec, a.m, a.n) != (b.spec, b.m, b.n):
        raise SpecMismatch(f"cannot add classes of shape ({a.spec}, m={a.m}, n={a.n}) and ({b.spec}, m={b.m}, n={b.n})")


def class_add(a: ClassExpr, b: ClassExpr) -> ClassExpr:
    _check_compatible(a, b)
    return a.with_terms(a.terms + b.terms)


def shift(pi: ClassExpr, target_m: int) -> ClassExpr:
    """Shift map H_{p^t} -> H_{p^m}: prepend m - t zeros to every Witt slot."""
    if target_m < pi.m:
        raise KMError(f"shift target level {target_m} is below {pi.m}")
    k = target_m - pi.m
    return ClassExpr(pi.spec, target_m, pi.n, tuple(t.with_witt(t.witt.shift(k)) for t in pi.terms))


def exp_map(pi: ClassExpr) -> ClassExpr:
    """Exp : H_{p^m} -> H_p keeping the first Witt coordinate; zero terms are dropped."""
    terms = []
    for t in pi.terms:
        w = t.witt.truncate(1)
        if not w.is_zero():
            terms.append(t.with_witt(w))
    return ClassExpr(pi.spec, 1, pi.n, tuple(terms))


def times_p_power(pi: ClassExpr, e: int) -> ClassExpr:
    """Multiply by p**e termwise in the Witt slot; zero terms are dropped."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    k = pi.p ** e
    terms = []
    for t in pi.terms:
        w = scalar_mul(k, t.witt)
        if not w.is_zero():
            terms.append(t.with_witt(w))
    return pi.with_terms(terms)


def generic_sum(p: int, ell: int, m: int, n: int) -> ClassExpr:
    """sum_{i=1}^{ell} (x_i_1, ..., x_i_m) (x) y_i_1 (x) ... (x) y_i_n over F_p in (m+n)*ell variables."""
    if min(ell, m, n) < 1:
        raise KMError("ell, m and n must be positive")
    xs = [f"x_{i}_{j}" for i in range(1, ell + 1) for j in range(1, m + 1)]
    ys = [f"y_{i}_{j}" for i in range(1, ell + 1) for j in range(1, n + 1)]
    spec = FieldSpec(p, tuple(xs + ys))
    terms = []
    for i in range(1, ell + 1):
        witt = WittVector.field(spec, [spec.var(f"x_{i}_{j}") for j in range(1, m + 1)])
        terms.append(SymbolTerm(witt, tuple(spec.var(f"y_{i}_{j}") for j in range(1, n + 1))))
    return ClassExpr(spec, m, n, tuple(terms))
