"""Sparse multivariate polynomials over F_p (or over Z when ``p == 0``).

A polynomial is a map from exponent tuples to nonzero coefficients.  Monomials
are compared in graded-lexicographic order: total degree first, then the
exponent tuples lexicographically, so the first variable is the largest.
"""

from __future__ import annotations

import os
from functools import lru_cache, reduce

from ..errors import DivisionByZero, KMError

try:
    import flint
except ImportError:  # pragma: no cover - optional accelerator
    flint = None


_FLINT_MUL_CUTOFF = 400  # term-pair count above which products go through FLINT


def grlex_key(exps):
    return (sum(exps), exps)


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables.

    ``p`` is the characteristic of the coefficient ring; ``p == 0`` means the
    integers (used for universal Witt polynomials).
    """

    __slots__ = ("p", "nvars", "terms", "_hash")

    def __init__(self, p, nvars, terms=None):
        self.p = p
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent vector {e} has length != {nvars}")
                if any(k < 0 for k in e):
                    raise ValueError(f"negative exponent in {e}")
                if p:
                    c %= p
                if c:
                    clean[e] = clean.get(e, 0) + c
            if p:
                clean = {e: c % p for e, c in clean.items() if c % p}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, p, nvars, terms):
        # terms must already be reduced with no zero coefficients
        obj = cls.__new__(cls)
        obj.p = p
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, p, nvars):
        return cls._raw(p, nvars, {})

    @classmethod
    def constant(cls, p, nvars, c):
        if p:
            c %= p
        return cls._raw(p, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, p, nvars):
        return cls.constant(p, nvars, 1)

    @classmethod
    def variable(cls, p, nvars, index, power=1):
        e = [0] * nvars
        e[index] = power
        return cls._raw(p, nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, p, nvars, exps, coeff=1):
        return cls(p, nvars, {tuple(exps): coeff})

    # -- queries --------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, 0)

    def is_one(self):
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 1

    def is_monomial(self):
        return len(self.terms) == 1

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def variables(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    def leading_term(self):
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- ring structure -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.p != self.p or other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return Poly.constant(self.p, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            self, other = other, self
        out = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(p, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        if p:
            return Poly._raw(p, self.nvars, {e: (p - c) for e, c in self.terms.items()})
        return Poly._raw(p, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        p = self.p
        if p:
            c %= p
        if not c:
            return Poly.zero(p, self.nvars)
        if c == 1:
            return self
        if p:
            return Poly._raw(p, self.nvars, {e: v * c % p for e, v in self.terms.items()})
        return Poly._raw(p, self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly.zero(self.p, self.nvars)
        if len(self.terms) < len(other.terms):
            self, other = other, self
        p = self.p
        if p and len(other.terms) > 4 and len(self.terms) * len(other.terms) > _FLINT_MUL_CUTOFF and _use_flint():
            ctx = _flint_ctx(p, self.nvars)
            return _from_flint(p, self.nvars, ctx.from_dict(self.terms) * ctx.from_dict(other.terms))
        out = {}
        get = out.get
        for e2, c2 in other.terms.items():
            for e1, c1 in self.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Poly._raw(p, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        if self.p and k % self.p == 0 and k:
            q = k
            j = 0
            while q % self.p == 0:
                q //= self.p
                j += 1
            return (self ** q).frobenius(j)
        result = Poly.one(self.p, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, times=1):
        """Raise to the power p**times (exponent scaling; valid since c**p == c in F_p)."""
        if not self.p:
            raise KMError("Frobenius needs positive characteristic")
        q = self.p ** times
        return Poly._raw(self.p, self.nvars, {tuple(k * q for k in e): c for e, c in self.terms.items()})

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.leading_term()
        if lc == 1:
            return self
        if not self.p:
            raise KMError("monic normalization needs a field")
        return self.scale(pow(lc, -1, self.p))

    def divexact(self, other):
        """Exact quotient ``self / other``; raises ``ValueError`` if it does not divide."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if other.is_constant():
            c = other.constant_value()
            if not self.p:
                if any(v % c for v in self.terms.values()):
                    raise ValueError("inexact division over Z")
                return Poly._raw(0, self.nvars, {e: v // c for e, v in self.terms.items()})
            return self.scale(pow(c, -1, self.p))
        if other.is_monomial():
            (eo, co), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                d = tuple(a - b for a, b in zip(e, eo))
                if any(k < 0 for k in d):
                    raise ValueError("inexact polynomial division")
                out[d] = c
            q = Poly._raw(self.p, self.nvars, out)
            return q.scale(pow(co, -1, self.p)) if self.p else q.divexact(Poly.constant(0, self.nvars, co))
        p = self.p
        if not p:
            raise KMError("multivariate exact division implemented over F_p only")
        if _use_flint():
            ctx = _flint_ctx(p, self.nvars)
            try:
                q = ctx.from_dict(self.terms) / ctx.from_dict(other.terms)
            except Exception as exc:  # flint signals inexact division with its own DomainError
                raise ValueError("inexact polynomial division") from exc
            return _from_flint(p, self.nvars, q)
        lead_e, lead_c = other.leading_term()
        inv = pow(lead_c, -1, p)
        rem = dict(self.terms)
        quot = {}
        others = [(e, c) for e, c in other.terms.items()]
        while rem:
            e = max(rem, key=grlex_key)
            d = tuple(a - b for a, b in zip(e, lead_e))
            if any(k < 0 for k in d):
                raise ValueError("inexact polynomial division")
            c = rem[e] * inv % p
            quot[d] = c
            for eo, co in others:
                t = tuple(a + b for a, b in zip(d, eo))
                v = (rem.get(t, 0) - c * co) % p
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Poly._raw(p, self.nvars, quot)

    def coeffs_in(self, i):
        """Split as a polynomial in variable ``i``: {degree: coefficient free of x_i}."""
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            stripped = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[stripped] = c
        return {k: Poly._raw(self.p, self.nvars, t) for k, t in out.items()}

    def monomial_content(self):
        """Largest monomial dividing every term, as an exponent tuple."""
        it = iter(self.terms)
        m = list(next(it))
        for e in it:
            m = [min(a, b) for a, b in zip(m, e)]
        return tuple(m)

    # -- equality -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == (other % self.p if self.p else other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly(p={self.p}, {self.sorted_terms()!r})"


def _shift_mul(f, i, k):
    if k == 0:
        return f
    return Poly._raw(f.p, f.nvars, {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in f.terms.items()})


def _prem(a, b, i):
    """Pseudo-remainder of ``a`` by ``b`` viewed as polynomials in x_i."""
    db = b.degree_in(i)
    lcb = b.coeffs_in(i)[db]
    da = a.degree_in(i)
    while a.terms and da >= db:
        lca = a.coeffs_in(i)[da]
        a = a * lcb - _shift_mul(lca * b, i, da - db)
        da = a.degree_in(i)
    return a


def _content(f, i):
    return gcd_many(list(f.coeffs_in(i).values()), gcd_prs)


def gcd_many(polys, method=None):
    method = method or gcd
    g = None
    for f in polys:
        g = f.monic() if g is None else method(g, f)
        if g.is_one():
            break
    return g


@lru_cache(maxsize=None)
def _flint_ctx(p, nvars):
    return flint.nmod_mpoly_ctx.get(tuple(f"v{i}" for i in range(nvars)), modulus=p)


def _use_flint():
    return flint is not None and not os.environ.get("KMSYMBOLS_PURE")


def _from_flint(p, nvars, f):
    return Poly._raw(p, nvars, {tuple(int(a) for a in e): int(c) for e, c in f.to_dict().items()})


def gcd(f, g):
    """Monic gcd of two polynomials over F_p.

    Uses FLINT's multivariate gcd when python-flint is installed, otherwise
    (or with ``KMSYMBOLS_PURE`` set) the pure-Python ``gcd_prs``.
    """
    if f.p == 0:
        raise KMError("gcd implemented over F_p only")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return Poly.one(f.p, f.nvars)
    if not _use_flint():
        return gcd_prs(f, g)
    ctx = _flint_ctx(f.p, f.nvars)
    h = ctx.from_dict(f.terms).gcd(ctx.from_dict(g.terms))
    return _from_flint(f.p, f.nvars, h).monic()


def gcd_prs(f, g):
    """Monic gcd over F_p by recursive content / primitive-part remainder sequences."""
    if f.p == 0:
        raise KMError("gcd implemented over F_p only")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    one = Poly.one(f.p, f.nvars)
    if f.is_constant() or g.is_constant():
        return one
    if f == g:
        return f.monic()
    # factor out the common monomial part
    mf, mg = f.monomial_content(), g.monomial_content()
    mono = tuple(min(a, b) for a, b in zip(mf, mg))
    if any(mf):
        f = f.divexact(Poly._raw(f.p, f.nvars, {mf: 1}))
    if any(mg):
        g = g.divexact(Poly._raw(g.p, g.nvars, {mg: 1}))
    mono_poly = Poly._raw(f.p, f.nvars, {mono: 1})
    if f.is_constant() or g.is_constant():
        return mono_poly
    if f.is_monomial() or g.is_monomial():
        return mono_poly
    vf, vg = f.variables(), g.variables()
    only = (vf - vg) or (vg - vf)
    if only:
        # a variable absent from one side cannot divide the gcd
        i = min(only)
        h, k = (f, g) if i in vf else (g, f)
        return mono_poly * gcd_many([k] + list(h.coeffs_in(i).values()), gcd_prs)
    i = min(vf, key=lambda v: (max(f.degree_in(v), g.degree_in(v)), v))
    cf, cg = _content(f, i), _content(g, i)
    c = gcd_prs(cf, cg)
    a = f if cf.is_one() else f.divexact(cf)
    b = g if cg.is_one() else g.divexact(cg)
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    while True:
        r = _prem(a, b, i)
        if r.is_zero():
            break
        if r.degree_in(i) == 0:
            b = one
            break
        a, b = b, r.divexact(_content(r, i))
    return (mono_poly * c * b).monic()


def lcm(f, g):
    return (f * g).divexact(gcd(f, g)).monic()


def product(polys, p, nvars):
    return reduce(lambda a, b: a * b, polys, Poly.one(p, nvars))
