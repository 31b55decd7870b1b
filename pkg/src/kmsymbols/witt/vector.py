"""Truncated Witt vectors W_m over Z (verification mode) or F_p(x_1..x_r)."""

from __future__ import annotations

from ..arith import FieldSpec, Poly, RatFunc
from ..arith.parse import parse_ratfunc, render_ratfunc
from ..errors import InternalError, ModeMismatch
from .universal import get_table


class WittVector:
    """Immutable length-m Witt vector.

    ``spec is None`` selects integer mode (coordinates are Python ints and the
    ghost map is available); otherwise the coordinates are ``RatFunc`` values
    of ``spec`` and arithmetic happens in characteristic p.
    """

    __slots__ = ("p", "coords", "spec", "_hash")

    def __init__(self, coords, p=None, spec: FieldSpec | None = None):
        if spec is not None:
            p = spec.p
            coords = tuple(_to_field(spec, c) for c in coords)
        else:
            if p is None:
                raise ValueError("integer-mode Witt vectors need p")
            coords = tuple(int(c) for c in coords)
        if not coords:
            raise ValueError("Witt vectors have length >= 1")
        self.p = p
        self.coords = coords
        self.spec = spec
        self._hash = None

    @classmethod
    def integer(cls, coords, p):
        return cls(coords, p=p)

    @classmethod
    def field(cls, spec, coords):
        return cls(coords, spec=spec)

    @classmethod
    def zero_like(cls, other, m=None):
        m = other.m if m is None else m
        return cls._same_mode(other, [0] * m)

    @classmethod
    def _same_mode(cls, other, coords):
        if other.spec is None:
            return cls(coords, p=other.p)
        return cls(coords, spec=other.spec)

    # -- basic queries --------------------------------------------------
    @property
    def m(self):
        return len(self.coords)

    @property
    def is_field_mode(self):
        return self.spec is not None

    def is_zero(self):
        if self.spec is None:
            return not any(self.coords)
        return all(c.is_zero() for c in self.coords)

    def leading_zeros(self):
        """Number of leading zero coordinates (``m`` for the zero vector)."""
        for i, c in enumerate(self.coords):
            if (c != 0) if self.spec is None else not c.is_zero():
                return i
        return self.m

    def single_coordinate(self):
        """``(i, a)`` if this vector is V^i([a]) with a != 0, else ``None``."""
        nonzero = [i for i, c in enumerate(self.coords) if ((c != 0) if self.spec is None else not c.is_zero())]
        if len(nonzero) != 1:
            return None
        i = nonzero[0]
        return i, self.coords[i]

    def _check(self, other):
        if not isinstance(other, WittVector):
            raise ModeMismatch(f"expected a WittVector, got {type(other).__name__}")
        if self.p != other.p or self.m != other.m or self.spec != other.spec:
            raise ModeMismatch(
                f"Witt vectors differ in (p, m, mode): ({self.p}, {self.m}, {self._mode()}) "
                f"vs ({other.p}, {other.m}, {other._mode()})")

    def _mode(self):
        return "Z" if self.spec is None else str(self.spec)

    def _need_field(self, what):
        if self.spec is None:
            raise ModeMismatch(f"{what} requires a characteristic-p (field-mode) Witt vector")

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        return self._apply("sum", self.coords + other.coords)

    def __neg__(self):
        if self.is_zero():
            return self
        return self._apply("neg", self.coords)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return scalar_mul(other, self)
        self._check(other)
        if self.is_zero():
            return self
        if other.is_zero():
            return other
        return self._apply("prod", self.coords + other.coords)

    def __rmul__(self, k):
        if isinstance(k, int):
            return scalar_mul(k, self)
        return NotImplemented

    def _apply(self, op, values):
        table = get_table(self.p, self.m)
        if self.spec is None:
            return WittVector(table.compiled(op)(*values), p=self.p)
        return WittVector(_eval_field(table, op, values, self.spec), spec=self.spec)

    def frobenius(self):
        """Coordinatewise p-th power (a ring endomorphism in characteristic p)."""
        self._need_field("frobenius")
        return WittVector([c.frobenius() for c in self.coords], spec=self.spec)

    def truncate(self, k):
        """Image under the restriction W_m -> W_k."""
        if not 1 <= k <= self.m:
            raise ValueError(f"cannot truncate length {self.m} to {k}")
        return WittVector._same_mode(self, self.coords[:k])

    def shift(self, k=1):
        """V^k, prepending ``k`` zero coordinates (length grows by ``k``)."""
        if k < 0:
            raise ValueError("shift amount must be nonnegative")
        zero = 0 if self.spec is None else self.spec.zero()
        return WittVector._same_mode(self, (zero,) * k + self.coords)

    def shift_within(self, k=1):
        """V^k followed by truncation back to length m."""
        if k >= self.m:
            return WittVector.zero_like(self)
        return self.truncate(self.m - k).shift(k)

    def ghost(self):
        if self.spec is not None:
            raise ModeMismatch("ghost components are defined in integer mode")
        return ghost(self)

    # -- equality / display ---------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.p == other.p and self.spec == other.spec and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.coords))
        return self._hash

    def render(self):
        if self.spec is None:
            return "(" + ", ".join(str(c) for c in self.coords) + ")"
        return "(" + ", ".join(render_ratfunc(c) for c in self.coords) + ")"

    def to_strings(self):
        if self.spec is None:
            return [str(c) for c in self.coords]
        return [render_ratfunc(c) for c in self.coords]

    __str__ = render

    def __repr__(self):
        return f"WittVector{self.render()}"


def _to_field(spec, c):
    if isinstance(c, RatFunc):
        if c.spec != spec:
            raise ModeMismatch(f"coordinate lives in {c.spec}, not {spec}")
        return c
    if isinstance(c, int):
        return RatFunc.from_int(spec, c)
    if isinstance(c, Poly):
        return RatFunc(spec, c)
    if isinstance(c, str):
        return parse_ratfunc(c, spec)
    raise TypeError(f"cannot use {c!r} as a Witt coordinate")


def _eval_field(table, op, values, spec):
    """Evaluate the mod-p universal polynomials at field elements."""
    p = spec.p
    if all(v.is_constant() for v in values):
        ints = [v.num.constant_value() for v in values]
        return [RatFunc.from_int(spec, c) for c in table.compiled(op, p)(*ints)]
    polys = table.reduced(op)
    nums = [v.num for v in values]
    dens = [v.den for v in values]
    zero_vars = {i for i, v in enumerate(values) if v.is_zero()}
    npow = [[Poly.one(p, spec.r)] for _ in values]
    dpow = [[Poly.one(p, spec.r)] for _ in values]

    def power(cache, base, k):
        while len(cache) <= k:
            cache.append(cache[-1] * base)
        return cache[k]

    out = []
    for f in polys:
        live = [(e, c) for e, c in f.terms.items() if not any(e[i] for i in zero_vars)]
        if not live:
            out.append(RatFunc.from_int(spec, 0))
            continue
        emax = [max(e[i] for e, _ in live) for i in range(len(values))]
        den = Poly.one(p, spec.r)
        for i, k in enumerate(emax):
            if k and not dens[i].is_one():
                den = den * _pow(dens[i], k, dpow[i], power)
        num = Poly.zero(p, spec.r)
        for e, c in live:
            t = Poly.constant(p, spec.r, c)
            for i, k in enumerate(e):
                if k:
                    t = t * _pow(nums[i], k, npow[i], power)
                if emax[i] - k and not dens[i].is_one():
                    t = t * _pow(dens[i], emax[i] - k, dpow[i], power)
            num = num + t
        out.append(RatFunc(spec, num, den))
    return out


def _pow(base, k, cache, power):
    if k < 64:
        return power(cache, base, k)
    return base ** k


# -- module-level operations --------------------------------------------

def witt_add(u, w):
    return u + w


def witt_neg(w):
    return -w


def witt_mul(u, w):
    return u * w


def frobenius_pow(w):
    return w.frobenius()


def wp(w):
    """Artin-Schreier map w -> F(w) - w."""
    w._need_field("the Artin-Schreier map")
    return w.frobenius() - w


def verschiebung(w):
    """(a_1, ..., a_k) -> (0, a_1, ..., a_k); the target is one coordinate longer."""
    return w.shift(1)


def teichmuller(a, m, p=None, spec=None):
    """[a] = (a, 0, ..., 0) of length m."""
    if spec is None and isinstance(a, RatFunc):
        spec = a.spec
    if spec is not None:
        return WittVector([a] + [0] * (m - 1), spec=spec)
    return WittVector([a] + [0] * (m - 1), p=p)


def scalar_mul(k, w):
    """k-fold Witt sum of ``w`` (negated for k < 0), by doubling."""
    if k < 0:
        return scalar_mul(-k, -w)
    result = WittVector.zero_like(w)
    base = w
    while k:
        if k & 1:
            result = result + base
        k >>= 1
        if k:
            base = base + base
    return result


def v_split(w):
    """Write w = [first] + V(tail) with first the leading coordinate of w."""
    if w.m < 2:
        raise ValueError("v_split needs length >= 2")
    first = w.coords[0]
    diff = w - teichmuller(first, w.m, p=w.p, spec=w.spec)
    lead = diff.coords[0]
    if (lead != 0) if w.spec is None else not lead.is_zero():
        raise InternalError("first coordinate of w - [w_0] is nonzero")
    return first, WittVector._same_mode(w, diff.coords[1:])


def ghost(w):
    """Ghost components g_i = sum_{j<=i} p**j * w_j**(p**(i-j)) of an integer vector."""
    if w.spec is not None:
        raise ModeMismatch("ghost components are defined in integer mode")
    p = w.p
    return [sum(p ** j * w.coords[j] ** (p ** (i - j)) for j in range(i + 1)) for i in range(w.m)]
