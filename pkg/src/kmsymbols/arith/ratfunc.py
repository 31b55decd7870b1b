"""Elements of F_p(x_1, ..., x_r) as reduced fractions."""

from __future__ import annotations

from ..errors import DivisionByZero, SpecMismatch
from .field import FieldSpec
from .poly import Poly, gcd


class RatFunc:
    """Reduced fraction ``num/den`` with ``den`` monic under graded-lex.

    Representatives are unique, so equality is structural.
    """

    __slots__ = ("spec", "num", "den", "_hash")

    def __init__(self, spec: FieldSpec, num: Poly, den: Poly | None = None, *, reduced=False):
        if den is None:
            den = Poly.one(spec.p, spec.r)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not reduced:
            if num.is_zero():
                den = Poly.one(spec.p, spec.r)
            elif not den.is_constant():
                g = gcd(num, den)
                if not g.is_one():
                    num = num.divexact(g)
                    den = den.divexact(g)
            _, lc = den.leading_term()
            if lc != 1:
                inv = pow(lc, -1, spec.p)
                num = num.scale(inv)
                den = den.scale(inv)
        self.spec = spec
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_int(cls, spec, c):
        return cls(spec, Poly.constant(spec.p, spec.r, c), reduced=True)

    @classmethod
    def variable(cls, spec, index):
        return cls(spec, Poly.variable(spec.p, spec.r, index), reduced=True)

    @classmethod
    def from_poly(cls, spec, f):
        return cls(spec, f, reduced=True)

    # -- predicates -----------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_poly(self):
        return self.den.is_one()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_one()

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.spec != self.spec:
                raise SpecMismatch(f"{self.spec} vs {other.spec}")
            return other
        if isinstance(other, int):
            return RatFunc.from_int(self.spec, other)
        if isinstance(other, Poly):
            return RatFunc(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFunc(self.spec, self.num + other.num, self.den)
        if self.den.is_one():
            return RatFunc(self.spec, self.num * other.den + other.num, other.den, reduced=True)
        if other.den.is_one():
            return RatFunc(self.spec, self.num + other.num * self.den, self.den, reduced=True)
        g = gcd(self.den, other.den)
        a = self.den.divexact(g)
        b = other.den.divexact(g)
        return RatFunc(self.spec, self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.spec, -self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc.from_int(self.spec, 0)
        if self.is_one():
            return other
        if other.is_one():
            return self
        # cross-cancel so that only small gcds are needed
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1, d2 = (self.num, other.den) if g1.is_one() else (self.num.divexact(g1), other.den.divexact(g1))
        n2, d1 = (other.num, self.den) if g2.is_one() else (other.num.divexact(g2), self.den.divexact(g2))
        num, den = n1 * n2, d1 * d2
        _, lc = den.leading_term()
        if lc != 1:
            inv = pow(lc, -1, self.spec.p)
            num, den = num.scale(inv), den.scale(inv)
        return RatFunc(self.spec, num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        _, lc = den.leading_term()
        if lc != 1:
            inv = pow(lc, -1, self.spec.p)
            num, den = num.scale(inv), den.scale(inv)
        return RatFunc(self.spec, num, den, reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RatFunc.from_int(self.spec, 1)
        # powers of reduced fractions stay reduced; a monic denominator stays monic
        return RatFunc(self.spec, self.num ** k, self.den ** k, reduced=True)

    def frobenius(self, times=1):
        return RatFunc(self.spec, self.num.frobenius(times), self.den.frobenius(times), reduced=True)

    # -- equality / display ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.den.is_one() and self.num == other
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.spec == other.spec and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        from .parse import render_ratfunc
        return render_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self})"
