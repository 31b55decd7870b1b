from __future__ import annotations

import re
from dataclasses import dataclass

from sympy import isprime

from ..errors import PreconditionFailed

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class FieldSpec:
    """The rational function field F_p(x_1, ..., x_r).

    The variables form the standard p-basis, so ``r`` is the p-rank.  With no
    variables the field is the perfect prime field F_p.
    """

    p: int
    variables: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not isinstance(self.p, int) or not isprime(self.p):
            raise PreconditionFailed(f"p must be prime, got {self.p!r}")
        if len(set(self.variables)) != len(self.variables):
            raise PreconditionFailed(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not isinstance(v, str) or not _NAME.match(v):
                raise PreconditionFailed(f"invalid variable name {v!r}")

    @property
    def r(self):
        return len(self.variables)

    def index(self, name):
        return self.variables.index(name)

    # shortcuts for building elements
    def zero(self):
        from .ratfunc import RatFunc
        return RatFunc.from_int(self, 0)

    def one(self):
        from .ratfunc import RatFunc
        return RatFunc.from_int(self, 1)

    def const(self, c):
        from .ratfunc import RatFunc
        return RatFunc.from_int(self, c)

    def var(self, name):
        from .ratfunc import RatFunc
        return RatFunc.variable(self, self.index(name) if isinstance(name, str) else name)

    def gens(self):
        return [self.var(i) for i in range(self.r)]

    def parse(self, text):
        from .parse import parse_ratfunc
        return parse_ratfunc(text, self)

    def __str__(self):
        if not self.variables:
            return f"F_{self.p}"
        return f"F_{self.p}({', '.join(self.variables)})"
