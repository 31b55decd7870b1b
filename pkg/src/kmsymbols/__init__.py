"""Exact symbol calculus in characteristic p.

Truncated Witt vectors, Kato-Milne classes as formal symbol sums over
F_p(x_1, ..., x_r), certified decomposition onto the standard p-basis, and a
calculator for the associated symbol-length and essential-dimension bounds.
"""

from .arith import FieldSpec, Poly, RatFunc, parse_ratfunc

__version__ = "0.1.0"
