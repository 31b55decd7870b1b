from .field import FieldSpec
from .parse import parse_ratfunc, render_poly, render_ratfunc
from .pbasis import PBasisTerm, pbasis_expand, pth_root
from .poly import Poly, gcd, lcm
from .ratfunc import RatFunc

__all__ = [
    "FieldSpec", "Poly", "RatFunc", "PBasisTerm",
    "gcd", "lcm", "pth_root", "pbasis_expand",
    "parse_ratfunc", "render_poly", "render_ratfunc",
]
