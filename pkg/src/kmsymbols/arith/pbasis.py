"""p-th power structure of F_p[x_1, ..., x_r] relative to the standard p-basis."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotAPthPower, ZeroInput
from .poly import Poly, grlex_key


@dataclass(frozen=True)
class PBasisTerm:
    """The summand ``h**p * x^monomial`` with every exponent of ``monomial`` in [0, p-1]."""

    h: Poly
    monomial: tuple

    def monomial_poly(self):
        return Poly.monomial(self.h.p, self.h.nvars, self.monomial)

    def value(self):
        return self.h.frobenius() * self.monomial_poly()


def pth_root(f: Poly) -> Poly:
    """The unique g with g**p == f; F_p is perfect, so only exponents matter."""
    p = f.p
    out = {}
    for e, c in f.terms.items():
        if any(k % p for k in e):
            raise NotAPthPower(f"exponent {e} not divisible by {p}")
        out[tuple(k // p for k in e)] = c
    return Poly(p, f.nvars, out)


def pbasis_expand(f: Poly) -> list[PBasisTerm]:
    """Write ``f = sum_j h_j**p * M_j`` grouping terms by exponent residues mod p.

    The result is ordered by ascending graded-lex order of the residue monomials.
    """
    if f.is_zero():
        raise ZeroInput("pbasis_expand of the zero polynomial")
    p = f.p
    groups: dict[tuple, dict] = {}
    for e, c in f.terms.items():
        residue = tuple(k % p for k in e)
        quotient = tuple(k // p for k in e)
        groups.setdefault(residue, {})[quotient] = c
    return [PBasisTerm(Poly(p, f.nvars, groups[res]), res)
            for res in sorted(groups, key=grlex_key)]
