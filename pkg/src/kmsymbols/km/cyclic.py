from __future__ import annotations

from dataclasses import dataclass

from ..arith import RatFunc
from ..arith.parse import render_ratfunc
from ..errors import KMError
from ..witt import WittVector


@dataclass(frozen=True)
class CyclicPresentation:
    """Generators and defining relations of the cyclic algebra [w, b).

    Only the presentation is recorded; no algebra is constructed.
    """

    witt: WittVector
    b: RatFunc
    generators: tuple
    relations: tuple
    split: bool  # w == 0, so the class is trivial

    def as_dict(self):
        return {
            "p": self.witt.p,
            "m": self.witt.m,
            "variables": list(self.witt.spec.variables),
            "witt": self.witt.to_strings(),
            "b": render_ratfunc(self.b),
            "generators": list(self.generators),
            "relations": list(self.relations),
            "split": self.split,
        }


def present_cyclic(w: WittVector, b: RatFunc) -> CyclicPresentation:
    if not w.is_field_mode:
        raise KMError("cyclic algebras need a field-mode Witt vector")
    if b.is_zero():
        raise KMError("b must be nonzero")
    p, m = w.p, w.m
    order = p ** m
    if m == 1:
        gens = ("theta", "y")
        rels = (
            f"theta^{p} - theta = {render_ratfunc(w.coords[0])}",
            f"y^{order} = {render_ratfunc(b)}",
            "y*theta*y^-1 = theta + 1",
        )
    else:
        names = [f"theta_{i}" for i in range(1, m + 1)]
        gens = tuple(names) + ("y",)
        theta = "(" + ", ".join(names) + ")"
        one = "(" + ", ".join(["1"] + ["0"] * (m - 1)) + ")"
        rels = (
            f"({', '.join(f'{t}^{p}' for t in names)}) - {theta} = {w.render()}",
            f"y^{order} = {render_ratfunc(b)}",
            f"y*{theta}*y^-1 = {theta} + {one}",
        )
    return CyclicPresentation(w, b, gens, rels, w.is_zero())
