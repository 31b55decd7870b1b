from .cyclic import CyclicPresentation, present_cyclic
from .moves import (
    KINDS, DerivationTrace, Deriver, RewriteMove, Verdict,
    apply_move, exp_reduction, swap_slots, verify_derivation,
)
from .symbols import (
    ClassExpr, SymbolTerm, class_add, exp_map, generic_sum, shift, symbol, times_p_power,
)

__all__ = [
    "SymbolTerm", "ClassExpr", "symbol", "class_add", "shift", "exp_map", "times_p_power",
    "generic_sum", "RewriteMove", "DerivationTrace", "Verdict", "Deriver", "KINDS",
    "apply_move", "verify_derivation", "swap_slots", "exp_reduction",
    "CyclicPresentation", "present_cyclic",
]
