from .universal import UniversalPolyTable, get_table, ghost_poly
from .vector import (
    WittVector, frobenius_pow, ghost, scalar_mul, teichmuller, v_split,
    verschiebung, witt_add, witt_mul, witt_neg, wp,
)

__all__ = [
    "WittVector", "UniversalPolyTable", "get_table", "ghost_poly",
    "witt_add", "witt_neg", "witt_mul", "frobenius_pow", "wp", "verschiebung",
    "teichmuller", "scalar_mul", "v_split", "ghost",
]
