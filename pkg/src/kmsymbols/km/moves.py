"""Rewrite moves on class expressions and the derivation certificates built from them.

Every move is a local, exactly checkable identity in H^{n+1}_{p^m}(F):

ArtinSchreier  w (x) b  ->  (w - wp(u)) (x) b                     params: index, witness
SlotMatch      V^i([a]) (x) ... a^{+-1} ...  ->  0                params: index, coord, slot, inverse
RepeatSlot     w (x) ... b ... b ...  ->  0   (or introduce one)  params: index, positions[, introduce]
SlotMul        w (x) ... b'b'' ...  ->  w (x) ... b' ... + w (x) ... b'' ...
                                                                  params: index, slot, factors
WittAdd        merge two terms with equal slots, or split a Witt slot into parts
                                                                  params: mode, indices | index, parts
PScalar        w (x) ... b^k ...  ->  (k w) (x) ... b ...          params: index, slot, base, exponent
ShiftIntro     move the whole expression along the shift map       params: direction, amount

A SlotMul with an empty factor list removes a term whose slot is 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..arith import RatFunc
from ..errors import KMError, SideConditionFailed
from ..witt import WittVector, scalar_mul, wp
from .symbols import ClassExpr, SymbolTerm

KINDS = ("ArtinSchreier", "SlotMatch", "RepeatSlot", "SlotMul", "WittAdd", "PScalar", "ShiftIntro")


@dataclass(frozen=True)
class RewriteMove:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SideConditionFailed(f"unknown move kind {self.kind!r}")

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params))))


def _fail(msg):
    raise SideConditionFailed(msg)


def _term(expr, params, key="index"):
    i = params.get(key)
    if not isinstance(i, int) or not 0 <= i < len(expr.terms):
        _fail(f"term index {i!r} out of range for {len(expr.terms)} terms")
    return i, expr.terms[i]


def _slot_index(term, k):
    if not isinstance(k, int) or not 0 <= k < len(term.slots):
        _fail(f"slot index {k!r} out of range")
    return k


def _witt_like(expr, w, what):
    if not isinstance(w, WittVector) or w.spec != expr.spec or w.m != expr.m:
        _fail(f"{what} must be a Witt vector of length {expr.m} over {expr.spec}")
    return w


def _replace(expr, i, new_terms, drop_zero=True):
    kept = [t for t in new_terms if not (drop_zero and t.witt.is_zero())]
    return expr.with_terms(expr.terms[:i] + tuple(kept) + expr.terms[i + 1:])


def apply_move(expr: ClassExpr, mv: RewriteMove) -> ClassExpr:
    """Apply ``mv`` to ``expr`` after checking its side condition exactly."""
    try:
        return _DISPATCH[mv.kind](expr, mv.params)
    except SideConditionFailed:
        raise
    except KMError as exc:
        raise SideConditionFailed(f"{mv.kind}: {exc}") from exc


def _artin_schreier(expr, params):
    i, t = _term(expr, params)
    u = _witt_like(expr, params.get("witness"), "witness")
    return _replace(expr, i, [t.with_witt(t.witt - wp(u))])


def _slot_match(expr, params):
    i, t = _term(expr, params)
    k = _slot_index(t, params.get("slot"))
    coord = params.get("coord")
    single = t.witt.single_coordinate()
    if single is None or single[0] != coord:
        _fail(f"SlotMatch: Witt slot {t.witt} is not V^{coord}([a])")
    a = single[1]
    expected = a.inverse() if params.get("inverse", False) else a
    if t.slots[k] != expected:
        _fail(f"SlotMatch: slot {k} = {t.slots[k]} differs from {expected}")
    return _replace(expr, i, [])


def _repeat_slot(expr, params):
    positions = params.get("positions")
    if not (isinstance(positions, (list, tuple)) and len(positions) == 2 and positions[0] != positions[1]):
        _fail("RepeatSlot needs two distinct slot positions")
    intro = params.get("introduce")
    if intro is not None:
        i = params.get("index")
        if not isinstance(i, int) or not 0 <= i <= len(expr.terms):
            _fail(f"insertion index {i!r} out of range")
        if not isinstance(intro, SymbolTerm):
            _fail("introduced term must be a symbol")
        term = intro
    else:
        i, term = _term(expr, params)
    a, b = (_slot_index(term, k) for k in positions)
    if term.slots[a] != term.slots[b]:
        _fail(f"RepeatSlot: slots {a} and {b} differ")
    if intro is not None:
        expr.with_terms([term])  # shape check
        return expr.with_terms(expr.terms[:i] + (term,) + expr.terms[i:])
    return _replace(expr, i, [])


def _slot_mul(expr, params):
    i, t = _term(expr, params)
    k = _slot_index(t, params.get("slot"))
    factors = params.get("factors")
    if not isinstance(factors, (list, tuple)):
        _fail("SlotMul needs a factor list")
    prod = RatFunc.from_int(expr.spec, 1)
    for f in factors:
        if not isinstance(f, RatFunc) or f.spec != expr.spec or f.is_zero():
            _fail(f"SlotMul factor {f!r} must be a nonzero element of {expr.spec}")
        prod = prod * f
    if prod != t.slots[k]:
        _fail(f"SlotMul: product of factors {prod} != slot {t.slots[k]}")
    return _replace(expr, i, [t.with_slot(k, f) for f in factors], drop_zero=False)


def _witt_add(expr, params):
    mode = params.get("mode")
    if mode == "merge":
        idx = params.get("indices")
        if not (isinstance(idx, (list, tuple)) and len(idx) == 2):
            _fail("WittAdd merge needs two indices")
        i, j = idx
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < len(expr.terms)):
            _fail(f"WittAdd merge indices {idx!r} invalid")
        a, b = expr.terms[i], expr.terms[j]
        if a.slots != b.slots:
            _fail(f"WittAdd merge: terms {i} and {j} have different slots")
        merged = a.with_witt(a.witt + b.witt)
        terms = list(expr.terms)
        del terms[j]
        if merged.witt.is_zero():
            del terms[i]
        else:
            terms[i] = merged
        return expr.with_terms(terms)
    if mode == "split":
        i, t = _term(expr, params)
        parts = params.get("parts")
        if not isinstance(parts, (list, tuple)) or not parts:
            _fail("WittAdd split needs a nonempty part list")
        total = WittVector.zero_like(t.witt)
        for w in parts:
            _witt_like(expr, w, "part")
            if w.is_zero():
                _fail("WittAdd split parts must be nonzero")
            total = total + w
        if total != t.witt:
            _fail(f"WittAdd split: parts sum to {total}, not {t.witt}")
        return _replace(expr, i, [t.with_witt(w) for w in parts])
    _fail(f"WittAdd mode must be 'merge' or 'split', got {mode!r}")


def _p_scalar(expr, params):
    i, t = _term(expr, params)
    k = _slot_index(t, params.get("slot"))
    base, e = params.get("base"), params.get("exponent")
    if not isinstance(base, RatFunc) or base.spec != expr.spec or base.is_zero():
        _fail("PScalar base must be a nonzero field element")
    if not isinstance(e, int) or isinstance(e, bool):
        _fail("PScalar exponent must be an integer")
    if base ** e != t.slots[k]:
        _fail(f"PScalar: ({base})^{e} != slot {t.slots[k]}")
    return _replace(expr, i, [SymbolTerm(scalar_mul(e, t.witt), t.slots[:k] + (base,) + t.slots[k + 1:])])


def _shift_intro(expr, params):
    direction, amount = params.get("direction"), params.get("amount")
    if not isinstance(amount, int) or amount < 1:
        _fail("ShiftIntro amount must be a positive integer")
    if direction == "up":
        return ClassExpr(expr.spec, expr.m + amount, expr.n,
                         tuple(t.with_witt(t.witt.shift(amount)) for t in expr.terms))
    if direction == "down":
        if amount >= expr.m:
            _fail(f"cannot shift level {expr.m} down by {amount}")
        terms = []
        for t in expr.terms:
            if t.witt.leading_zeros() < amount:
                _fail(f"ShiftIntro down: {t.witt} is not in the image of V^{amount}")
            terms.append(SymbolTerm(WittVector.field(expr.spec, t.witt.coords[amount:]), t.slots))
        return ClassExpr(expr.spec, expr.m - amount, expr.n, tuple(terms))
    _fail(f"ShiftIntro direction must be 'up' or 'down', got {direction!r}")


_DISPATCH = {
    "ArtinSchreier": _artin_schreier,
    "SlotMatch": _slot_match,
    "RepeatSlot": _repeat_slot,
    "SlotMul": _slot_mul,
    "WittAdd": _witt_add,
    "PScalar": _p_scalar,
    "ShiftIntro": _shift_intro,
}


@dataclass(frozen=True)
class DerivationTrace:
    start: ClassExpr
    steps: tuple = ()  # (RewriteMove, ClassExpr) pairs

    @property
    def final(self):
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def kinds(self):
        return [mv.kind for mv, _ in self.steps]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_derivation(trace: DerivationTrace) -> Verdict:
    """Replay every step; reject at the first failed side condition or broken link."""
    current = trace.start
    for k, (mv, recorded) in enumerate(trace.steps):
        try:
            expected = apply_move(current, mv)
        except KMError as exc:
            return Verdict(False, k, str(exc))
        if expected != recorded:
            return Verdict(False, k, f"{mv.kind}: recorded result does not match the replayed move")
        current = recorded
    return Verdict(True)


class Deriver:
    """Applies moves to a running expression and records them."""

    def __init__(self, start: ClassExpr):
        self.start = start
        self.current = start
        self.steps = []

    def apply(self, kind, **params):
        mv = RewriteMove(kind, params)
        self.current = apply_move(self.current, mv)
        self.steps.append((mv, self.current))
        return self.current

    def extend(self, trace: DerivationTrace):
        if trace.start != self.current:
            raise KMError("trace does not continue from the current expression")
        self.steps.extend(trace.steps)
        self.current = trace.final

    def trace(self):
        return DerivationTrace(self.start, tuple(self.steps))


def swap_slots(d: Deriver, index: int, k: int):
    """w (x) .. b1 (x) b2 .. -> (-w) (x) .. b2 (x) b1 .. by expanding 0 = w' (x) (b1 b2) (x) (b1 b2)."""
    t = d.current.terms[index]
    b1, b2 = t.slots[k], t.slots[k + 1]
    if b1 == b2:
        raise KMError("swap of equal slots; use RepeatSlot")
    neg = t.with_witt(-t.witt)
    bb = b1 * b2
    zero = neg.with_slot(k, bb).with_slot(k + 1, bb)
    d.apply("RepeatSlot", index=index + 1, positions=[k, k + 1], introduce=zero)
    d.apply("SlotMul", index=index + 1, slot=k, factors=[b1, b2])
    d.apply("SlotMul", index=index + 1, slot=k + 1, factors=[b1, b2])
    d.apply("SlotMul", index=index + 3, slot=k + 1, factors=[b1, b2])
    d.apply("RepeatSlot", index=index + 4, positions=[k, k + 1])
    d.apply("RepeatSlot", index=index + 1, positions=[k, k + 1])
    d.apply("WittAdd", mode="merge", indices=[index, index + 1])
    return d.current


def exp_reduction(term: SymbolTerm) -> DerivationTrace:
    """Certify that p^{m-1} copies of ``term`` reduce to (a_1) (x) b at level 1.

    The copies merge to (0, ..., 0, a_1^{p^{m-1}}) (x) b, which is shifted down and
    then rewritten by m-1 Artin-Schreier moves with witnesses a_1^{p^{m-2}}, ..., a_1.
    """
    m = term.witt.m
    p = term.spec.p
    copies = p ** (m - 1)
    d = Deriver(ClassExpr(term.spec, m, len(term.slots), (term,) * copies))
    for _ in range(copies - 1):
        d.apply("WittAdd", mode="merge", indices=[0, 1])
    if m > 1 and d.current.terms:
        d.apply("ShiftIntro", direction="down", amount=m - 1)
        a = term.witt.coords[0]
        for j in range(m - 2, -1, -1):
            d.apply("ArtinSchreier", index=0, witness=WittVector.field(term.spec, [a.frobenius(j) if j else a]))
    return d.trace()
