"""Certified rewriting of classes over F_p(x_1..x_r) onto the standard p-basis.

Every class is rewritten into sum_{i_1<...<i_n} w_i (x) x_{i_1} (x) ... (x) x_{i_n},
and every rewrite is recorded as a move in a ``DerivationTrace``.

The work horse is the common-slot identity.  For a slot polynomial
f = sum_j beta_j with beta_j = h_j^p M_j and c_j = a beta_j / f (so sum_j c_j = a):

    V^s([a]) (x) f = sum_j V^s([c_j]) (x) beta_j + D (x) f - D (x) a,
    D = V^s([a]) - sum_j V^s([c_j]),

where D has a zero in coordinate s, so the correction terms sit one level
deeper.  At the last coordinate D vanishes and the identity is the m = 1 one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import FieldSpec, Poly, RatFunc, pbasis_expand
from .arith.parse import render_ratfunc
from .errors import InternalError, KMError, ZeroInput
from .km.moves import DerivationTrace, Deriver, swap_slots
from .km.symbols import ClassExpr, SymbolTerm
from .witt import WittVector, v_split


@dataclass(frozen=True)
class CanonicalForm:
    """Coefficients w_i indexed by strictly increasing 1-based variable tuples."""

    spec: FieldSpec
    m: int
    n: int
    coeffs: dict

    def __post_init__(self):
        for key, w in self.coeffs.items():
            if len(key) != self.n or any(a >= b for a, b in zip(key, key[1:])):
                raise KMError(f"index tuple {key} is not strictly increasing of length {self.n}")
            if not 1 <= key[0] or key[-1] > self.spec.r:
                raise KMError(f"index tuple {key} out of range 1..{self.spec.r}")
            if w.is_zero():
                raise KMError("canonical forms store no zero coefficients")

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return (self.spec, self.m, self.n, self.coeffs) == (other.spec, other.m, other.n, other.coeffs)

    def __hash__(self):
        return hash((self.spec, self.m, self.n, frozenset(self.coeffs.items())))

    def to_class_expr(self) -> ClassExpr:
        gens = self.spec.gens()
        terms = [SymbolTerm(self.coeffs[key], tuple(gens[i - 1] for i in key)) for key in sorted(self.coeffs)]
        return ClassExpr(self.spec, self.m, self.n, tuple(terms))

    def as_json(self):
        return {"tuples": [{"indices": list(key), "witt": self.coeffs[key].to_strings()}
                           for key in sorted(self.coeffs)]}

    @classmethod
    def from_json(cls, doc, spec, m, n):
        coeffs = {}
        for row in doc["tuples"]:
            key = tuple(row["indices"])
            coeffs[key] = WittVector.field(spec, row["witt"])
        return cls(spec, m, n, coeffs)


# -- helpers ----------------------------------------------------------------

def _variable_index(b: RatFunc):
    """Position of ``b`` among the basis variables, or None."""
    if not b.den.is_one() or not b.num.is_monomial():
        return None
    (e, c), = b.num.terms.items()
    if c != 1 or sum(e) != 1:
        return None
    return e.index(1)


def _teich_at(spec, m, s, a):
    coords = [0] * m
    coords[s] = a
    return WittVector.field(spec, coords)


def _rf(spec, f: Poly):
    return RatFunc.from_poly(spec, f)


# -- single phases, each acting on term ``i`` of the running expression ----

def _v_split_term(d: Deriver, i: int):
    """w -> V^s([w_s]) + V^{s+1}(tail) for the term at i (s = leading zeros of w)."""
    t = d.current.terms[i]
    w = t.witt
    s = w.leading_zeros()
    first, tail = v_split(WittVector.field(w.spec, w.coords[s:]))
    head = _teich_at(w.spec, w.m, s, first)
    rest = tail.shift(s + 1)
    if rest.is_zero():
        raise InternalError("v_split of a vector with several nonzero coordinates left no tail")
    d.apply("WittAdd", mode="split", index=i, parts=[head, rest])


def _split_denominator(d: Deriver, i: int, k: int):
    """w (x) f/g -> w (x) f + (-w) (x) g."""
    t = d.current.terms[i]
    spec = t.spec
    b = t.slots[k]
    num, den = _rf(spec, b.num), _rf(spec, b.den)
    if num.is_one():
        d.apply("PScalar", index=i, slot=k, base=den, exponent=-1)
        return
    d.apply("SlotMul", index=i, slot=k, factors=[num, den.inverse()])
    d.apply("PScalar", index=i + 1, slot=k, base=den, exponent=-1)


def _common_slot(d: Deriver, i: int, k: int, pieces):
    """Expand the term V^s([a]) (x) .. f .. at i along f = sum_j beta_j (slot k)."""
    t = d.current.terms[i]
    spec, m = t.spec, t.witt.m
    s, a = t.witt.single_coordinate()
    f = t.slots[k]
    if f == a:
        d.apply("SlotMatch", index=i, coord=s, slot=k)
        return
    betas = [_rf(spec, piece.value()) for piece in pieces]
    cs = [a * beta / f for beta in betas]
    teich = [_teich_at(spec, m, s, c) for c in cs]
    whole = _teich_at(spec, m, s, a)
    diff = whole
    for w in teich:
        diff = diff - w
    if diff.leading_zeros() <= s:
        raise InternalError("coefficients of the common-slot identity do not sum to a")
    parts = teich + ([diff] if not diff.is_zero() else [])
    d.apply("WittAdd", mode="split", index=i, parts=parts)

    pos = i
    a_terms = []
    one = RatFunc.from_int(spec, 1)
    for beta, c in zip(betas, cs):
        factors = [(tag, v) for tag, v in (("beta", beta), ("a", a), ("inv", c.inverse())) if v != one]
        d.apply("SlotMul", index=pos, slot=k, factors=[v for _, v in factors])
        tags = [tag for tag, _ in factors]
        if "inv" in tags:
            d.apply("SlotMatch", index=pos + tags.index("inv"), coord=s, slot=k, inverse=True)
            tags.remove("inv")
        if "a" in tags:
            a_terms.append(pos + tags.index("a"))
        pos += len(tags)

    if not a_terms:
        return
    # sum_j V^s([c_j]) (x) a  ->  V^s([a]) (x) a - D (x) a  ->  -D (x) a
    while len(a_terms) > 1:
        i1, i2 = a_terms[0], a_terms[1]
        cur = d.current.terms
        vanishes = (cur[i1].witt + cur[i2].witt).is_zero()
        d.apply("WittAdd", mode="merge", indices=[i1, i2])
        if vanishes:
            a_terms = [q - 2 for q in a_terms[2:]]
        else:
            a_terms = [i1] + [q - 1 for q in a_terms[2:]]
    if not a_terms:
        raise InternalError("common-slot accumulator vanished")
    acc = a_terms[0]
    w_acc = d.current.terms[acc].witt
    if w_acc != whole:
        d.apply("WittAdd", mode="split", index=acc, parts=[whole, w_acc - whole])
    d.apply("SlotMatch", index=acc, coord=s, slot=k)


def _strip_slot(d: Deriver, i: int, k: int, piece):
    """w (x) h^p M -> w (x) M + (p w) (x) h."""
    t = d.current.terms[i]
    spec = t.spec
    h = _rf(spec, piece.h)
    if not any(piece.monomial):
        d.apply("PScalar", index=i, slot=k, base=h, exponent=spec.p)
        return
    mono = _rf(spec, piece.monomial_poly())
    d.apply("SlotMul", index=i, slot=k, factors=[h.frobenius(), mono])
    d.apply("PScalar", index=i, slot=k, base=h, exponent=spec.p)


def _expand_monomial(d: Deriver, i: int, k: int):
    """w (x) prod x_j^{d_j} -> sum_j (d_j w) (x) x_j."""
    t = d.current.terms[i]
    spec = t.spec
    (e, _), = t.slots[k].num.terms.items()
    factors = [(j, dj) for j, dj in enumerate(e) if dj]
    if len(factors) > 1:
        d.apply("SlotMul", index=i, slot=k,
                factors=[_rf(spec, Poly.variable(spec.p, spec.r, j, dj)) for j, dj in factors])
        return
    (j, dj), = factors
    d.apply("PScalar", index=i, slot=k, base=spec.var(j), exponent=dj)


def _step(d: Deriver, i: int) -> bool:
    """Apply the next rewrite to term i; False when the term is already canonical."""
    t = d.current.terms[i]
    spec = t.spec
    if t.witt.is_zero():
        d.apply("ArtinSchreier", index=i, witness=WittVector.zero_like(t.witt))
        return True
    for k, b in enumerate(t.slots):
        if _variable_index(b) is not None:
            continue
        if b.is_one():
            d.apply("SlotMul", index=i, slot=k, factors=[])
            return True
        if not b.is_poly():
            _split_denominator(d, i, k)
            return True
        pieces = pbasis_expand(b.num)
        if len(pieces) > 1:
            if t.witt.single_coordinate() is None:
                _v_split_term(d, i)
            else:
                _common_slot(d, i, k, pieces)
            return True
        piece = pieces[0]
        if not piece.h.is_one():
            _strip_slot(d, i, k, piece)
        else:
            _expand_monomial(d, i, k)
        return True
    idx = [_variable_index(b) for b in t.slots]
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] == idx[b]:
                d.apply("RepeatSlot", index=i, positions=[a, b])
                return True
    for a in range(len(idx) - 1):
        if idx[a] > idx[a + 1]:
            swap_slots(d, i, a)
            return True
    return False


def _collect(d: Deriver):
    while True:
        first = {}
        for j, t in enumerate(d.current.terms):
            if t.slots in first:
                d.apply("WittAdd", mode="merge", indices=[first[t.slots], j])
                break
            first[t.slots] = j
        else:
            return


def _run(d: Deriver):
    """Rewrite every term, left to right, until it is canonical."""
    i = 0
    while i < len(d.current.terms):
        if not _step(d, i):
            i += 1


def _canonical(expr: ClassExpr) -> CanonicalForm:
    coeffs = {}
    for t in expr.terms:
        key = tuple(_variable_index(b) + 1 for b in t.slots)
        if key in coeffs:
            raise InternalError(f"uncollected tuple {key}")
        coeffs[key] = t.witt
    return CanonicalForm(expr.spec, expr.m, expr.n, coeffs)


def decompose(pi: ClassExpr) -> tuple[CanonicalForm, DerivationTrace]:
    """Rewrite ``pi`` onto the p-basis; the trace certifies pi = sum of the result."""
    d = Deriver(pi)
    _run(d)
    _collect(d)
    return _canonical(d.current), d.trace()


# -- the individual phases as standalone operations -------------------------

def _single(spec, witt, slots):
    term = SymbolTerm(witt, tuple(slots))
    return Deriver(ClassExpr(spec, witt.m, len(slots), (term,)))


def common_slot_m1(a: RatFunc, f: Poly, rest=()):
    """(a) (x) f (x) rest -> sum_j (a beta_j / f) (x) beta_j (x) rest at level 1."""
    if f.is_zero():
        raise ZeroInput("common-slot expansion of the zero polynomial")
    spec = a.spec
    if a.is_zero():
        raise ZeroInput("zero Witt coordinate")
    d = _single(spec, WittVector.field(spec, [a]), (_rf(spec, f),) + tuple(rest))
    _common_slot(d, 0, 0, pbasis_expand(f))
    return list(d.current.terms), d.trace()


def common_slot_teich(a: RatFunc, f: Poly, rest=(), m: int = 2):
    """[a] (x) f (x) rest at level m.

    Returns the Teichmuller terms sum_j [c_j] (x) beta_j (x) rest, the carry
    delta (x) f - delta (x) a as a level m-1 class with V(delta) = [a] - sum_j [c_j],
    and the level-m trace.
    """
    if m < 2:
        raise KMError("common_slot_teich needs m >= 2")
    if f.is_zero():
        raise ZeroInput("common-slot expansion of the zero polynomial")
    spec = a.spec
    rest = tuple(rest)
    d = _single(spec, _teich_at(spec, m, 0, a), (_rf(spec, f),) + rest)
    _common_slot(d, 0, 0, pbasis_expand(f))
    teich, carry = [], []
    for t in d.current.terms:
        if t.witt.leading_zeros() == 0:
            teich.append(t)
        else:
            carry.append(SymbolTerm(WittVector.field(spec, t.witt.coords[1:]), t.slots))
    return teich, ClassExpr(spec, m - 1, 1 + len(rest), tuple(carry)), d.trace()


def strip_pth_power(term: SymbolTerm, position: int):
    """w (x) .. h^p M .. -> w (x) .. M .. + V(F(w)) (x) .. h .. (the latter vanishes at m = 1)."""
    b = term.slots[position]
    if not b.is_poly():
        raise KMError("strip_pth_power needs a polynomial slot")
    pieces = pbasis_expand(b.num)
    if len(pieces) != 1:
        raise KMError(f"slot {render_ratfunc(b)} is not of the form h^p * M")
    d = _single(term.spec, term.witt, term.slots)
    if not pieces[0].h.is_one():
        _strip_slot(d, 0, position, pieces[0])
    return d.current, d.trace()


def multilinear_expand(term: SymbolTerm):
    """Expand monomial slots, sort, drop repeats and collect (a canonical-form fragment)."""
    for b in term.slots:
        if not b.is_poly() or not b.num.is_monomial() or b.num.terms[next(iter(b.num.terms))] != 1:
            raise KMError("multilinear_expand needs monic monomial slots")
    d = _single(term.spec, term.witt, term.slots)
    _run(d)
    _collect(d)
    return _canonical(d.current), d.trace()
