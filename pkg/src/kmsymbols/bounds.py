"""Symbol-length and essential-dimension bound formulas, with provenance.

Each formula is a small pure function on integers (or Fractions).  ``best_bounds``
applies every formula whose inputs are present, chains derived quantities (a
p-rank feeds the binomial bound, an sl upper bound feeds the sandwich), and
keeps the tightest entry per (quantity, relation).  Hypotheses such as "k is
perfect" are never checked; they are attached to each entry as assumptions.

Quantities:
    sl      symbol length of H^{n+1}_{p^m}(F) (or of the given class)
    rank_p  p-rank of a finitely generated extension
    ed_Br   essential dimension of a Brauer class [A] in Br_{p^m}(F)
    ed_p    essential p-dimension of Alg_{p^{lm}, p^m}
    ed_p_H  essential p-dimension of the generic sum of l symbols in H^{n+1}_{p^m}
    ed_H    essential dimension of a sum of l symbols in H^{n+1}_{p^m}(F)
    ed_Br_std, ed_Alg_std
            the same for a base field of characteristic prime to p, kept apart
            since their hypotheses are incompatible with the char p entries
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction

from sympy import isprime

from .errors import KMError, NonPositiveFactor, PreconditionFailed

# assumption flags
CHAR_P = "char k = p"
PERFECT = "k perfect"
INFINITE_PERFECT = "k infinite perfect"
ALG_CLOSED = "k algebraically closed"
BIG_K = "|k| >= p^l"
ELL_GE_2 = "l >= 2"
P_IS_2 = "p = 2"
U_FINITE = "u(F) finite"
CPR_FIELD = "F is a C~_{p,r} field"
FG_EXTENSION = "E finitely generated over k of transcendence degree t"
PRANK_K = "rank_p(k) = r"
PRANK_F = "rank_p(F) = r"
STANDARD_CASE = "char k != p, k algebraically closed"
EXPONENT_P = "A of exponent p"
BAEK_CASE = "p = l = 2, m = 1: delegated to Baek's corollary on Alg_{4,2}"

_LOG_GRID = 10 ** 9  # interval endpoints are multiples of 1e-9
_LOG_DIGITS = 60


def _nonneg(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or v < 0:
            raise PreconditionFailed(f"{name} must be a nonnegative integer, got {v!r}")


def _pos(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or v < 1:
            raise PreconditionFailed(f"{name} must be a positive integer, got {v!r}")


def _prime(p):
    if not isinstance(p, int) or not isprime(p):
        raise PreconditionFailed(f"p must be prime, got {p!r}")


# -- formulas -----------------------------------------------------------------

def sl_upper_prank(r: int, n: int) -> int:
    """binom(r, n): symbol length of H^{n+1}_{p^m}(F) when rank_p(F) = r."""
    _nonneg(r=r, n=n)
    return math.comb(r, n)


def sl_upper_step(t: int, s: int) -> int:
    """t + s, where t bounds sl at level p^{m-1} and s bounds sl at level p."""
    _nonneg(t=t, s=s)
    return t + s


def sl_upper_tower(s: int, m: int) -> int:
    _nonneg(s=s)
    _pos(m=m)
    return m * s


def sl_upper_u(u, n: int, m: int) -> int:
    """m * prod_{i=1}^n (u/2 - 2^i + 1), for p = 2 and finite u-invariant."""
    _pos(n=n, m=m)
    if not isinstance(u, int) or u < 0 or u % 2:
        raise PreconditionFailed(f"u must be a nonnegative even integer, got {u!r}")
    half = u // 2
    if half <= 2 ** n - 1:
        raise NonPositiveFactor(f"factor u/2 - 2^{n} + 1 = {half - 2 ** n + 1} is not positive")
    return m * math.prod(half - 2 ** i + 1 for i in range(1, n + 1))


def sl_upper_cpr(p: int, r: int, m: int) -> int:
    """m * (p^{r-1} - 1) over a C~_{p,r} field (Brauer case, n = 1)."""
    _prime(p)
    _pos(r=r, m=m)
    return m * (p ** (r - 1) - 1)


def prank_fg_extension(r: int, t: int) -> int:
    _nonneg(r=r, t=t)
    return r + t


def ed_lower_from_sl(sl: int, r: int) -> int:
    """sl - r, from ed([A]) + rank_p(k) >= sl([A])."""
    _nonneg(sl=sl, r=r)
    return sl - r


def ed_p_lower_alg(ell: int, r: int) -> int:
    """l + 1 - r for Alg_{p^{lm}, p^m} over k with rank_p(k) = r."""
    if not isinstance(ell, int) or ell < 2:
        raise PreconditionFailed(f"need l >= 2, got {ell!r}")
    _nonneg(r=r)
    return ell + 1 - r


def alg_is_baek_case(p, ell, m) -> bool:
    return p == 2 and ell == 2 and m == 1


def ell_from_degree(t: int, m: int) -> int:
    """l = floor(t/m), so that Alg_{p^t,p^m} inherits the bound for Alg_{p^{lm},p^m}."""
    _nonneg(t=t)
    _pos(m=m)
    return t // m


def ed_p_lower_generic(ell: int, n: int) -> int:
    _pos(ell=ell, n=n)
    return ell + n


def ed_upper_symbols(m: int, ell: int, n: int) -> int:
    _pos(m=m, ell=ell, n=n)
    return m + ell * n


def ed_sandwich(sl: int, m: int) -> tuple[int, int]:
    _nonneg(sl=sl)
    _pos(m=m)
    return (sl, sl + m)


def ed_upper_deg_exp(p: int, n: int, m: int) -> int:
    """p^n + m - 1 for a p-algebra of degree p^n and exponent p^m."""
    _prime(p)
    _nonneg(n=n)
    _pos(m=m)
    return p ** n + m - 1


@dataclass(frozen=True)
class LogBound:
    """The value 1 + log_p(q) for a rational q >= 1.

    ``exact`` is set when q is a power of p; otherwise the value is irrational
    and lies in the closed interval [lo, hi] with hi - lo < 1e-6.
    """

    p: int
    q: Fraction
    exact: Fraction | None
    lo: Fraction
    hi: Fraction
    formula: str

    @property
    def irrational(self):
        return self.exact is None

    def __float__(self):
        return float(self.exact) if self.exact is not None else float((self.lo + self.hi) / 2)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.exact is not None and self.exact == other
        if isinstance(other, LogBound):
            return (self.p, self.q, self.exact, self.lo, self.hi) == (other.p, other.q, other.exact, other.lo, other.hi)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q))

    def render(self):
        if self.exact is not None:
            return _num_str(self.exact)
        return f"{float(self):.6f} (irrational, in [{_num_str(self.lo)}, {_num_str(self.hi)}])"

    def to_json(self):
        doc = {"formula": self.formula, "irrational": self.irrational}
        if self.exact is not None:
            doc["exact"] = _num_json(self.exact)
        else:
            doc["interval"] = [_num_json(self.lo), _num_json(self.hi)]
            doc["approx"] = float(self)
        return doc


def _p_power_exponent(q: Fraction, p: int):
    """k with q == p^k (k >= 0), or None."""
    if q.denominator != 1 or q < 1:
        return None
    v, k = q.numerator, 0
    while v % p == 0:
        v //= p
        k += 1
    return k if v == 1 else None


def _log_interval(q: Fraction, p: int):
    # decimal's ln is correctly rounded, so the quotient is off by far less than
    # the 1e-40 slack; endpoints are then rounded outward to the 1e-9 grid
    with localcontext() as ctx:
        ctx.prec = _LOG_DIGITS
        val = (Decimal(q.numerator).ln() - Decimal(q.denominator).ln()) / Decimal(p).ln()
        slack = Decimal(10) ** -40
        lo = ((val - slack) * _LOG_GRID).to_integral_value(rounding=ROUND_FLOOR)
        hi = ((val + slack) * _LOG_GRID).to_integral_value(rounding=ROUND_CEILING)
    return Fraction(int(lo), _LOG_GRID), Fraction(int(hi), _LOG_GRID)


def ed_lower_cr(p: int, m: int, sl, ell: int | None = None) -> LogBound:
    """1 + log_p(sl/m + 1); with ``ell`` given, sl is taken as l + 1."""
    _prime(p)
    _pos(m=m)
    if ell is not None:
        _pos(ell=ell)
        sl = ell + 1
        formula = f"1 + log_{p}(({ell}+1)/{m} + 1)"
    else:
        formula = f"1 + log_{p}({_num_str(Fraction(sl))}/{m} + 1)"
    sl = Fraction(sl)
    if sl < 0:
        raise PreconditionFailed(f"sl must be nonnegative, got {sl}")
    q = sl / m + 1
    k = _p_power_exponent(q, p)
    if k is not None:
        v = Fraction(1 + k)
        return LogBound(p, q, v, v, v, formula)
    lo, hi = _log_interval(q, p)
    return LogBound(p, q, None, 1 + lo, 1 + hi, formula)


# -- reports ------------------------------------------------------------------

def _num_str(v):
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


def _num_json(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


_REL_SYMBOL = {"<=": "≤", ">=": "≥", "=": "="}


@dataclass(frozen=True)
class BoundEntry:
    quantity: str
    relation: str  # "<=", ">=" or "="
    value: object  # int, Fraction or LogBound
    citation: str
    assumptions: tuple = ()
    note: str = ""

    @property
    def text(self):
        v = self.value.render() if isinstance(self.value, LogBound) else _num_str(self.value)
        return f"{self.quantity} {_REL_SYMBOL[self.relation]} {v}"

    def sort_value(self):
        # for comparisons an irrational lower bound counts as its guaranteed lower end
        if isinstance(self.value, LogBound):
            return self.value.exact if self.value.exact is not None else self.value.lo
        return Fraction(self.value)

    def to_json(self):
        value = self.value.to_json() if isinstance(self.value, LogBound) else _num_json(self.value)
        doc = {"quantity": self.quantity, "relation": self.relation, "value": value,
               "text": self.text, "citation": self.citation, "assumptions": list(self.assumptions)}
        if self.note:
            doc["note"] = self.note
        return doc


@dataclass(frozen=True)
class BoundsInput:
    """Known parameters; every field is optional.

    ``r`` is the p-rank of the field at hand, or of k when ``trdeg`` is also
    given.  ``t`` is a known sl bound one level down (H_{p^{m-1}}), ``trdeg`` is a
    transcendence degree, ``cr`` is the index r of a C~_{p,r} field and ``deg``
    is the exponent of the degree p^deg of a p-algebra.
    """

    p: int | None = None
    m: int | None = None
    n: int | None = None
    ell: int | None = None
    r: int | None = None
    t: int | None = None
    trdeg: int | None = None
    s: int | None = None
    u: int | None = None
    sl: int | None = None
    cr: int | None = None
    deg: int | None = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
                raise PreconditionFailed(f"{f.name} must be an integer, got {v!r}")
            if v < 0:
                raise PreconditionFailed(f"{f.name} must be nonnegative, got {v}")
        if self.p is not None and not isprime(self.p):
            raise PreconditionFailed(f"p must be prime, got {self.p}")
        for name in ("m", "n"):
            if getattr(self, name) == 0:
                raise PreconditionFailed(f"{name} must be positive")

    @classmethod
    def from_mapping(cls, data):
        aliases = {"l": "ell", "ℓ": "ell"}
        known = {f.name for f in fields(cls)}
        kw = {}
        for key, value in data.items():
            name = aliases.get(key, key)
            if name not in known:
                raise PreconditionFailed(f"unknown bounds parameter {key!r}")
            if isinstance(value, str):
                try:
                    value = Fraction(value.strip())
                except ValueError as exc:
                    raise PreconditionFailed(f"{key} must be a number, got {value!r}") from exc
            if isinstance(value, float):
                value = Fraction(value)
            if isinstance(value, Fraction) and value.denominator == 1:
                value = int(value)
            kw[name] = value
        return cls(**kw)

    def as_dict(self):
        return {k: _num_json(v) for k, v in asdict(self).items() if v is not None}


@dataclass
class BoundsReport:
    input: BoundsInput
    entries: list = field(default_factory=list)  # tightest per (quantity, relation)
    all_entries: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (citation, reason)

    def best(self, quantity, relation):
        for e in self.entries:
            if (e.quantity, e.relation) == (quantity, relation):
                return e
        return None

    def texts(self):
        return [e.text for e in self.entries]

    def to_json(self):
        return {
            "input": self.input.as_dict(),
            "bounds": [e.to_json() for e in self.entries],
            "all": [e.to_json() for e in self.all_entries],
            "skipped": [{"citation": c, "reason": r} for c, r in self.skipped],
        }


def _tighter(a: BoundEntry, b: BoundEntry) -> bool:
    """True if a is strictly tighter than b (same quantity and relation)."""
    if a.relation == "<=":
        return a.sort_value() < b.sort_value()
    if a.relation == ">=":
        return a.sort_value() > b.sort_value()
    return False


def _merge_assumptions(*groups):
    out = []
    for g in groups:
        for a in g:
            if a not in out:
                out.append(a)
    return tuple(out)


def best_bounds(inp: BoundsInput) -> BoundsReport:
    """Evaluate every applicable formula on ``inp`` and keep the tightest per quantity."""
    rep = BoundsReport(inp)
    p, m, n, ell, r = inp.p, inp.m, inp.n, inp.ell, inp.r

    def add(quantity, relation, value, citation, assumptions, note=""):
        rep.all_entries.append(BoundEntry(quantity, relation, value, citation, tuple(assumptions), note))

    def attempt(citation, fn):
        try:
            fn()
        except KMError as exc:
            rep.skipped.append((citation, str(exc)))

    # with trdeg given, r is the p-rank of k and the binomial applies to r + trdeg
    if r is not None and n is not None and inp.trdeg is None:
        attempt("p-rank binomial", lambda: add(
            "sl", "<=", sl_upper_prank(r, n), "p-rank binomial", [CHAR_P, PRANK_F]))
    if r is not None and inp.trdeg is not None:
        def _fg():
            rank = prank_fg_extension(r, inp.trdeg)
            add("rank_p", "=", rank, "finitely generated p-rank", [CHAR_P, PRANK_K, FG_EXTENSION])
            if n is not None:
                add("sl", "<=", sl_upper_prank(rank, n), "p-rank binomial <- finitely generated p-rank",
                    [CHAR_P, PRANK_K, FG_EXTENSION], note=f"applied with rank_p = {rank}")
        attempt("finitely generated p-rank", _fg)
    if inp.t is not None and inp.s is not None:
        attempt("tower step", lambda: add(
            "sl", "<=", sl_upper_step(inp.t, inp.s), "tower step", [CHAR_P]))
    if inp.s is not None and m is not None:
        attempt("tower", lambda: add("sl", "<=", sl_upper_tower(inp.s, m), "tower", [CHAR_P]))
    if inp.u is not None and n is not None and m is not None:
        if p not in (None, 2):
            rep.skipped.append(("u-invariant", f"needs p = 2, got p = {p}"))
        else:
            attempt("u-invariant", lambda: add(
                "sl", "<=", sl_upper_u(inp.u, n, m), "u-invariant", [P_IS_2, CHAR_P, U_FINITE]))
    if inp.cr is not None and p is not None and m is not None and n in (None, 1):
        attempt("C~_{p,r} field", lambda: add(
            "sl", "<=", sl_upper_cpr(p, inp.cr, m), "C~_{p,r} field", [CHAR_P, CPR_FIELD]))
    if inp.deg is not None and p is not None and m == 1 and n in (None, 1):
        attempt("degree bound for exponent p", lambda: add(
            "sl", "<=", p ** inp.deg - 1, "degree bound for exponent p", [CHAR_P, EXPONENT_P],
            note=f"A of degree {p}^{inp.deg}"))

    # lower bounds on ed_Br from a known symbol length
    if inp.sl is not None and r is not None:
        attempt("sl descent", lambda: add(
            "ed_Br", ">=", ed_lower_from_sl(inp.sl, r), "sl descent", [CHAR_P, PRANK_K]))
    if inp.sl is not None and m is not None:
        def _sand():
            lo, hi = ed_sandwich(inp.sl, m)
            add("ed_Br", ">=", lo, "sl-ed sandwich", [CHAR_P, INFINITE_PERFECT])
            add("ed_Br", "<=", hi, "sl-ed sandwich", [CHAR_P, INFINITE_PERFECT])
        attempt("sl-ed sandwich", _sand)
    if inp.deg is not None and p is not None and m is not None:
        attempt("degree-exponent", lambda: add(
            "ed_Br", "<=", ed_upper_deg_exp(p, inp.deg, m), "degree-exponent", [CHAR_P, INFINITE_PERFECT],
            note=f"A of degree {p}^{inp.deg} and exponent {p}^{m}"))
    if inp.sl is not None and p is not None and m is not None:
        attempt("C_r standard case", lambda: add(
            "ed_Br_std", ">=", ed_lower_cr(p, m, inp.sl), "C_r standard case", [STANDARD_CASE]))
    elif ell is not None and p is not None and m is not None:
        attempt("C_r standard case", lambda: add(
            "ed_Alg_std", ">=", ed_lower_cr(p, m, None, ell=ell), "C_r standard case (indecomposable sl = l+1)",
            [STANDARD_CASE], note=f"bound for ed(Alg_{{p^{ell * m},p^{m}}})"))

    # essential p-dimension of Alg_{p^{lm}, p^m}
    alg_ell, ell_note = ell, ""
    if alg_ell is None and inp.deg is not None and m is not None:
        alg_ell = ell_from_degree(inp.deg, m)
        ell_note = f"l = floor({inp.deg}/{m}) = {alg_ell} for Alg_{{p^{inp.deg},p^{m}}}"
    if alg_ell is not None:
        def _alg():
            rr = 0 if r is None else r
            assumptions = [CHAR_P, ELL_GE_2] + ([PERFECT] if r is None or r == 0 else [PRANK_K])
            citation = "indecomposable algebras"
            if alg_is_baek_case(p, alg_ell, m):
                citation += " [Baek special case]"
                assumptions.append(BAEK_CASE)
            note = "; ".join(x for x in (ell_note, "r = 0 assumed" if r is None else "") if x)
            add("ed_p", ">=", ed_p_lower_alg(alg_ell, rr), citation, assumptions, note)
        attempt("indecomposable algebras", _alg)
    if ell is not None and n is not None:
        attempt("generic sum", lambda: add(
            "ed_p_H", ">=", ed_p_lower_generic(ell, n), "generic sum", [CHAR_P, ALG_CLOSED]))
    if ell is not None and n is not None and m is not None:
        attempt("sum of symbols descent", lambda: add(
            "ed_H", "<=", ed_upper_symbols(m, ell, n), "sum of symbols descent", [CHAR_P, BIG_K]))

    # derived: the best sl upper bound feeds the sandwich's upper end
    sl_up = [e for e in rep.all_entries if (e.quantity, e.relation) == ("sl", "<=")]
    if sl_up and m is not None and inp.sl is None and n in (None, 1):
        best = min(sl_up, key=BoundEntry.sort_value)
        add("ed_Br", "<=", ed_sandwich(int(best.value), m)[1], f"sl-ed sandwich <- {best.citation}",
            _merge_assumptions(best.assumptions, [INFINITE_PERFECT]),
            note=f"applied with sl ≤ {_num_str(best.value)}")

    chosen = {}
    for e in rep.all_entries:
        key = (e.quantity, e.relation)
        if key not in chosen or _tighter(e, chosen[key]):
            chosen[key] = e
    rep.entries = list(chosen.values())
    return rep
