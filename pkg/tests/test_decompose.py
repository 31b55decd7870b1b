import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmsymbols.arith import FieldSpec
from kmsymbols.decompose import (
    CanonicalForm, common_slot_m1, common_slot_teich, decompose, multilinear_expand, strip_pth_power,
)
from kmsymbols.errors import KMError, ZeroInput
from kmsymbols.km import ClassExpr, symbol, verify_derivation
from kmsymbols.sampling import random_class
from kmsymbols.witt import WittVector, scalar_mul

F2 = FieldSpec(2, ("x", "y"))
F3 = FieldSpec(3, ("x", "y"))
F2xyz = FieldSpec(2, ("x", "y", "z"))


def W(spec, *coords):
    return WittVector.field(spec, list(coords))


def one_term(spec, witt, slots):
    return ClassExpr.of(symbol(spec, witt, slots))


class TestExamples:
    def test_common_slot_example(self):
        cf, tr = decompose(one_term(F2, ["x"], ["x+y"]))
        assert cf.coeffs == {(1,): W(F2, "x^2/(x+y)"), (2,): W(F2, "x*y/(x+y)")}
        assert verify_derivation(tr)

    def test_repeated_slot(self):
        G = FieldSpec(3, ("x", "y"))
        cf, tr = decompose(one_term(G, ["y+1"], ["x", "x"]))
        assert len(cf) == 0 and verify_derivation(tr)

    def test_already_canonical(self):
        pi = one_term(F2, ["x/(y+1)"], ["x"])
        cf, tr = decompose(pi)
        assert cf.coeffs == {(1,): W(F2, "x/(y+1)")}
        assert tr.steps == ()

    def test_swapped_slots(self):
        cf, tr = decompose(one_term(F3, ["x+1"], ["y", "x"]))
        assert cf.coeffs == {(1, 2): W(F3, "-x-1")}
        assert verify_derivation(tr)

    def test_rational_slot(self):
        cf, tr = decompose(one_term(F3, ["y"], ["1/x"]))
        assert cf.coeffs == {(1,): W(F3, "-y")}
        assert verify_derivation(tr)

    def test_fewer_variables_than_slots(self):
        G = FieldSpec(2, ("x",))
        cf, tr = decompose(one_term(G, ["x"], ["x+1", "x"]))
        assert len(cf) == 0 and verify_derivation(tr)

    def test_level_two_teichmuller(self):
        cf, tr = decompose(one_term(F2, ["x", 0], ["x+y"]))
        assert verify_derivation(tr)
        assert set(cf.coeffs) <= {(1,), (2,)}
        assert cf.coeffs[(1,)].coords[0] == F2.parse("x^2/(x+y)")
        assert cf.coeffs[(2,)].coords[0] == F2.parse("x*y/(x+y)")


class TestPhases:
    def test_common_slot_m1(self):
        terms, tr = common_slot_m1(F2.parse("x"), F2.parse("x+y").num)
        got = {t.slots[0]: t.witt.coords[0] for t in terms}
        assert got == {F2.var("x"): F2.parse("x^2/(x+y)"), F2.var("y"): F2.parse("x*y/(x+y)")}
        assert sum(got.values(), F2.zero()) == F2.var("x")
        assert verify_derivation(tr)

    def test_common_slot_single_beta(self):
        terms, tr = common_slot_m1(F2.parse("y+1"), F2.var("x").num)
        assert [(t.witt, t.slots) for t in terms] == [(W(F2, "y+1"), (F2.var("x"),))]

    def test_common_slot_a_equals_f(self):
        terms, tr = common_slot_m1(F2.parse("x+y"), F2.parse("x+y").num)
        assert terms == [] and tr.steps[0][0].kind == "SlotMatch"
        assert verify_derivation(tr)

    def test_common_slot_zero(self):
        with pytest.raises(ZeroInput):
            common_slot_m1(F2.var("x"), F2.zero().num)

    def test_teich_single_beta_no_carry(self):
        teich, carry, tr = common_slot_teich(F2.parse("y+1"), F2.var("x").num, m=2)
        assert len(teich) == 1 and carry.is_zero_expr()
        assert teich[0].witt == W(F2, "y+1", 0)

    def test_teich_carry(self):
        a = F2.var("x")
        teich, carry, tr = common_slot_teich(a, F2.parse("x+y").num, m=2)
        assert verify_derivation(tr)
        assert carry.m == 1
        cs = [t.witt.coords[0] for t in teich]
        assert set(cs) == {F2.parse("x^2/(x+y)"), F2.parse("x*y/(x+y)")}
        assert all(t.witt.coords[1].is_zero() for t in teich)
        # V(delta) = [a] - [c1] - [c2] has first coordinate 0
        diff = W(F2, a, 0)
        for c in cs:
            diff = diff - W(F2, c, 0)
        assert diff.coords[0].is_zero()

    def test_strip_level_one(self):
        out, tr = strip_pth_power(symbol(F2, ["y+1"], ["x^2*y"]), 0)
        assert out.same_terms(one_term(F2, ["y+1"], ["y"]))
        assert verify_derivation(tr)

    def test_strip_level_two(self):
        out, tr = strip_pth_power(symbol(F2, ["y", "x+1"], ["x^2"]), 0)
        assert out.same_terms(one_term(F2, [0, "y^2"], ["x"]))
        assert verify_derivation(tr)

    def test_strip_h_one(self):
        term = symbol(F2, ["y", "x"], ["x"])
        out, tr = strip_pth_power(term, 0)
        assert out.same_terms(ClassExpr.of(term)) and tr.steps == ()

    def test_multilinear_product(self):
        cf, tr = multilinear_expand(symbol(F3, ["x+y"], ["x*y"]))
        assert cf.coeffs == {(1,): W(F3, "x+y"), (2,): W(F3, "x+y")}

    def test_multilinear_square(self):
        cf, tr = multilinear_expand(symbol(F3, ["y"], ["x^2"]))
        assert cf.coeffs == {(1,): W(F3, "2*y")}
        assert verify_derivation(tr)

    def test_multilinear_alternating(self):
        cf, tr = multilinear_expand(symbol(F3, ["x"], ["y", "x"]))
        assert cf.coeffs == {(1, 2): W(F3, "-x")}
        assert verify_derivation(tr)

    def test_multilinear_rejects_sums(self):
        with pytest.raises(KMError):
            multilinear_expand(symbol(F3, ["x"], ["x+y"]))


class TestCanonicalForm:
    def test_rejects_bad_keys(self):
        with pytest.raises(KMError):
            CanonicalForm(F2, 1, 2, {(2, 1): W(F2, "x")})
        with pytest.raises(KMError):
            CanonicalForm(F2, 1, 1, {(3,): W(F2, "x")})
        with pytest.raises(KMError):
            CanonicalForm(F2, 1, 1, {(1,): W(F2, 0)})

    def test_json_roundtrip(self):
        cf, _ = decompose(one_term(F2, ["x"], ["x+y"]))
        assert CanonicalForm.from_json(cf.as_json(), F2, 1, 1) == cf


def sampled(seed, spec=F2xyz, m=None, n=None, terms=3):
    rng = random.Random(seed)
    m = m or rng.randint(1, 2)
    n = n or rng.randint(1, 2)
    return random_class(spec, m, n, rng, max_terms=terms, degree=2)


def coeff_sum(spec, m, a, b):
    out = dict(a)
    for k, w in b.items():
        out[k] = out[k] + w if k in out else w
    return {k: w for k, w in out.items() if not w.is_zero()}


class TestProperties:
    @settings(max_examples=15)
    @given(st.integers(0, 10 ** 6))
    def test_sound_and_small(self, seed):
        pi = sampled(seed)
        cf, tr = decompose(pi)
        assert verify_derivation(tr)
        assert len(cf) <= comb(pi.spec.r, pi.n)
        assert tr.final.same_terms(cf.to_class_expr())

    @settings(max_examples=15)
    @given(st.integers(0, 10 ** 6))
    def test_additive_at_level_one(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 2)
        p1 = random_class(F2xyz, 1, n, rng, max_terms=2, degree=2)
        p2 = random_class(F2xyz, 1, n, rng, max_terms=2, degree=2)
        c1, _ = decompose(p1)
        c2, _ = decompose(p2)
        c12, _ = decompose(p1 + p2)
        assert c12.coeffs == coeff_sum(F2xyz, 1, c1.coeffs, c2.coeffs)

    @settings(max_examples=10)
    @given(st.integers(0, 10 ** 6))
    def test_idempotent(self, seed):
        cf, _ = decompose(sampled(seed))
        again, tr = decompose(cf.to_class_expr())
        assert again == cf
        assert tr.steps == () or all(mv.kind == "WittAdd" for mv, _ in tr.steps)

    def test_deterministic(self):
        pi = sampled(7, terms=4)
        a, ta = decompose(pi)
        b, tb = decompose(pi)
        assert a == b and ta.steps == tb.steps

    @settings(max_examples=10)
    @given(st.integers(0, 10 ** 6))
    def test_step_count_bound(self, seed):
        # each phase consumes slot degree or Witt length, so the trace stays
        # polynomial in (terms, slot degree, pbasis pieces); a loose explicit cap
        pi = sampled(seed, terms=2)
        _, tr = decompose(pi)
        deg = sum(b.num.degree() + b.den.degree() + 1 for t in pi.terms for b in t.slots)
        assert len(tr.steps) <= 40 * pi.m ** 2 * (deg + 1) * len(pi.terms) + 50

    def test_level_one_p3(self):
        pi = one_term(F3, ["x/(y+1)"], ["x^2+y"])
        cf, tr = decompose(pi)
        assert verify_derivation(tr) and len(cf) <= 2

    def test_p_multiple(self):
        w = W(F2, "x", "y")
        pi = one_term(F2, [w.coords[0], w.coords[1]], ["x+y"])
        cf, tr = decompose(ClassExpr.of(symbol(F2, scalar_mul(2, w).coords, ["x+y"])))
        assert verify_derivation(tr)
        assert all(c.coords[0].is_zero() for c in cf.coeffs.values())
