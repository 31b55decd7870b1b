import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from sympy.polys.fields import field as sympy_field

from kmsymbols.arith import FieldSpec, Poly, RatFunc, render_ratfunc

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@st.composite
def polys(draw, spec, max_terms=4, max_deg=3, nonzero=False):
    r = spec.r
    exps = st.tuples(*[st.integers(0, max_deg)] * r) if r else st.just(())
    terms = draw(st.dictionaries(exps, st.integers(1, spec.p - 1), max_size=max_terms))
    f = Poly(spec.p, r, terms)
    if nonzero and f.is_zero():
        f = Poly.one(spec.p, r)
    return f


@st.composite
def ratfuncs(draw, spec, nonzero=False, max_terms=3, max_deg=3):
    num = draw(polys(spec, max_terms, max_deg, nonzero=nonzero))
    den = draw(polys(spec, max_terms, max_deg, nonzero=True))
    return RatFunc(spec, num, den)


class SympyOracle:
    """F_p(x_1..x_r) as implemented by sympy, fed with rendered strings."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        names = ",".join(spec.variables) if spec.variables else "_t"
        K, *_ = sympy_field(names, sympy.GF(spec.p))
        self.K = K
        self.symbols = {v: sympy.Symbol(v) for v in spec.variables}

    @staticmethod
    def same(u, v):
        # sympy leaves constant denominators unnormalized over GF(p), so compare u - v with 0
        return (u - v).numer == 0

    def __call__(self, a):
        text = a if isinstance(a, str) else render_ratfunc(a)
        return self.K.from_expr(sympy.sympify(text.replace("^", "**"), locals=self.symbols))


ACCEPTANCE = {}  # criterion number -> (ok, detail), filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
