from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ultraislands.algebra import Poly, RatFunc
from ultraislands.field import FieldConfig, RamifiedScalar

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.large_base_example],
)
settings.load_profile("default")

K3 = FieldConfig(3, 1)
K33 = FieldConfig(3, 3)
K5 = FieldConfig(5, 1)
FIELDS = [K3, K33, K5, FieldConfig(3, 2), FieldConfig(7, 1)]


@pytest.fixture
def K():
    return K3


def small_rational(max_num=30, max_den_pow=3, p=3):
    """Rationals with small numerators and p-power or small denominators."""
    return st.builds(
        lambda n, e, d: Fraction(n, p ** e * d),
        st.integers(-max_num, max_num),
        st.integers(0, max_den_pow),
        st.sampled_from([1, 1, 1, 2]),
    )


@st.composite
def scalars(draw, field, nonzero=False):
    coeffs = [draw(small_rational(p=field.p)) for _ in range(field.M)]
    x = RamifiedScalar(field, coeffs)
    if nonzero and x.is_zero():
        x = field.one
    return x


@st.composite
def polys(draw, field, min_deg=0, max_deg=4, nonzero=True):
    deg = draw(st.integers(min_deg, max_deg))
    cs = [draw(scalars(field)) for _ in range(deg + 1)]
    if nonzero and all(c.is_zero() for c in cs):
        cs[-1] = field.one
    return Poly(field, cs)


@st.composite
def ratfuncs(draw, field, max_deg=3, nonconstant=True):
    while True:
        g = draw(polys(field, 0, max_deg))
        h = draw(polys(field, 0, max_deg))
        f = RatFunc(g, h)
        if not nonconstant or not f.is_constant():
            return f


@st.composite
def lattice_q(draw, field, lo=-4, hi=4):
    k = draw(st.integers(lo * field.M, hi * field.M))
    return Fraction(k, field.M)


fields = st.sampled_from(FIELDS)


# filled by test_acceptance and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
