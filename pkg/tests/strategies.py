"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from topvertex.qcoeff import GaussRat, KSeries, QRat, make_mono

small_fraction = st.fractions(min_value=-4, max_value=4, max_denominator=3)
half_exponent = st.integers(-6, 6).map(lambda n: Fraction(n, 2))


@st.composite
def laurent(draw, max_terms=3, gaussian=False):
    out = QRat.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        re = draw(small_fraction)
        im = draw(small_fraction) if gaussian else 0
        out = out + QRat.monomial(draw(half_exponent), GaussRat(re, im))
    return out


@st.composite
def qrats(draw, gaussian=False):
    num = draw(laurent(gaussian=gaussian))
    den = draw(laurent())
    if den.is_zero():
        den = QRat.one()
    return num / den


@st.composite
def kseries(draw, names=("Q", "P"), bound=Fraction(3, 2)):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exps = {n: Fraction(draw(st.integers(0, 2)), 2) for n in names}
        xi = draw(st.integers(-1, 1))
        terms[(xi, make_mono(exps))] = draw(qrats())
    return KSeries(terms, bound)
