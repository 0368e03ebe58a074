"""Hypothesis strategies for exact polynomials and maps."""

from fractions import Fraction

from hypothesis import strategies as st

from p2dyn.polyalg import GaussRat, HPoly

small_fraction = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


@st.composite
def gauss(draw, allow_imag=True):
    re = draw(small_fraction)
    im = draw(small_fraction) if allow_imag and draw(st.booleans()) else Fraction(0)
    return GaussRat(re, im)


def exps_of_degree(d):
    return [(a, b, d - a - b) for a in range(d + 1) for b in range(d + 1 - a)]


@st.composite
def hpoly(draw, degree=None, max_degree=3, max_terms=4, nonzero=False):
    d = draw(st.integers(0, max_degree)) if degree is None else degree
    pool = exps_of_degree(d)
    k = draw(st.integers(1 if nonzero else 0, min(max_terms, len(pool))))
    chosen = draw(st.lists(st.sampled_from(pool), min_size=k, max_size=k, unique=True))
    coeffs = draw(st.lists(gauss().filter(lambda c: not c.is_zero()), min_size=k, max_size=k))
    return HPoly(list(zip(chosen, coeffs)))


@st.composite
def lift(draw, max_degree=2, max_terms=3):
    d = draw(st.integers(1, max_degree))
    comps = [draw(hpoly(degree=d, max_terms=max_terms, nonzero=True)) for _ in range(3)]
    return tuple(comps)
