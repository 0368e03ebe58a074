from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import GENS, from_sympy, same_up_to_scalar, sympy_gcd, sympy_resultant, to_sympy
from strategies import gauss, hpoly
from p2dyn.errors import InvalidLift
from p2dyn.polyalg import (
    GaussRat, HPoly, I, ONE, ZERO, hp_compose, hp_divexact, hp_divmod, hp_gcd, hp_gcd_many, jacobian_det,
    resultant_eliminate,
)
from p2dyn.polyalg.gcd import _dehomogenize, _homogenize, _interpolated_gcd, b_gcd, gcd_degree_bound
from p2dyn.ratmap import iterate_symbolic, parse_map
from p2dyn.ratmap.parse import parse_polynomial

x, y, z = (HPoly.var(i) for i in range(3))


# Gaussian rationals -------------------------------------------------------


def test_gaussrat_normal_form():
    assert GaussRat(Fraction(2, 4), Fraction(1, 2)) == GaussRat(Fraction(1, 2), Fraction(1, 2))
    c = GaussRat(Fraction(-3, 6), 1)
    assert (c.a, c.b, c.den) == (-1, 2, 2)
    assert I * I == GaussRat(-1)


@given(gauss(), gauss(), gauss())
def test_gaussrat_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))


@given(gauss())
def test_gaussrat_text_round_trip(a):
    assert parse_polynomial(a.to_text()).coeff((0, 0, 0)) == a


def test_gaussrat_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


# homogeneous polynomials -------------------------------------------------


def test_homogeneity_enforced():
    with pytest.raises(InvalidLift):
        HPoly([((1, 0, 0), 1), ((0, 0, 0), 1)])
    with pytest.raises(InvalidLift):
        x + x * y


def test_zero_polynomial():
    assert HPoly.zero().degree is None
    assert (x - x).is_zero()
    assert (x * HPoly.zero()).is_zero()


def test_canonical_text():
    p = parse_polynomial("3*x^2 - (1/2+i)*y*z + z^2*i")
    assert p.to_text() == "3*x^2 + (-1/2-i)*y*z + i*z^2"
    assert parse_polynomial(p.to_text()) == p


@settings(max_examples=150)
@given(hpoly(), hpoly())
def test_mul_matches_sympy(p, q):
    assert p * q == from_sympy(to_sympy(p) * to_sympy(q))


@settings(max_examples=60)
@given(hpoly(max_degree=2, max_terms=3), st.integers(1, 2).flatmap(
    lambda d: st.tuples(*[hpoly(degree=d, max_terms=3) for _ in range(3)])))
def test_compose_matches_sympy(p, F):
    expected = to_sympy(p).subs({GENS[0]: to_sympy(F[0]), GENS[1]: to_sympy(F[1]), GENS[2]: to_sympy(F[2])},
                                simultaneous=True)
    assert hp_compose(p, F) == from_sympy(expected)


@given(hpoly(nonzero=True), hpoly(nonzero=True))
def test_divexact_inverts_mul(p, q):
    assert hp_divexact(p * q, q) == p


def test_divmod_reports_remainder():
    q, r = hp_divmod(x * x + y * z, x)
    assert q == x and r == y * z
    with pytest.raises(ArithmeticError):
        hp_divexact(x * x + y * z, x)


def test_jacobian_matches_sympy():
    F = [parse_polynomial(t) for t in ("y*z", "y^2 + z^2 - x*z", "z^2")]
    M = sp.Matrix([[sp.diff(to_sympy(f), g) for g in GENS] for f in F])
    assert jacobian_det(F) == from_sympy(M.det())


# gcd ---------------------------------------------------------------------


def test_gcd_simple():
    p = (x + y) * (x - 2 * z) * z
    q = (x + y) * (y + I * z) * z
    assert hp_gcd(p, q) == ((x + y) * z).monic()
    assert hp_gcd(x, y) == HPoly.one()
    assert hp_gcd_many([x * y, y * z, z * x]) == HPoly.one()


@settings(max_examples=80)
@given(hpoly(max_degree=2, nonzero=True), hpoly(max_degree=2, nonzero=True), hpoly(max_degree=2, nonzero=True))
def test_gcd_matches_sympy(a, b, c):
    p, q = a * b, a * c
    g = hp_gcd(p, q)
    assert same_up_to_scalar(g, sympy_gcd(p, q))
    assert hp_divmod(p, g)[1].is_zero() and hp_divmod(q, g)[1].is_zero()


@settings(max_examples=80)
@given(hpoly(max_degree=3, nonzero=True), hpoly(max_degree=2, nonzero=True), hpoly(max_degree=2, nonzero=True))
def test_gcd_paths_agree(a, b, c):
    # the line-interpolation path and the pseudo-remainder path must give the same gcd
    p, q = a * b, a * c
    assume(p.monomial_content() == (0, 0, 0) and q.monomial_content() == (0, 0, 0))
    k = gcd_degree_bound(p, q)
    assume(k)
    g = _interpolated_gcd(p, q, k)
    assume(g is not None)
    prs = _homogenize(b_gcd(_dehomogenize(p), _dehomogenize(q)))
    assert g.monic() == prs.monic() == sympy_gcd(p, q).monic()


def test_gcd_of_degree_sixteen_iterates():
    # a pseudo-remainder sequence on these takes minutes
    f = parse_map("[(9/2-2*i)*x^2 + (-1/4-7/4*i)*y*z : (8/3+2*i)*x*y + (-7/4-i)*z^2 : (1/3+7/2*i)*x*z + (-1-6*i)*y*z]")
    F = [hp_compose(p, f.lift) for p in iterate_symbolic(f, 3).lift]
    g = hp_gcd_many(F)
    assert all(hp_divmod(p, g)[1].is_zero() for p in F)
    assert iterate_symbolic(f, 4).degree == 16 - g.degree


# resultants --------------------------------------------------------------


@settings(max_examples=60)
@given(hpoly(max_degree=3, nonzero=True), hpoly(max_degree=3, nonzero=True), st.integers(0, 2))
def test_resultant_matches_sympy(p, q, var):
    if p.deg_in(var) == 0 and q.deg_in(var) == 0:
        return
    ours = resultant_eliminate(p, q, var)
    assert ours == sympy_resultant(p, q, var)


def test_resultant_sign_low_degree_first():
    p = x + y + z
    q = x ** 3 + y ** 2 * z + y * z ** 2 + z ** 3
    # lc(p)^3 * q(-y - z, y, z)
    assert resultant_eliminate(p, q, 0) == -(y ** 3) - 2 * y ** 2 * z - 2 * y * z ** 2


def test_resultant_detects_common_root():
    p = (x - y) * (x + z)
    q = (x - y) * (x - 3 * z)
    assert resultant_eliminate(p, q, 0).is_zero()
