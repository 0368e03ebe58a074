import numpy as np
import pytest

from p2dyn.errors import BudgetExceeded, InvalidLift
from p2dyn.polyalg import HPoly
from p2dyn.projgeom import fs_distance, normalize_point
from p2dyn.ratmap import (
    RationalMap, as_test, compose_maps, indeterminacy_set, iterate_symbolic, parse_map, reduce_lift, same_map,
)

x, y, z = (HPoly.var(i) for i in range(3))


def test_reduce_cancels_common_factor():
    f = parse_map("[x^2*z : x*y*z : z^3]")
    assert f.to_text() == "[x^2 : x*y : z^2]"
    assert f.cofactor == z
    assert f.reduced_on_input
    assert any("common factor z" in n for n in f.notices)


def test_reduce_leaves_coprime_lift():
    F = (y * z, x * z, x * y)
    R, g = reduce_lift(F)
    assert R == F and g == HPoly.one()


def test_from_lift_rejects_mixed_degrees():
    with pytest.raises(InvalidLift):
        RationalMap.from_lift([x, y * y, z])


def test_compose_agrees_pointwise(rng):
    f = parse_map("[y*z : y^2 + z^2 - x*z : z^2]")
    g = parse_map("[x^2 + i*y*z : y^2 : x*z - z^2]")
    h = compose_maps(f, g)
    W = rng.normal(size=(50, 3)) + 1j * rng.normal(size=(50, 3))
    direct = f(g(W))
    for a, b in zip(direct, h(W)):
        assert fs_distance(a, b) < 1e-10


def test_cremona_square_is_identity():
    f = parse_map("[y*z : z*x : x*y]")
    f2 = iterate_symbolic(f, 2)
    assert f2.lift == (x, y, z)
    assert f2.cofactor == x * y * z


def test_same_map_up_to_scalar():
    assert same_map(parse_map("[2*x : 2*y : 2*z]"), parse_map("[i*x : i*y : i*z]"))
    assert not same_map(parse_map("[x : y : z]"), parse_map("[x : y : 2*z]"))


def test_as_test_degrees():
    assert as_test(parse_map("[x^2 : y^2 : z^2]"), 4).degrees == [2, 4, 8, 16]
    rep = as_test(parse_map("[y*z : z*x : x*y]"), 6)
    assert rep.degrees == [2, 1, 2, 1, 2, 1]
    assert (rep.verdict, rep.witness) == ("NotAS", 2)
    assert rep.label == "NotAS (witness n=2)"


def test_budget_overrun_reports_partial():
    f = parse_map("[x^3 : y^3 : z^3 + x*y*z]")
    with pytest.raises(BudgetExceeded) as err:
        as_test(f, 5, budget=30)
    assert err.value.partial.degrees == [3, 9, 27]
    assert err.value.partial.verdict == "AS"


def test_dominance():
    assert parse_map("[y*z : z*x : x*y]").dominant
    f = parse_map("[x^2 : x*y : y^2]")
    assert not f.dominant
    assert any("not dominant" in n for n in f.notices)


def test_jacobian_of_cremona():
    assert parse_map("[y*z : z*x : x*y]").jacobian == 2 * x * y * z


# indeterminacy ------------------------------------------------------------


def _texts(points):
    return sorted(p.to_text() for p in points)


def test_cremona_indeterminacy_exact():
    pts = indeterminacy_set(parse_map("[y*z : z*x : x*y]"))
    assert _texts(pts) == ["[0:0:1]", "[0:1:0]", "[1:0:0]"]
    assert all(p.exact and p.residual == 0 for p in pts)


def test_holomorphic_map_has_no_indeterminacy():
    assert indeterminacy_set(parse_map("[x^2 : y^2 : z^2]")) == []
    assert indeterminacy_set(parse_map("[x^2 + y*z : y^2 : z^2 - x*y]")) == []


def test_henon_indeterminacy():
    pts = indeterminacy_set(parse_map("[y*z : y^2 + z^2 - x*z : z^2]"))
    assert _texts(pts) == ["[1:0:0]"]


def test_numeric_points_are_certified():
    f = parse_map("[y^2*z : x^3 - y^3 : z^3 + x*y*z]")
    pts = indeterminacy_set(f)
    assert len(pts) == 3
    expected = [normalize_point([1, np.exp(2j * np.pi * k / 3), 0]) for k in range(3)]
    for e in expected:
        assert min(fs_distance(e, p.point) for p in pts) < 1e-10
    assert all(p.residual < 1e-10 for p in pts)


def test_rational_points_off_the_axes():
    # lines a = x - y, b = 3x - z, c = 2x - y, d = x + y - 2z; the lift
    # [a c : a d : b (c + d)] vanishes at a=b=0, a=c+d=0 and c=d=0
    a = x - y
    b = 3 * x - z
    c = 2 * x - y
    d = x + y - 2 * z
    f = RationalMap.from_lift([a * c, a * d, b * (c + d)])
    pts = indeterminacy_set(f)
    assert len(pts) == 3
    for e in ([1, 1, 3], [2, 2, 3], [2, 4, 3]):
        assert min(fs_distance(normalize_point(e), p.point) for p in pts) < 1e-14
    assert "[1/2:1:3/4]" in _texts(pts)
    assert all(p.exact and p.residual < 1e-15 for p in pts)
