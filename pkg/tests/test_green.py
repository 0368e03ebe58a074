import numpy as np
import pytest

from oracles import squaring_green
from p2dyn.corpus import get
from p2dyn.errors import DegreeTooSmall, NotAS
from p2dyn.green import (
    DIVERGED, NEAR_IND, OK, GreenField, as_depth, calibrate_tau, curve_charge_estimate, curve_distance, green_potential,
    laplacian_mask, laplacian_response, read_grid, read_pgm, require_as, v_field, write_field, write_mask,
    write_pgm,
)
from p2dyn.polyalg import HPoly
from p2dyn.projgeom import Slice
from p2dyn.ratmap import parse_map

SQ = get("squaring").load()


def test_green_potential_closed_form():
    for p in ([2, 1, 1], [1, 1j, 0.3], [0.2, 0.1, 1]):
        v, status = green_potential(SQ, p, 30)
        assert status == "OK"
        assert v == pytest.approx(float(squaring_green(np.array(p, dtype=complex))), abs=1e-9)


def test_v_field_matches_closed_form_off_switching_locus():
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (33, 33))
    g = v_field(SQ, s, 25)
    assert g.ok.all()
    exact = squaring_green(s.grid())
    # pixels whose moduli are tied converge slowly; skip a margin around ties
    A = np.abs(s.grid())
    top2 = np.sort(A, axis=-1)[..., -2:]
    far = (top2[..., 1] - top2[..., 0]) > 0.05
    assert np.max(np.abs(g.v - exact)[far]) < 1e-6


def test_non_as_maps_refused():
    with pytest.raises(NotAS):
        v_field(get("cremona").load(), Slice.chart_slice("z", resolution=(4, 4)), 10)
    with pytest.raises(DegreeTooSmall):
        require_as(parse_map("[x : 2*y : z]"))


def test_as_depth():
    assert as_depth(2) == 4
    assert as_depth(3) == 3
    assert as_depth(9) == 1


def test_statuses_for_dying_orbits():
    henon = get("henon").load()
    s = Slice.chart_slice("y", (-1, 1, -1, 1), (5, 5))
    g = v_field(henon, s, 20)
    assert set(np.unique(g.status)) <= {OK, NEAR_IND, DIVERGED}
    # [x : 0 : z] maps to [0 : z^2 - x z : z^2]; the centre [0:1:0] is fixed and fine
    assert g.status[2, 2] == OK


def test_laplacian_response_of_kink():
    s = Slice.chart_slice("z", (-1, 1, -1, 1), (21, 21))
    U, _ = np.meshgrid(s.u_values(), s.v_values())
    v = 0.5 * np.abs(U - 0.025)  # unit slope jump between columns
    g = GreenField(s, v, np.zeros(v.shape, np.int8), np.zeros(v.shape, int), np.zeros(v.shape), 1, 2)
    q = laplacian_response(g)
    col = np.argmax(q[10])
    assert q[10, col] == pytest.approx(0.75, abs=1e-9)
    assert np.sort(q[10])[-2] == pytest.approx(0.25, abs=1e-9)
    assert np.max(np.abs(q[:, :9])) < 1e-12  # linear away from the kink


def test_mask_marks_bad_pixels():
    s = Slice.chart_slice("z", (-1, 1, -1, 1), (9, 9))
    g = v_field(SQ, s, 10)
    g.status[4, 4] = NEAR_IND
    m = laplacian_mask(g, 0.5)
    assert m.mask[4, 4]


def test_calibrated_tau_scales_with_pitch():
    # inside a Fatou region the response is the smooth curvature term, O(h)
    taus = []
    for n in (64, 128):
        g = v_field(SQ, Slice.chart_slice("z", (-2, 2, -2, 2), (n, n)), 20)
        k = n // 8
        taus.append(calibrate_tau(g, (slice(3 * k, 5 * k), slice(3 * k, 5 * k))))
    assert taus[1] / taus[0] == pytest.approx(63 / 127, rel=0.1)


def test_curve_distance_linear():
    s = Slice.chart_slice("z", (-1, 1, -1, 1), (5, 5))
    x, y = HPoly.var(0), HPoly.var(1)
    d = curve_distance(x - y, s)
    U, V = np.meshgrid(s.u_values(), s.v_values())
    assert np.allclose(d, np.abs(U - V) / np.sqrt(2))


def test_charge_masses_shrink():
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (64, 64))
    x, y = HPoly.var(0), HPoly.var(1)
    rep = curve_charge_estimate(SQ, x - y, s, [0.4, 0.2, 0.1, 0.05], N=20)
    assert rep.monotone
    assert rep.pixels == sorted(rep.pixels, reverse=True)
    far = curve_charge_estimate(SQ, x - y + 50 * HPoly.var(2), s, [0.1], N=20)
    assert far.notes == ["curve does not meet the slice window"]


def test_grid_and_pgm_round_trip(tmp_path):
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (7, 5))
    g = v_field(SQ, s, 12)
    write_field(tmp_path / "v.grid", g)
    vals, spec, meta = read_grid(tmp_path / "v.grid")
    assert np.array_equal(vals, g.v)
    assert spec == s.spec() and meta["N"] == 12
    m = laplacian_mask(g)
    write_mask(tmp_path / "m.grid", m)
    assert np.array_equal(read_grid(tmp_path / "m.grid")[0].astype(bool), m.mask)
    arr = np.array([[0.0, 1.0, np.nan], [2.0, 10.0, 3.0]])
    write_pgm(tmp_path / "a.pgm", arr)
    img = read_pgm(tmp_path / "a.pgm")
    assert img.shape == (2, 3)
    assert img[0, 2] == 0  # NaN -> 0
    assert img[1, 1] == 255 and img[0, 0] == 1


def test_workers_do_not_change_field():
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (40, 37))
    a = v_field(SQ, s, 15, workers=1)
    b = v_field(SQ, s, 15, workers=4)
    assert np.array_equal(a.v, b.v) and np.array_equal(a.status, b.status)


def test_green_potential_examples():
    assert green_potential(SQ, [1, 0, 0], 20)[0] == pytest.approx(0.0, abs=1e-9)
    assert green_potential(SQ, [1, 1, 1], 20)[0] == pytest.approx(-np.log(np.sqrt(3)), abs=1e-6)
    assert green_potential(SQ, [2, 1, 1], 20)[0] == pytest.approx(np.log(2) - np.log(np.sqrt(6)), abs=1e-6)


def test_green_potential_projective(rng):
    for _ in range(20):
        w = rng.normal(size=3) + 1j * rng.normal(size=3)
        v = green_potential(SQ, w, 15)[0]
        assert green_potential(SQ, 8.0 * w, 15)[0] == v  # exact under power-of-two scaling
        lam = complex(*rng.normal(size=2)) * 7
        assert green_potential(SQ, lam * w, 15)[0] == pytest.approx(v, abs=1e-14)


def test_tail_bound_holds_per_pixel():
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (32, 32))
    henon = get("henon").load()
    for f in (SQ, henon):
        a, b = v_field(f, s, 12), v_field(f, s, 17)
        ok = a.ok & b.ok
        # rigorous with the step logs observed over all 17 steps
        w = float(f.degree) ** -np.arange(13.0, 18.0)
        assert np.all(np.abs(a.v - b.v)[ok] <= w.sum() * b.max_log[ok] + 1e-14)
        # the forecast from the first 12 steps is close
        assert np.all(np.abs(a.v - b.v)[ok] <= 1.1 * a.tail_bound(5)[ok])


def test_mask_monotone_in_tau():
    g = v_field(SQ, Slice.chart_slice("z", (-2, 2, -2, 2), (48, 48)), 20)
    masks = [laplacian_mask(g, t).mask for t in (0.1, 0.3, 0.5, 1.0)]
    for big, small in zip(masks, masks[1:]):
        assert np.all(small <= big)


def test_constant_field_has_empty_mask():
    s = Slice.chart_slice("z", (-1, 1, -1, 1), (9, 9))
    g = GreenField(s, np.full((9, 9), 0.7), np.zeros((9, 9), np.int8), np.zeros((9, 9), int),
                   np.zeros((9, 9)), 5, 2)
    assert not laplacian_mask(g, 1e-9).mask.any()


def test_henon_near_origin_is_ok():
    g = v_field(get("henon").load(), Slice.chart_slice("z", (-0.5, 0.5, -0.5, 0.5), (16, 16)), 20)
    assert g.ok.all() and np.isfinite(g.v).all()


def test_charge_for_curve_missing_chart():
    s = Slice.chart_slice("z", (-2, 2, -2, 2), (16, 16))
    rep = curve_charge_estimate(SQ, HPoly.var(2), s, [0.2, 0.1], N=10)
    assert rep.masses == [0.0, 0.0]
    assert rep.notes == ["curve does not meet the slice window"]
