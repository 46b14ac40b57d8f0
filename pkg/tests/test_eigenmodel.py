import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodalcurve.eigenmodel import (BandWave, CurveSpec, HorocycleWave, PolarWave, add_waves, dump_wave,
                                   eval_band_wave, eval_horocycle_wave, eval_polar_wave, eval_wave_halfplane,
                                   find_bessel_zero_taus, geodesic_coords, geodesic_coords_inverse,
                                   intro_family, laplace_residual, load_wave, polar_coords, random_wave,
                                   scale_wave, wave_band)
from nodalcurve.errors import ArgumentOutOfRange, IntegrationRange, KindMismatch
from nodalcurve.restriction import partial_sum
from nodalcurve.specfun import abs_gamma_half, k_bessel_oracle

from oracles import k_tilde_mp


def bound(w, value, h=1e-3):
    return 1e-4 * (0.25 + w.tau ** 2) * max(abs(value), 1e-6) + 10 * h * h


def test_ex1_matches_unnormalized_bessel():
    w = intro_family("EX1", tau=5.0)
    x, y = 0.1, 1.0
    expect = math.sqrt(y) * k_tilde_mp(5.0, 2 * math.pi * y) * float(abs_gamma_half(5.0)) * math.cos(2 * math.pi * x)
    assert eval_horocycle_wave(w, x, y).real == pytest.approx(expect, rel=1e-12)
    assert w.k_normalization == pytest.approx(float(abs_gamma_half(5.0)))


def test_ex1_residual_example():
    w = intro_family("EX1", tau=5.0)
    val = eval_horocycle_wave(w, 0.1, 1.0)
    assert laplace_residual(w, (0.1, 1.0), 1e-3) <= bound(w, val)


def test_polar_m0_residual_example():
    w = PolarWave(10.0, {0: 1.0}, real=True)
    val = eval_polar_wave(w, 1.0, 0.3)
    assert laplace_residual(w, (1.0, 0.3), 1e-3) <= bound(w, val)


def test_zero_wave_residual():
    w = HorocycleWave(3.0, {})
    assert laplace_residual(w, (0.2, 1.0)) == 0.0


def test_constant_terms_solve_the_equation():
    w = HorocycleWave(4.0, {2: 0.3, -2: 0.3}, alpha_const=1.0, beta_const=-0.5, real=True)
    val = eval_horocycle_wave(w, 0.4, 0.8)
    assert laplace_residual(w, (0.4, 0.8)) <= bound(w, val)


def test_band_wave_odd_solution_and_residual():
    w = BandWave(6.0, {0: 1.0, 2: 0.5j, -2: -0.5j}, period=1.5, boundary_data={2: (0j, 1 + 0j)})
    for r in (-1.5, 0.0, 0.7, 2.0):
        val = eval_band_wave(w, r, 0.3)
        assert laplace_residual(w, (r, 0.3)) <= bound(w, val)
    with pytest.raises(IntegrationRange):
        eval_band_wave(w, 50.0, 0.0)


def test_band_wave_boundary_data():
    w = BandWave(3.0, {1: 1.0}, period=2 * math.pi, boundary_data={1: (0.25 + 0j, 0j)})
    assert eval_band_wave(w, 0.0, 0.0) == pytest.approx(0.25)


def test_periodicity():
    w = random_wave(6.0, 2.0, seed=4)
    xs = np.linspace(0, 1, 7)
    assert np.allclose(eval_horocycle_wave(w, xs, 0.9), eval_horocycle_wave(w, xs + w.period, 0.9), rtol=0, atol=1e-12)
    p = random_wave(6.0, 2.0, seed=4, kind="polar")
    th = np.linspace(0, 2 * math.pi, 7)
    assert np.allclose(eval_polar_wave(p, 1.3, th), eval_polar_wave(p, 1.3, th + 2 * math.pi), rtol=0, atol=1e-12)


def test_random_wave_partial_sum_contract():
    for seed in range(5):
        for profile in ("FLAT", "EXP_TAIL"):
            w = random_wave(12.0, 3.0, seed=seed, profile=profile)
            for X in np.linspace(0.5, 80, 60):
                assert partial_sum(w, X) <= 2 * X + w.tau + 1e-12


def test_random_wave_is_deterministic_and_real():
    a, b = random_wave(9.0, 2.0, seed=17), random_wave(9.0, 2.0, seed=17)
    assert a == b
    vals = eval_horocycle_wave(a, np.linspace(0, 1, 11), 0.7)
    assert np.max(np.abs(vals.imag)) < 1e-14 * np.max(np.abs(vals))
    assert wave_band(a) == 17


def test_geodesic_coords_round_trip():
    xs, ys = np.meshgrid(np.linspace(-3, 3, 10), np.linspace(0.1, 4, 10))
    r, th = geodesic_coords(xs, ys)
    x2, y2 = geodesic_coords_inverse(r, th)
    assert np.max(np.abs(x2 - xs)) < 1e-12 and np.max(np.abs(y2 - ys)) < 1e-12


def test_polar_coords_distance_from_i():
    x, y = 0.7, 2.3
    r, _ = polar_coords(x, y)
    d = math.acosh(1 + (x * x + (y - 1) ** 2) / (2 * y))
    assert r == pytest.approx(d, rel=1e-13)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.5, 15), st.integers(1, 6), st.floats(0.05, 0.95), st.floats(0.3, 2.5))
def test_horocycle_residual_property(tau, n, x, y):
    w = HorocycleWave(tau, {n: 1.0, -n: 1.0}, real=True)
    val = eval_horocycle_wave(w, x, y)
    assert laplace_residual(w, (x, y)) <= bound(w, val)


def test_halfplane_evaluation_of_polar_wave_is_consistent():
    w = random_wave(5.0, 2.0, seed=3, kind="polar")
    r, th = polar_coords(0.3, 1.4)
    assert eval_wave_halfplane(w, 0.3, 1.4) == pytest.approx(eval_polar_wave(w, r, th), rel=1e-12)


def test_scale_and_add():
    w = random_wave(5.0, 2.0, seed=1)
    two = add_waves(w, w)
    assert eval_horocycle_wave(two, 0.2, 1.0) == pytest.approx(eval_horocycle_wave(scale_wave(w, 2.0), 0.2, 1.0))
    with pytest.raises(KindMismatch):
        add_waves(w, random_wave(6.0, 2.0, seed=1))


@pytest.mark.parametrize("w", [
    intro_family("EX2", n=4),
    HorocycleWave(3.0, {1: 0.5 + 0.25j}, period=2.0, alpha_const=1j),
    PolarWave(7.0, {0: 1.0, 3: -2.0}),
    BandWave(2.0, {1: 1.0, -1: 1.0}, period=3.0, boundary_data={1: (0j, 1 + 0j)}),
])
def test_dump_load_round_trip(w):
    assert load_wave(dump_wave(w)) == w


def test_load_rejects_garbage():
    with pytest.raises(ArgumentOutOfRange):
        load_wave("kind horocycle\ncoeffs\n1 x y\n")


def test_curve_validation():
    with pytest.raises(ArgumentOutOfRange):
        CurveSpec.horocycle(-1.0)
    with pytest.raises(ArgumentOutOfRange):
        CurveSpec.segment(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(ArgumentOutOfRange):
        CurveSpec.segment(0.0, 1.0, 1.0, -1.0)


def test_bessel_zero_taus():
    zeros = find_bessel_zero_taus(2 * math.pi, 2 * math.pi, 12)
    assert zeros and zeros[0] == pytest.approx(9.76877008350997786, abs=1e-9)
    assert find_bessel_zero_taus(2 * math.pi, 0.1, 1.0) == []
    assert abs(k_bessel_oracle(zeros[0], 2 * math.pi).real) < 1e-12
