import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodalcurve.eigenmodel import CurveSpec, HorocycleWave, PolarWave, add_waves, intro_family, random_wave
from nodalcurve.errors import AllZero, ArgumentOutOfRange, KindMismatch
from nodalcurve.restriction import (CircleFunction, annulus_sup, dump_circle_function, l2_norm_parseval,
                                    l2_norm_quadrature, load_circle_function, partial_sum, restrict)

from oracles import c_tau_mp


def k_unnormalized(tau, x):
    with mp.workdps(30):
        return float(mp.besselk(1j * tau, x).real)


def test_zero_wave_restricts_to_empty():
    cf = restrict(HorocycleWave(2.0, {}), CurveSpec.horocycle(1.0))
    assert cf.coeffs == {} and cf.band == 0
    assert l2_norm_quadrature(HorocycleWave(2.0, {}), CurveSpec.horocycle(1.0)) == 0.0


def test_ex1_on_horocycle():
    cf = restrict(intro_family("EX1", tau=5.0), CurveSpec.horocycle(1.0))
    k = k_unnormalized(5.0, 2 * math.pi)
    assert set(cf.coeffs) == {-1, 1}
    assert cf.coeffs[1].real == pytest.approx(0.5 * k, rel=1e-12)
    assert l2_norm_quadrature(intro_family("EX1", tau=5.0), CurveSpec.horocycle(1.0)) == \
        pytest.approx(abs(k) / math.sqrt(2), rel=1e-8)


def test_polar_wave_on_circle():
    w = PolarWave(10.0, {2: 0.5, -2: 0.5}, real=True)
    cf = restrict(w, CurveSpec.geodesic_circle(1.0))
    assert cf.coeffs[2].real == pytest.approx(0.5 * c_tau_mp(10.0, 2, math.cosh(1.0)), rel=1e-10)


def test_constant_terms_enter_as_a0():
    w = HorocycleWave(3.0, {1: 0.2, -1: 0.2}, alpha_const=1.0, beta_const=0.5, real=True)
    y0 = 1.7
    a0 = restrict(w, CurveSpec.horocycle(y0)).coeffs[0]
    expect = y0 ** complex(0.5, 3.0) + 0.5 * y0 ** complex(0.5, -3.0)
    assert a0 == pytest.approx(expect, rel=1e-13)


def test_norm_examples():
    assert l2_norm_parseval(CircleFunction({0: 3.0})) == 3.0
    assert l2_norm_parseval(CircleFunction({1: 0.5, -1: 0.5})) == pytest.approx(math.sqrt(0.5))


def test_quadrature_converged_under_doubling():
    w = random_wave(20.0, 2.5, seed=2)
    c = CurveSpec.horocycle(0.8)
    a = l2_norm_quadrature(w, c, n_nodes=16 * 50)
    b = l2_norm_quadrature(w, c, n_nodes=32 * 50)
    assert abs(a - b) <= 1e-10 * b


@settings(max_examples=8, deadline=None)
@given(st.floats(2, 20), st.integers(0, 10_000), st.floats(0.3, 2.5), st.booleans())
def test_parseval_property(tau, seed, where, polar):
    band_c = min(2.0, 50 / tau)
    if polar:
        w, c = random_wave(tau, band_c, seed, kind="polar"), CurveSpec.geodesic_circle(where)
    else:
        w, c = random_wave(tau, band_c, seed), CurveSpec.horocycle(where)
    a, b = l2_norm_parseval(restrict(w, c)), l2_norm_quadrature(w, c)
    assert abs(a - b) <= 1e-6 * b


def test_restriction_is_linear():
    a, b = random_wave(7.0, 2.0, seed=1), random_wave(7.0, 2.0, seed=2)
    c = CurveSpec.horocycle(1.1)
    s = restrict(add_waves(a, b), c).coeffs
    ra, rb = restrict(a, c).coeffs, restrict(b, c).coeffs
    for n in set(s) | set(ra) | set(rb):
        assert abs(s.get(n, 0) - ra.get(n, 0) - rb.get(n, 0)) <= 1e-12


def test_reality_flag_and_conjugate_symmetry():
    cf = restrict(random_wave(9.0, 2.0, seed=5), CurveSpec.horocycle(1.0))
    assert cf.real
    for n, c in cf.coeffs.items():
        assert cf.coeffs[-n] == pytest.approx(c.conjugate(), abs=1e-15)


def test_kind_mismatch():
    with pytest.raises(KindMismatch):
        restrict(PolarWave(3.0, {0: 1.0}), CurveSpec.horocycle(1.0))
    with pytest.raises(KindMismatch):
        restrict(HorocycleWave(3.0, {1: 1.0}), CurveSpec.geodesic_circle(1.0))


def test_segment_alias_control():
    w = intro_family("EX2", n=5)
    seg = CurveSpec.segment(0.0, 1.0, 1.0, 2.0)
    coarse = restrict(w, seg, n_samples=256)
    fine = restrict(w, seg, n_samples=512)
    assert not coarse.periodic
    for n, c in coarse.coeffs.items():
        if abs(n) <= coarse.band // 2:
            assert abs(c - fine.coeffs.get(n, 0)) <= 1e-8 * max(1.0, l2_norm_parseval(fine))


def test_partial_sum_examples():
    assert partial_sum({}, 3.0) == 0.0
    assert partial_sum({1: 1.0, -1: 1.0}, 1.0) == 0.0
    w = random_wave(20.0, 2.0, seed=7)
    for X in (10, 40, 100):
        assert partial_sum(w, X) <= 2 * X + 20


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(-30, 30), st.complex_numbers(max_magnitude=5, allow_nan=False), min_size=1))
def test_partial_sum_monotone_and_limit(coeffs):
    cf = CircleFunction(coeffs)
    xs = np.linspace(0.1, 40, 30)
    vals = [partial_sum(cf, X) for X in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert partial_sum(cf, 1e6) == pytest.approx(l2_norm_parseval(cf) ** 2, rel=1e-12, abs=1e-300)


def test_annulus_sup_examples():
    assert annulus_sup(CircleFunction({0: 1.0}), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert annulus_sup(CircleFunction({7: 1.0}), 0.3) == pytest.approx(7 * 0.3, rel=1e-12)
    cf = restrict(random_wave(20.0, 2.0, seed=3), CurveSpec.horocycle(1.0))
    assert annulus_sup(cf, 0.5) <= 3 * 20 * 0.5 + math.log(4 * 20 * 20) + 1
    with pytest.raises(AllZero):
        annulus_sup(CircleFunction({}), 0.5)
    with pytest.raises(ArgumentOutOfRange):
        annulus_sup(CircleFunction({0: 1.0}), 0.7)


def test_annulus_sup_nondecreasing():
    cf = restrict(random_wave(10.0, 2.0, seed=8), CurveSpec.horocycle(1.0))
    vals = [annulus_sup(cf, e) for e in np.linspace(0.05, 0.5, 10)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_circle_function_round_trip_and_eval():
    cf = CircleFunction({-2: 1 - 1j, 0: 0.5, 3: 2j}, source_tau=4.0, real=False)
    assert load_circle_function(dump_circle_function(cf)) == cf
    th = np.linspace(0, 2 * math.pi, 8, endpoint=False)
    direct = sum(c * np.exp(1j * n * th) for n, c in cf.coeffs.items())
    assert np.allclose(cf.on_circle(8), direct, atol=1e-14)
    assert np.allclose(cf.evaluate(np.exp(1j * th)), direct, atol=1e-14)
