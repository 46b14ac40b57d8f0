import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodalcurve.errors import ArgumentOutOfRange, DivergentTail, PoleProximity, TruncationInsufficient
from nodalcurve.mellin import (AfeConfig, afe_split, afe_two_sided_check, gamma_factor, gamma_growth_scan,
                               l_series, log_gamma_factor, psi_decay_constant, psi_test, psi_test_complex)

PSI_3_TAU_5 = 0.717954234229539


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
def test_psi_independent_of_contour(sigma):
    v = psi_test_complex(3.0, 5.0, AfeConfig(sigma=sigma))[0]
    assert v.real == pytest.approx(PSI_3_TAU_5, rel=1e-8)
    assert abs(v.imag) <= 1e-10


def test_psi_vectorized_and_real():
    xs = np.array([0.5, 1.0, 2.0, 7.0])
    vals = psi_test(xs, 4.0)
    assert vals.shape == xs.shape
    assert vals[2] == pytest.approx(psi_test(2.0, 4.0), rel=1e-13)
    assert np.max(np.abs(psi_test_complex(xs, 4.0).imag)) <= 1e-10
    with pytest.raises(ArgumentOutOfRange):
        psi_test(0.0, 4.0)


def test_gamma_factor_closed_form_at_two():
    for tau in (0.5, 3.0, 12.0):
        assert gamma_factor(2.0, tau).value == pytest.approx(tau / (math.pi * math.tanh(math.pi * tau)), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.9, 4), st.floats(-40, 40), st.floats(0.1, 30))
def test_gamma_factor_conjugate_symmetry(sigma, t, tau):
    s = complex(sigma, t)
    try:
        a = gamma_factor(s, tau).value
    except PoleProximity:
        return
    assert gamma_factor(s.conjugate(), tau).value == pytest.approx(a.conjugate(), rel=1e-10, abs=1e-300)
    assert complex(log_gamma_factor(s, tau)) == gamma_factor(s, tau).log_value


def test_pole_proximity():
    for s in (0.0, -2.0, complex(0, 10.0), complex(-2, -10.0), -1.0):
        with pytest.raises(PoleProximity):
            gamma_factor(s + 1e-10, 5.0)
    gamma_factor(-2.0 + 1e-6, 5.0)


def test_l_series_forms_and_linearity():
    s = np.array([1.5 + 2j, 2.0, 0.3 - 1j])
    a, b = [1.0, 0.0, -2.0], {2: 0.5, 5: 3.0}
    la, lb = l_series(s, a), l_series(s, b)
    both = l_series(s, {1: 2.0, 3: -4.0, 2: -0.5, 5: -3.0})
    assert np.allclose(both, 2 * la - lb, rtol=1e-14, atol=1e-14)
    assert l_series(2.0, [1.0, 1.0]) == pytest.approx(1.25)
    assert l_series(2.0, []) == 0
    zeta2 = l_series(2.0, lambda n: 1.0, cutoff=100_000)
    assert zeta2.real == pytest.approx(math.pi ** 2 / 6, abs=2e-5)


def test_l_series_rejects_divergent_profiles():
    with pytest.raises(DivergentTail):
        l_series(1.0, lambda n: 1.0, cutoff=10)
    with pytest.raises(ArgumentOutOfRange):
        l_series(2.0, lambda n: 1.0)
    with pytest.raises(ArgumentOutOfRange):
        l_series(2.0, {0: 1.0})


def test_gamma_growth_scan():
    tau = 5.0
    ts = range(1, 61)
    right = gamma_growth_scan(2.0, tau, ts)
    assert max(v for _, v in right) <= 100 * tau
    left = [v for _, v in gamma_growth_scan(0.5, tau, ts)]
    assert max(left) <= 10 and left[-1] < left[len(left) // 2]
    with pytest.raises(ArgumentOutOfRange):
        gamma_growth_scan(-3.0, tau, ts)


def test_afe_single_coefficient_example():
    rep = afe_two_sided_check([1.0], 2.0, 5.0)
    assert rep.rel_diff <= 1e-6
    assert rep.lhs == pytest.approx(psi_test(0.5, 5.0), rel=1e-13)
    assert set(rep.as_dict()) == {"X", "tau", "sigma", "m_exp", "lhs", "rhs", "rel_diff"}


@settings(max_examples=6, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=30), st.floats(1, 40), st.floats(1, 12))
def test_afe_sides_agree(profile, X, tau):
    assert afe_two_sided_check(profile, X, tau).rel_diff <= 1e-6


def test_afe_on_shifted_line():
    assert afe_two_sided_check([1.0, 0.5], 2.0, 5.0, AfeConfig(sigma=2.0)).rel_diff <= 1e-6


def test_afe_empty_profile():
    assert afe_two_sided_check([], 3.0, 5.0).rel_diff == 0.0
    assert afe_split({}, 3.0, 5.0, 2.0) == (0.0, 0.0, 0.0)


def test_afe_split_sums_to_total():
    rng = np.random.default_rng(1)
    prof = rng.uniform(0, 1, 60)
    total = afe_two_sided_check(prof, 12.0, 6.0).lhs
    parts = afe_split(prof, 12.0, 6.0, 2.0)
    assert sum(parts) == pytest.approx(total, rel=1e-12)
    with pytest.raises(ArgumentOutOfRange):
        afe_split(prof, 12.0, 6.0, 1.0)


def test_decay_constant_bounds_psi():
    tau = 5.0
    for sigma in (0.5, 1.0):
        cfg = AfeConfig(sigma=sigma)
        c = psi_decay_constant(tau, cfg)
        xs = np.array([1.5, 2.0, 5.0, 20.0, 100.0])
        vals = np.abs(psi_test(xs, tau, cfg)) * xs ** sigma * np.log(xs) ** 2
        assert np.all(vals <= c)


def test_truncation_guard():
    with pytest.raises(TruncationInsufficient):
        psi_test(3.0, 5.0, AfeConfig(t_max=1.0))


def test_large_damping_exponent_guard():
    with pytest.raises(ArgumentOutOfRange):
        psi_test(3.0, 5.0, AfeConfig(m_exp=2, sigma=1.2))


def test_config_validation():
    for kw in ({"m_exp": 0}, {"m_exp": 1.5}, {"sigma": -2.5}, {"sigma": 0.0}, {"t_max": -1.0}, {"quad_step": 0.0}):
        with pytest.raises(ArgumentOutOfRange):
            AfeConfig(**kw)
