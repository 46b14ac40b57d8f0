import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nodalcurve.eigenmodel import CurveSpec, find_bessel_zero_taus, intro_family, random_wave, scale_wave
from nodalcurve.errors import AllZero, ArgumentOutOfRange, Unresolved, ZeroRestriction
from nodalcurve.restriction import CircleFunction, restrict
from nodalcurve.zeros import (SWEEP_COLUMNS, count_sign_changes, count_zeros_annulus, goodness_certificate,
                              jensen_cover, jensen_zero_bound, zero_sweep)

from oracles import root_counts, trig_corpus


def cos_k(k):
    return CircleFunction({k: 0.5, -k: 0.5}, real=True)


@pytest.mark.parametrize("k", [1, 5, 12])
def test_cosine_counts(k):
    assert count_sign_changes(cos_k(k)) == 2 * k
    assert count_zeros_annulus(cos_k(k), 0.5) == 2 * k


def test_cos_plus_half():
    cf = CircleFunction({0: 0.5, 1: 0.5, -1: 0.5}, real=True)
    assert count_sign_changes(cf) == 2


def test_degree_12_seed_3_against_roots():
    rng = np.random.default_rng(3)
    coeffs = {0: complex(rng.normal())}
    for n in range(1, 13):
        c = complex(rng.normal(), rng.normal())
        coeffs[n], coeffs[-n] = c, c.conjugate()
    cf = CircleFunction(coeffs, real=True)
    on, inside = root_counts(cf)
    assert count_sign_changes(cf) == on
    assert count_zeros_annulus(cf, 0.5) == inside


def test_explicit_annulus_examples():
    assert count_zeros_annulus(CircleFunction({2: 1.0, 0: -1.0}), 0.5) == 2
    assert count_zeros_annulus(CircleFunction({6: 1.0}), 0.5) == 0
    with pytest.raises(AllZero):
        count_zeros_annulus(CircleFunction({}), 0.5)


def test_tangential_zero_is_flagged():
    # 1 + cos x touches zero at x = pi
    cf = CircleFunction({0: 1.0, 1: 0.5, -1: 0.5}, real=True)
    with pytest.raises(Unresolved):
        count_sign_changes(cf)


def test_sign_changes_need_real_data():
    with pytest.raises(ArgumentOutOfRange):
        count_sign_changes(CircleFunction({1: 1.0}))


def test_corpus_exact_and_sound():
    for cf in trig_corpus(count=40, seed=11):
        on, inside = root_counts(cf)
        n = count_zeros_annulus(cf, 0.5)
        assert n == inside
        assert count_sign_changes(cf) == on
        assert jensen_zero_bound(cf, 0.5) >= n


real_trig = st.integers(1, 25).flatmap(lambda d: st.lists(
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=d, max_size=d).map(
        lambda cs: {**{n + 1: complex(a, b) for n, (a, b) in enumerate(cs)},
                    **{-(n + 1): complex(a, -b) for n, (a, b) in enumerate(cs)}}))


@settings(max_examples=25, deadline=None)
@given(real_trig, st.floats(0.1, 10), st.floats(0, 2 * math.pi))
def test_counts_invariant_under_scaling_rotation_and_conjugation(coeffs, scale, shift):
    cf = CircleFunction(coeffs, real=True)
    if max((abs(c) for c in cf.coeffs.values()), default=0.0) < 1e-3:
        return
    try:
        base = count_zeros_annulus(cf, 0.5)
        sign = count_sign_changes(cf)
    except (Unresolved, ArgumentOutOfRange):
        return
    rotated = CircleFunction({n: c * np.exp(1j * n * shift) for n, c in cf.coeffs.items()}, real=True)
    assert count_zeros_annulus(cf.scaled(scale), 0.5) == base
    assert count_zeros_annulus(cf.conjugate(), 0.5) == base
    assert count_zeros_annulus(rotated, 0.5) == base
    assert count_sign_changes(cf.scaled(-scale)) == sign
    assert jensen_zero_bound(cf, 0.5) >= base
    assert jensen_zero_bound(cf.scaled(scale), 0.5) == pytest.approx(jensen_zero_bound(cf, 0.5), rel=1e-9)


def test_grid_refinement_stability():
    cf = trig_corpus(count=1, seed=5)[0]
    base = count_sign_changes(cf)
    assert count_sign_changes(cf, initial_grid=8 * cf.band * 8) == base


def test_jensen_cover_geometry():
    cover = jensen_cover(0.5)
    assert cover.n_disks == 13
    assert cover.cover_radius == pytest.approx(math.sqrt(2) * math.expm1(0.25))
    with pytest.raises(ArgumentOutOfRange):
        jensen_cover(0.9)


@pytest.mark.parametrize("k,limit", [(1, 140), (5, 300), (20, 900)])
def test_jensen_bound_linear_in_degree(k, limit):
    assert 2 * k <= jensen_zero_bound(cos_k(k), 0.5) <= limit


def test_certificate_scale_invariant():
    w = random_wave(10.0, 2.0, seed=3)
    c = CurveSpec.horocycle(1.0)
    a = goodness_certificate(w, c)
    b = goodness_certificate(scale_wave(w, -7.5), c)
    assert b.bound == pytest.approx(a.bound, rel=1e-9)
    assert b.norm == pytest.approx(7.5 * a.norm, rel=1e-12)
    assert a.bound >= count_zeros_annulus(restrict(w, c), 0.5)


def test_certificate_degenerate_at_bessel_zero():
    tau = find_bessel_zero_taus(2 * math.pi, 9.5, 10.0)[0]
    with pytest.raises(ZeroRestriction):
        goodness_certificate(intro_family("EX1", tau=tau), CurveSpec.horocycle(1.0))


def test_sweep_ex2_horocycle_and_order():
    rows = zero_sweep("EX2", CurveSpec.horocycle(1.0), [16, 8, 32], threads=3)
    assert [r.param for r in rows] == [16, 8, 32]
    assert [r.exact_count for r in rows] == [32, 16, 64]
    assert all(r.status == "ok" for r in rows)
    assert tuple(rows[0].as_dict()) == SWEEP_COLUMNS


def test_sweep_empty_and_errors_recorded():
    assert zero_sweep("EX2", CurveSpec.horocycle(1.0), []) == []
    rows = zero_sweep("RANDOM", CurveSpec.horocycle(1.0), [-1.0, 0.0, 6.0])
    assert [r.status for r in rows] == ["ArgumentOutOfRange", "ArgumentOutOfRange", "ok"]
    assert math.isnan(rows[0].exact_count)


def test_sweep_is_deterministic():
    c = CurveSpec.horocycle(1.0)
    a = zero_sweep("RANDOM", c, [10, 15], seed=4, threads=2)
    b = zero_sweep("RANDOM", c, [10, 15], seed=4)
    assert a == b
