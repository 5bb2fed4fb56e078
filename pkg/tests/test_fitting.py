import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stiffgas import eos
from stiffgas.data import synthesize
from stiffgas.eos import SgParams, StatePoint
from stiffgas.errors import DegenerateWindowError, DomainError, InvalidFitError, StiffGasError
from stiffgas.fitting import (FitWindow, NormalizationStats, ScaledCoefficients, descale,
                              fit_energy_model, fit_pressure, fit_temperature, fit_window,
                              fit_windows, normalize, params_from_ABC, relative_error)

from conftest import CELL_FIRST, CELL_HIGH_P, CELL_LAST, IDEAL, energy_noise, rel, synthetic_window


def pts_from(e, p, v, T=None):
    T = T if T is not None else [300.0 + k for k in range(len(e))]
    return [StatePoint(T=t, p=pp, v=vv, e=ee) for t, pp, vv, ee in zip(T, p, v, e)]


class TestNormalize:
    def test_two_point_population_std(self):
        _, rhs, stats = normalize(pts_from([1.0, 3.0], [1e7, 2e7], [1e-3, 2e-3]))
        assert stats.mean_e == 2.0 and stats.std_e == 1.0
        np.testing.assert_array_equal(rhs, [-1.0, 1.0])

    def test_centering(self, rng):
        pts = pts_from(rng.uniform(1e5, 2e6, 40), rng.uniform(2.5e7, 3e8, 40), rng.uniform(9e-4, 1.2e-3, 40))
        design, rhs, stats = normalize(pts)
        p_s = (np.array([pt.p for pt in pts]) - stats.mean_p) / stats.std_p
        assert abs(rhs.mean()) <= 1e-12
        assert abs(p_s.mean()) <= 1e-12
        np.testing.assert_allclose(design[:, 1].mean(), 1.0, rtol=1e-12)
        np.testing.assert_array_equal(design[:, 2], 1.0)

    def test_zero_variance(self):
        with pytest.raises(DegenerateWindowError, match="internal energy"):
            normalize(pts_from([1.0, 1.0], [1e7, 2e7], [1e-3, 2e-3]))
        with pytest.raises(DegenerateWindowError, match="pressure"):
            normalize(pts_from([1.0, 2.0], [1e7, 1e7], [1e-3, 2e-3]))


class TestDescale:
    def test_identity_stats(self):
        c = ScaledCoefficients(0.3, -1.2, 4.0)
        assert descale(c, NormalizationStats(0.0, 1.0, 0.0, 1.0, 1.0)) == (0.3, -1.2, 4.0)

    def test_zero_a(self):
        stats = NormalizationStats(5.0, 2.0, 7.0, 3.0, 4.0)
        A, B, C = descale(ScaledCoefficients(0.0, 1.5, 0.5), stats)
        assert A == 0.0 and B == 2.0 * 1.5 / 4.0 and C == 5.0 + 2.0 * 0.5

    def test_ideal_gas_composition(self):
        A, B, C = fit_energy_model(synthetic_window(IDEAL).points)
        assert A == pytest.approx(2.5, rel=1e-9)
        assert abs(B) <= 1e-9 * abs(A) * 3e7 and abs(C) <= 1e-9 * 1e6


class TestParamsFromABC:
    def test_ideal(self):
        assert params_from_ABC(2.5, 0.0, 0.0) == (1.4, 0.0, 0.0)

    def test_gamma_round_trip(self):
        A = 1.0 / (1.2424 - 1.0)
        gamma, _, _ = params_from_ABC(A, 0.0, 0.0)
        assert gamma == pytest.approx(1.2424, rel=1e-12)

    def test_large_a_limit(self):
        gamma, p_inf, _ = params_from_ABC(1e12, 5e9, 0.0)
        assert 1.0 < gamma < 1.0 + 1e-11
        assert p_inf == pytest.approx(5e9 / (1e12 + 1), rel=1e-15)

    def test_back_map_matches_two_forms(self):
        A, B = 4.1, 3.3e10
        gamma, p_inf, _ = params_from_ABC(A, B, 0.0)
        assert p_inf == pytest.approx((gamma - 1) * B / gamma, rel=1e-14)

    @pytest.mark.parametrize("A", [0.0, -1.0])
    def test_non_positive_a(self, A):
        with pytest.raises(InvalidFitError):
            params_from_ABC(A, 1.0, 1.0)


class TestFitPressure:
    def test_recovers_high_pressure_cell(self):
        gamma, q, p_inf = fit_pressure(synthetic_window(CELL_HIGH_P, p_lo=275e6))
        assert rel(gamma, CELL_HIGH_P.gamma) <= 1e-8
        assert rel(q, CELL_HIGH_P.q) <= 1e-8
        assert rel(p_inf, CELL_HIGH_P.p_inf) <= 1e-8

    def test_ideal_gas(self):
        w = synthetic_window(IDEAL)
        _, _, stats = normalize(w.points)
        gamma, q, p_inf = fit_pressure(w)
        assert gamma == pytest.approx(1.4, rel=1e-9)
        assert abs(q) <= 1e-6 * stats.std_e
        assert abs(p_inf) <= 1e-6 * stats.std_p

    def test_alternative_scaling_gives_same_fit(self):
        pts = energy_noise(synthetic_window(CELL_LAST, p_lo=275e6, T_lo=600.0), 0.01, seed=3).points
        pop = fit_energy_model(pts, ddof=0)
        sample = fit_energy_model(pts, ddof=1)
        np.testing.assert_allclose(sample, pop, rtol=1e-9)

    def test_degenerate_window(self):
        ds = synthesize(CELL_FIRST, [3e7], [300.0 + k for k in range(10)])
        w = FitWindow(25e6, 50e6, 300.0, 325.0, ds.points)
        assert w.is_degenerate
        with pytest.raises(DegenerateWindowError, match="distinct pressures"):
            fit_pressure(w)


class TestFitTemperature:
    def test_exact_recovery(self):
        prm = SgParams(1.3, -1e6, 1e9, 4000.0)
        w = synthetic_window(prm)
        assert rel(fit_temperature(w, prm.gamma, prm.q, prm.p_inf), 4000.0) <= 1e-12

    def test_single_point(self):
        pt = StatePoint(T=310.0, p=3e7, v=1e-3, e=2e5)
        x = pt.e - (-1e6) - 1e9 * pt.v
        assert fit_temperature([pt], 1.3, -1e6, 1e9) == pytest.approx(x / 310.0, rel=1e-15)

    def test_zero_regressor(self):
        pt = StatePoint(T=310.0, p=3e7, v=1e-3, e=0.0)
        with pytest.raises(DegenerateWindowError):
            fit_temperature([pt], 1.3, 0.0, 0.0)

    def test_negative_slope(self):
        pt = StatePoint(T=310.0, p=3e7, v=1e-3, e=-5.0)
        with pytest.raises(InvalidFitError):
            fit_temperature([pt], 1.3, 0.0, 0.0)


class TestRelativeError:
    def test_identity(self):
        assert relative_error([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_value(self):
        assert relative_error([1.0, 2.0], [1.0, 1.0]) == pytest.approx(2 ** -0.5, rel=1e-15)

    def test_zero_data(self):
        with pytest.raises(DomainError):
            relative_error([1.0], [0.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            relative_error([1.0, 2.0], [1.0])


class TestFitWindow:
    def test_noiseless(self):
        res = fit_window(synthetic_window(CELL_FIRST))
        assert res.eps_p <= 1e-8 and res.eps_T <= 1e-8
        assert res.valid and res.gamma_gt_one and res.positive_pressure and res.positive_temperature
        assert res.n_points == 156
        for name in ("gamma", "q", "p_inf", "c_v"):
            assert rel(getattr(res.params, name), getattr(CELL_FIRST, name)) <= 1e-8

    def test_noisy(self):
        res = fit_window(energy_noise(synthetic_window(CELL_FIRST), 0.01, seed=7))
        assert 1e-3 < res.eps_p < 1e-1
        assert res.valid

    def test_model_values_match_eos(self):
        w = energy_noise(synthetic_window(CELL_LAST, p_lo=275e6, T_lo=600.0), 0.002, seed=1)
        res = fit_window(w)
        T, p, v, e = w.arrays()
        p_model = eos.pressure(res.params, 1.0 / v, e)
        T_model = eos.temperature(res.params, 1.0 / v, e)
        assert res.eps_p == pytest.approx(relative_error(p_model, p), rel=1e-9)
        assert res.eps_T == pytest.approx(relative_error(T_model, T), rel=1e-9)

    @pytest.mark.parametrize("amplitude", [0.05, 0.3])
    def test_flags_match_model_values(self, amplitude):
        w = energy_noise(synthetic_window(CELL_FIRST), amplitude, seed=2)
        res = fit_window(w)
        T, p, v, e = w.arrays()
        assert res.positive_pressure == bool(np.all(eos.pressure(res.params, 1 / v, e) > 0))
        assert res.positive_temperature == bool(np.all(eos.temperature(res.params, 1 / v, e) > 0))
        assert res.valid == (res.positive_pressure and res.positive_temperature)

    def test_large_noise_yields_invalid_flag(self):
        res = fit_window(energy_noise(synthetic_window(CELL_FIRST), 0.3, seed=2))
        assert not res.positive_pressure and not res.valid

    def test_ideal_gas_reports_p_inf_sign(self):
        res = fit_window(synthetic_window(IDEAL))
        assert res.nonnegative_p_inf == (res.params.p_inf >= 0)
        assert res.params.c_v == pytest.approx(717.0, rel=1e-8)

    def test_window_bounds_enforced(self):
        pt = StatePoint(T=400.0, p=3e7, v=1e-3, e=1e5)
        with pytest.raises(ValueError):
            FitWindow(25e6, 50e6, 300.0, 325.0, (pt,))


def test_fit_windows_order_independent_of_jobs():
    ws = [synthetic_window(CELL_FIRST, p_lo=p, T_lo=T) for p in (75e6, 25e6) for T in (350.0, 300.0)]
    serial = fit_windows(ws, jobs=1)
    parallel = fit_windows(list(reversed(ws)), jobs=4)
    assert [o.window.key for o in serial] == sorted(w.key for w in ws)
    assert [o.result for o in serial] == [o.result for o in parallel]


def test_fit_windows_captures_errors():
    bad = FitWindow(25e6, 50e6, 300.0, 325.0, ())
    (out,) = fit_windows([bad])
    assert out.result is None and isinstance(out.error, DegenerateWindowError) and not out.ok


# --- properties -------------------------------------------------------------

gen_params = st.builds(
    SgParams,
    gamma=st.floats(1.05, 3.0),
    q=st.floats(-2e7, -1e4),
    p_inf=st.floats(1e7, 5e9),
    c_v=st.floats(1e3, 5e4),
)


@settings(max_examples=60, deadline=None)
@given(gen_params, st.integers(5, 8), st.integers(5, 8))
def test_recovery_property(params, n_p, n_T):
    ps = np.linspace(25e6, 50e6, n_p)
    Ts = np.linspace(300.0, 325.0, n_T)
    res = fit_window(synthesize(params, ps, Ts).points)
    for name in ("gamma", "q", "p_inf", "c_v"):
        assert rel(getattr(res.params, name), getattr(params, name)) <= 1e-7


@settings(max_examples=40, deadline=None)
@given(gen_params, st.floats(-1e7, 1e7), st.floats(0.01, 100.0), st.floats(0.0, 0.005), st.integers(0, 2**32 - 1))
def test_scaling_invariance(params, shift, scale, noise, seed):
    pts = energy_noise(synthetic_window(params), noise, seed).points
    A, B, C = fit_energy_model(pts)
    moved = [StatePoint(T=pt.T, p=pt.p * scale, v=pt.v, e=pt.e + shift) for pt in pts]
    A2, B2, C2 = fit_energy_model(moved)
    # e + s = (A/k)(k p) v + B v + (C + s)
    assert rel(A2, A / scale) <= 1e-9
    assert rel(B2, B) <= 1e-9
    assert abs(C2 - (C + shift)) <= 1e-9 * max(abs(C + shift), abs(C), abs(shift))


def _outcome(window):
    try:
        return fit_window(window)
    except StiffGasError as exc:
        return type(exc)


@settings(max_examples=30, deadline=None)
@given(gen_params, st.randoms(use_true_random=False), st.floats(0.0, 0.001))
def test_permutation_invariance(params, random, noise):
    w = energy_noise(synthetic_window(params), noise, seed=11)
    pts = list(w.points)
    random.shuffle(pts)
    a, b = _outcome(w), _outcome(FitWindow(*w.key, pts))
    if isinstance(a, type):
        # a rejected fit is rejected the same way in any order
        assert b is a
        return
    for name in ("gamma", "q", "p_inf", "c_v"):
        assert rel(getattr(b.params, name), getattr(a.params, name)) <= 1e-12
    assert b.eps_p == pytest.approx(a.eps_p, rel=1e-12, abs=1e-300)
    assert b.eps_T == pytest.approx(a.eps_T, rel=1e-12, abs=1e-300)
