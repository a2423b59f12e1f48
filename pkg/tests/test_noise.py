import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from savgol_ci.core import FilterSpec, apply_filter
from savgol_ci.exceptions import BiasStateError, PlateauNotFoundError, SeriesTooShortError
from savgol_ci.noise import (
    Bias,
    NoiseEstimate,
    NoiseMethod,
    SweepTable,
    bias_factor,
    differenced_sd,
    estimate_noise_floor,
    min_half_window,
    residual_sd,
    select_m,
    sweep_residual_sd,
    unbias,
)

from conftest import synthetic_cubic


class TestResidualSd:
    def test_zero_residuals(self):
        y = np.linspace(0, 1, 10)
        est = residual_sd(y, y)
        assert est.sd == 0.0
        assert est.method is NoiseMethod.RESIDUAL_VARIANCE and est.bias is Bias.BIASED

    def test_alternating_residuals(self):
        yf = np.arange(20.0)
        eps = 0.37
        y = yf + eps * (-1.0) ** np.arange(20)
        assert residual_sd(y, yf).sd == pytest.approx(eps, rel=1e-14)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="differ in length"):
            residual_sd(np.ones(5), np.ones(6))

    def test_needs_two_samples(self):
        with pytest.raises(SeriesTooShortError):
            residual_sd([1.0], [1.0])


class TestDifferencedSd:
    def test_zero(self):
        y = np.sin(np.arange(30.0))
        assert differenced_sd(y, y).sd == 0.0

    def test_forms_agree(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            y, yf = rng.normal(size=(2, 57))
            r = y - yf
            alt = math.sqrt(np.sum(np.diff(r) ** 2) / (2 * (r.size - 1)))
            assert differenced_sd(y, yf).sd == pytest.approx(alt, rel=1e-12)

    def test_factor_two_compensation(self):
        sigma = 0.8
        y = sigma * np.random.default_rng(2024).standard_normal(1_000_000)
        est = differenced_sd(y, np.zeros_like(y))
        assert est.sd == pytest.approx(sigma, rel=0.005)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            differenced_sd(np.ones(5), np.ones(4))

    def test_converges_with_residual_form_on_white_noise(self):
        y, signal, _ = synthetic_cubic(q=200_000, sigma=1.3, seed=5)
        a = residual_sd(y, signal).sd
        b = differenced_sd(y, signal).sd
        # both ~1.3 with Monte Carlo error of order q^-1/2
        assert a == pytest.approx(1.3, rel=0.01)
        assert b == pytest.approx(a, rel=0.01)


class TestUnbias:
    def test_keeling_example(self):
        est = NoiseEstimate(0.301, NoiseMethod.RESIDUAL_VARIANCE, spec=FilterSpec(5, 9))
        out = unbias(est)
        assert out.bias is Bias.UNBIASED
        assert out.sd == pytest.approx(0.301 * math.sqrt(19 / 14), rel=1e-15)
        assert round(out.sd, 3) == 0.351

    @settings(max_examples=100, deadline=None)
    @given(
        n=st.integers(1, 9),
        extra=st.integers(1, 40),
        sd=st.floats(1e-6, 1e6),
    )
    def test_variance_identity(self, n, extra, sd):
        m = (n + extra) // 2 + 1
        spec = FilterSpec(n, m)
        est = NoiseEstimate(sd, NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE, spec=spec)
        ratio = unbias(est).sd ** 2 / sd**2
        assert ratio == pytest.approx((2 * m + 1) / (2 * m + 1 - n), rel=1e-13)

    def test_factor_vanishes_for_wide_windows(self):
        assert bias_factor(FilterSpec(3, 10_000)) == pytest.approx(1.0, abs=2e-4)

    def test_refuses_double_correction(self):
        est = unbias(NoiseEstimate(1.0, NoiseMethod.RESIDUAL_VARIANCE, spec=FilterSpec(5, 9)))
        with pytest.raises(BiasStateError, match="already unbiased"):
            unbias(est)

    def test_requires_spec(self):
        with pytest.raises(BiasStateError):
            unbias(NoiseEstimate(1.0, NoiseMethod.RESIDUAL_VARIANCE))

    def test_degenerate_dof_rejected_upstream(self):
        with pytest.raises(ValueError):
            FilterSpec(3, 1)

    def test_negative_sd_rejected(self):
        with pytest.raises(ValueError):
            NoiseEstimate(-1.0, NoiseMethod.RESIDUAL_VARIANCE)


class TestSweep:
    @pytest.mark.filterwarnings("ignore::savgol_ci.exceptions.EvenParameterCountWarning")
    def test_m_range_and_columns(self):
        y, _, _ = synthetic_cubic(q=80, seed=1)
        table = sweep_residual_sd(4, 20, y)
        assert table.m[0] == min_half_window(4) == 2
        assert table.m[-1] == 20
        assert np.all(np.diff(table.m) == 1)
        for m, a, b in table.rows:
            yf = apply_filter(FilterSpec(4, m), y).yf
            assert a == residual_sd(y, yf).sd
            assert b == differenced_sd(y, yf).sd

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
    def test_min_half_window(self, n):
        m0 = min_half_window(n)
        assert 2 * m0 + 1 > n
        assert m0 == 1 or 2 * (m0 - 1) + 1 <= n

    def test_in_model_signal_gives_zero(self):
        t = np.linspace(-2, 3, 60)
        y = 2 * t**3 - t + 4
        table = sweep_residual_sd(5, 25, y)
        assert np.max(table.sd_a) < 1e-9 and np.max(table.sd_b) < 1e-9

    def test_too_short_names_max_p(self):
        with pytest.raises(SeriesTooShortError, match="at most p = 9"):
            sweep_residual_sd(5, 12, np.arange(20.0))

    def test_p_below_minimum(self):
        with pytest.raises(ValueError):
            sweep_residual_sd(7, 3, np.arange(30.0))

    def test_table_validates_rows(self):
        with pytest.raises(ValueError):
            SweepTable(n=5, m=[2, 3], sd_a=[1, 1], sd_b=[1, 1])
        with pytest.raises(ValueError):
            SweepTable(n=3, m=[3, 2], sd_a=[1, 1], sd_b=[1, 1])


def _table(sd_b, sd_a=None, n=3, m0=2):
    m = np.arange(m0, m0 + len(sd_b))
    return SweepTable(n=n, m=m, sd_a=sd_b if sd_a is None else sd_a, sd_b=sd_b)


class TestNoiseFloor:
    def test_picks_longest_stable_run(self):
        sd_b = [0.1, 0.2, 0.30, 0.301, 0.302, 0.303, 0.4, 0.5, 0.5, 0.5]
        est = estimate_noise_floor(_table(sd_b))
        assert est.m_range == (4, 7)
        assert est.sd == pytest.approx(np.median([0.30, 0.301, 0.302, 0.303]))
        assert est.bias is Bias.BIASED
        assert est.method is NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE

    def test_skips_run_touching_first_row(self):
        sd_b = [0.2, 0.2, 0.2, 0.2, 0.2, 0.5, 0.9, 0.9, 0.9]
        est = estimate_noise_floor(_table(sd_b))
        assert est.sd == pytest.approx(0.9)

    def test_tie_goes_to_smaller_m(self):
        sd_b = [0.1, 1.0, 1.0, 1.0, 2.0, 3.0, 3.0, 3.0]
        assert estimate_noise_floor(_table(sd_b)).sd == pytest.approx(1.0)

    def test_threshold_is_configurable(self):
        sd_b = [0.1, 0.2, 0.30, 0.31, 0.32, 0.33, 0.34]
        with pytest.raises(PlateauNotFoundError):
            estimate_noise_floor(_table(sd_b), threshold=0.02)
        assert estimate_noise_floor(_table(sd_b), threshold=0.05).m_range == (4, 8)

    def test_monotone_steps_raise(self):
        sd_b = 0.1 * 1.05 ** np.arange(12)
        with pytest.raises(PlateauNotFoundError, match="manually"):
            estimate_noise_floor(_table(sd_b))

    def test_needs_five_rows(self):
        with pytest.raises(ValueError):
            estimate_noise_floor(_table([1.0, 1.0, 1.0, 1.0]))

    def test_synthetic_cubic_seed0(self):
        # q = 500: a 3% band is roughly one standard error of the sample SD
        y, _, _ = synthetic_cubic(q=500, sigma=1.0, seed=0)
        est = estimate_noise_floor(sweep_residual_sd(5, 25, y))
        assert est.sd == pytest.approx(1.0, rel=0.03)

    @pytest.mark.parametrize("seed", range(8))
    def test_synthetic_cubic_tracks_drawn_noise(self, seed):
        y, _, noise = synthetic_cubic(q=500, sigma=1.0, seed=seed)
        est = estimate_noise_floor(sweep_residual_sd(5, 25, y))
        # same estimator on the noise alone; the filter removes the cubic exactly
        ref = differenced_sd(noise, np.zeros_like(noise)).sd
        assert est.sd == pytest.approx(ref, rel=0.01)


class TestSelectM:
    def test_exact_match(self):
        table = _table([0.3] * 6, sd_a=[0.1, 0.2, 0.25, 0.3, 0.35, 0.4])
        floor = NoiseEstimate(0.25, NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE)
        assert select_m(table, floor) == 4

    def test_tie_goes_to_smaller_m(self):
        table = _table([0.3] * 5, sd_a=[0.1, 0.2, 0.4, 0.5, 0.6])
        floor = NoiseEstimate(0.3, NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE)
        assert select_m(table, floor) == 3

    def test_refuses_unbiased_floor(self):
        table = _table([0.3] * 5)
        floor = NoiseEstimate(0.3, NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE, Bias.UNBIASED)
        with pytest.raises(BiasStateError):
            select_m(table, floor)

    @pytest.mark.parametrize("k", [1e-3, 0.5, 7.0, 1e4])
    def test_scale_invariance(self, keeling_y, k):
        def pick(y):
            table = sweep_residual_sd(5, 25, y)
            return select_m(table, estimate_noise_floor(table))

        assert pick(k * keeling_y) == pick(keeling_y)

    def test_synthetic_selection_recovers_sigma(self):
        y, _, _ = synthetic_cubic(q=500, sigma=1.0, seed=0)
        table = sweep_residual_sd(5, 25, y)
        m = select_m(table, estimate_noise_floor(table))
        spec = FilterSpec(5, m)
        sd = unbias(residual_sd(y, apply_filter(spec, y).yf, spec)).sd
        assert sd == pytest.approx(1.0, rel=0.05)


class TestKeelingSweep:
    @pytest.fixture
    def tables(self, keeling_y):
        return {n: sweep_residual_sd(n, 25, keeling_y) for n in (3, 5, 7)}

    def test_differenced_plateau_n5(self, tables):
        t = tables[5]
        sel = (t.m >= 9) & (t.m <= 15)
        assert np.all(np.abs(t.sd_b[sel] - 0.30) <= 0.02)
        # the smaller half-windows are in the over-fitting dropoff
        assert np.all(t.sd_b[(t.m >= 3) & (t.m <= 8)] < 0.28)

    def test_floors_and_selection(self, tables):
        picks = {n: select_m(t, estimate_noise_floor(t)) for n, t in tables.items()}
        assert picks == {3: 6, 5: 9, 7: 13}
        assert estimate_noise_floor(tables[5]).sd == pytest.approx(0.30, abs=0.01)

    def test_residual_sd_non_decreasing_beyond_overfit(self, tables):
        # empirical regression on this data set only: sd_a grows with m once
        # the window is past the over-fitting region (n=5, m >= 9) up to m = 12
        t = tables[5]
        seg = t.sd_a[(t.m >= 9) & (t.m <= 12)]
        assert np.all(np.diff(seg) >= 0)

    def test_estimators_contrast(self, tables):
        # sd_a depends strongly on n; sd_b much less so over the common range
        common = np.arange(13, 26)
        a3 = tables[3].sd_a[np.isin(tables[3].m, common)]
        a7 = tables[7].sd_a[np.isin(tables[7].m, common)]
        b3 = tables[3].sd_b[np.isin(tables[3].m, common)]
        b7 = tables[7].sd_b[np.isin(tables[7].m, common)]
        assert np.mean(np.abs(a3 - a7)) > 3 * np.mean(np.abs(b3 - b7))
        assert np.all(np.abs(b3 - 0.30) < 0.02) and np.all(np.abs(b7 - 0.30) < 0.04)
