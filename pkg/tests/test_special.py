import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from savgol_ci.special import betainc, f_cdf, f_ppf, f_sf, norm_cdf, norm_ppf

mpmath.mp.dps = 40


class TestNormal:
    @pytest.mark.parametrize("p", [1e-6, 1e-4, 0.02, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.975, 0.99999, 1 - 1e-6])
    def test_ppf_against_mpmath(self, p):
        ref = float(-mpmath.sqrt(2) * mpmath.erfinv(1 - 2 * mpmath.mpf(p)))
        assert norm_ppf(p) == pytest.approx(ref, abs=1e-9)

    @settings(max_examples=300)
    @given(st.floats(1e-6, 1 - 1e-6))
    def test_round_trip(self, p):
        assert norm_cdf(norm_ppf(p)) == pytest.approx(p, abs=1e-9)

    def test_known_values(self):
        assert norm_ppf(0.5) == 0.0
        assert norm_ppf(1 / 6) == pytest.approx(-0.967421566101701, abs=1e-12)
        assert norm_ppf(5 / 6) == pytest.approx(0.967421566101701, abs=1e-12)
        assert norm_ppf(0.0) == -math.inf and norm_ppf(1.0) == math.inf

    def test_domain(self):
        with pytest.raises(ValueError):
            norm_ppf(1.2)
        with pytest.raises(ValueError):
            norm_ppf(float("nan"))


class TestBeta:
    @settings(max_examples=200)
    @given(st.floats(0.2, 80), st.floats(0.2, 80), st.floats(0, 1))
    def test_against_mpmath(self, a, b, x):
        ref = float(mpmath.betainc(a, b, 0, x, regularized=True))
        assert betainc(a, b, x) == pytest.approx(ref, rel=1e-8, abs=1e-300)

    def test_endpoints(self):
        assert betainc(2.0, 3.0, 0.0) == 0.0
        assert betainc(2.0, 3.0, 1.0) == 1.0

    def test_domain(self):
        with pytest.raises(ValueError):
            betainc(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            betainc(1.0, 1.0, 1.5)


class TestF:
    @pytest.mark.parametrize("d", [1, 4, 32, 33, 200])
    def test_median_at_one(self, d):
        assert f_cdf(1.0, d, d) == pytest.approx(0.5, abs=1e-12)

    @settings(max_examples=200)
    @given(st.floats(1e-3, 1e3), st.integers(1, 100), st.integers(1, 100))
    def test_reciprocal_symmetry(self, x, d1, d2):
        assert f_cdf(x, d1, d2) == pytest.approx(1 - f_cdf(1 / x, d2, d1), abs=1e-10)

    @settings(max_examples=100)
    @given(st.floats(1e-3, 50), st.integers(1, 60), st.integers(1, 60))
    def test_against_scipy(self, x, d1, d2):
        assert f_cdf(x, d1, d2) == pytest.approx(stats.f.cdf(x, d1, d2), rel=1e-8, abs=1e-14)
        assert f_sf(x, d1, d2) == pytest.approx(stats.f.sf(x, d1, d2), rel=1e-8, abs=1e-14)

    def test_limits_and_monotone(self):
        assert f_cdf(0.0, 32, 33) == 0.0
        assert f_cdf(-1.0, 32, 33) == 0.0
        assert f_cdf(math.inf, 32, 33) == 1.0
        xs = np.geomspace(1e-3, 1e3, 200)
        vals = [f_cdf(x, 32, 33) for x in xs]
        assert np.all(np.diff(vals) >= 0)

    @pytest.mark.parametrize("p", [0.001, 0.025, 0.5, 0.975, 0.999])
    def test_ppf(self, p):
        x = f_ppf(p, 32, 33)
        assert x == pytest.approx(stats.f.ppf(p, 32, 33), rel=1e-9)
        assert f_cdf(x, 32, 33) == pytest.approx(p, abs=1e-12)

    def test_ppf_domain(self):
        with pytest.raises(ValueError):
            f_ppf(1.0, 3, 4)

    def test_dof_domain(self):
        with pytest.raises(ValueError):
            f_cdf(1.0, 0, 4)
