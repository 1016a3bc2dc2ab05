import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from fraczeta.bernpoly import (
    BernoulliCache,
    bernoulli_number,
    bernoulli_poly,
    default_cache,
    em_identity_residual,
    integral_Ik,
    integral_ik_array,
    periodic_bernoulli,
    sawtooth_S,
    sdot,
)


class TestBernoulliNumbers:
    def test_low_indices(self):
        c = default_cache()
        assert bernoulli_number(c, 0) == 1.0
        assert bernoulli_number(c, 1) == -0.5
        assert bernoulli_number(c, 2) == pytest.approx(1.0 / 6.0, rel=1e-15)
        assert bernoulli_number(c, 3) == 0.0

    def test_b12_exact_rational(self):
        # -691/2730, from the exact recurrence
        assert bernoulli_number(default_cache(), 12) == pytest.approx(-691.0 / 2730.0, rel=1e-15)

    def test_odd_vanish(self):
        c = default_cache()
        for j in range(3, 64, 2):
            assert bernoulli_number(c, j) == 0.0

    def test_range_error(self):
        c = BernoulliCache(max_index=8)
        with pytest.raises(ValueError):
            bernoulli_number(c, 9)

    def test_recurrence(self):
        # sum_{i<=m} C(m+1, i) B_i = 0, relative to the largest term
        c = default_cache()
        for m in range(1, c.max_index):
            terms = [math.comb(m + 1, i) * bernoulli_number(c, i) for i in range(m + 1)]
            scale = max(abs(t) for t in terms)
            assert abs(math.fsum(terms)) <= 1e-12 * scale


class TestBernoulliPoly:
    def test_examples(self):
        assert bernoulli_poly(2, 0.0) == pytest.approx(1.0 / 6.0, abs=1e-16)
        assert bernoulli_poly(3, 0.5) == pytest.approx(0.0, abs=1e-16)
        assert bernoulli_poly(1, 0.75) == 0.25

    def test_range_error(self):
        with pytest.raises(ValueError):
            bernoulli_poly(65, 0.5)


class TestPeriodicBernoulli:
    def test_examples(self):
        assert periodic_bernoulli(1, 2.75) == 0.25
        assert periodic_bernoulli(2, 5.0) == pytest.approx(1.0 / 6.0, abs=1e-16)
        assert periodic_bernoulli(3, 7.5) == pytest.approx(0.0, abs=1e-16)


class TestIntegralIk:
    def test_examples(self):
        assert integral_Ik(1, 0.5) == -0.125
        assert integral_Ik(1, 7.0) == 0.0
        assert integral_Ik(2, 0.5) == pytest.approx(0.0, abs=1e-17)

    def test_periodicity_grid(self):
        xs = np.linspace(0.0, 50.0, 1000)
        for k in range(1, 7):
            diff = integral_ik_array(k, xs + 1.0) - integral_ik_array(k, xs)
            assert np.max(np.abs(diff)) <= 1e-14

    def test_quadrature_oracle(self):
        # closed form vs adaptive per-period quadrature of B_k({t})
        for k in range(1, 5):
            for x in (0.3, 2.7, 9.25):
                pieces, lo = [], 0.0
                while lo < x:
                    hi = min(math.floor(lo) + 1.0, x)
                    val, _ = quad(
                        lambda t: periodic_bernoulli(k, t), lo, hi,
                        epsabs=1e-13, epsrel=1e-13,
                    )
                    pieces.append(val)
                    lo = hi
                assert abs(math.fsum(pieces) - integral_Ik(k, x)) <= 1e-10


class TestSawtooth:
    def test_sawtooth_values(self):
        assert sawtooth_S(2.25) == -0.25
        assert sawtooth_S(3.0) == 0.0
        assert sawtooth_S(0.5) == 0.0

    def test_sdot_values(self):
        assert sdot(0.5) == -0.125
        assert sdot(7.0) == 0.0
        assert sdot(2.25) == -0.09375

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.0, 50.0, allow_nan=False))
    def test_sdot_equals_I1_exactly(self, x):
        assert sdot(x) == integral_Ik(1, x)

    def test_fourier_normalization_oracle(self):
        # partial sums of (1/(2 pi^2)) sum (cos(2 pi n x) - 1)/n^2 converge to sdot
        N = 10**4
        n = np.arange(1, N + 1, dtype=np.float64)
        inv = 1.0 / n**2
        for x in np.linspace(0.0, 3.0, 101):
            partial = float(np.sum((np.cos(2.0 * np.pi * n * x) - 1.0) * inv))
            partial /= 2.0 * math.pi**2
            assert abs(sdot(float(x)) - partial) <= 1.0 / (math.pi**2 * N) + 1e-12


class TestEulerMaclaurinIdentity:
    def test_polynomial_exact(self):
        assert em_identity_residual("square", 1.0, 5.0, 2) <= 1e-12

    def test_inverse_square(self):
        assert em_identity_residual("inverse_square", 1.0, 10.0, 3) <= 1e-10

    def test_exponential(self):
        assert em_identity_residual("exp_decay", 1.0, 4.0, 4) <= 1e-10

    def test_unknown_function(self):
        with pytest.raises(ValueError):
            em_identity_residual("cubic", 1.0, 2.0, 1)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            em_identity_residual("square", 5.0, 1.0, 2)

    def test_non_integer_endpoints_rejected(self):
        with pytest.raises(ValueError):
            em_identity_residual("square", 1.5, 6.5, 2)

    @pytest.mark.parametrize("f_id", ["square", "inverse_square", "exp_decay"])
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
    def test_all_orders_small(self, f_id, k):
        assert em_identity_residual(f_id, 2.0, 7.0, k) <= 1e-9
