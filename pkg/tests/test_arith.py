import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from fraczeta.arith import CapacityError, build_sieve, dirichlet_convolve


def brute_divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


class TestBuildSieve:
    def test_prime_power_and_two_prime_cases(self, table_small):
        assert table_small.vonmangoldt(8) == pytest.approx(math.log(2), abs=1e-15)
        assert table_small.moebius(10) == 1

    def test_trivial_table(self):
        t = build_sieve(1)
        assert t.vonmangoldt(1) == 0.0
        assert t.moebius(1) == 1
        assert t.mubar(1) == 1.0
        assert t.upsilon(1) == 1.0

    def test_mu_partial_series_vs_basel(self, table_1e6):
        n = np.arange(1, 10**6 + 1, dtype=np.float64)
        partial = math.fsum((table_1e6.mu[1:].astype(np.float64) / n**2).tolist())
        assert abs(partial - 6.0 / math.pi**2) <= 2e-6  # 1/N tail on top of the reference

    def test_capacity_errors(self):
        with pytest.raises(CapacityError):
            build_sieve(0)
        with pytest.raises(CapacityError):
            build_sieve(2 * 10**8)
        with pytest.raises(CapacityError):
            build_sieve(10**6, mem_budget_bytes=10**6)

    def test_determinism(self):
        a = build_sieve(3000)
        b = build_sieve(3000)
        assert np.array_equal(a.spf, b.spf)
        assert np.array_equal(a.lam, b.lam)
        assert np.array_equal(a.mu, b.mu)
        assert np.array_equal(a.mubar_arr, b.mubar_arr)
        assert np.array_equal(a.upsilon_arr, b.upsilon_arr)


class TestVonMangoldt:
    def test_prime_square(self, table_small):
        assert table_small.vonmangoldt(9) == pytest.approx(math.log(3), abs=1e-15)

    def test_two_distinct_primes(self, table_small):
        assert table_small.vonmangoldt(12) == 0.0

    def test_divisor_sum_is_log(self, table_small):
        s = math.fsum(table_small.vonmangoldt(d) for d in brute_divisors(12))
        assert abs(s - math.log(12)) <= 1e-12

    def test_out_of_range(self, table_small):
        with pytest.raises(IndexError):
            table_small.vonmangoldt(0)
        with pytest.raises(IndexError):
            table_small.vonmangoldt(10**4 + 1)


class TestMoebius:
    def test_examples(self, table_small):
        assert table_small.moebius(1) == 1
        assert table_small.moebius(12) == 0
        assert table_small.moebius(30) == -1

    def test_out_of_range(self, table_small):
        with pytest.raises(IndexError):
            table_small.moebius(-3)


class TestDirichletConvolve:
    def test_moebius_inversion(self, table_small):
        N = 5000
        one = np.ones(N + 1)
        h = dirichlet_convolve(table_small.mu[: N + 1].astype(np.float64), one)
        assert h[1] == 1.0
        assert np.max(np.abs(h[2:])) == 0.0

    def test_lambda_star_one_is_log(self, table_small):
        N = 10**4
        h = dirichlet_convolve(np.asarray(table_small.lam[: N + 1]), np.ones(N + 1))
        logn = np.log(np.arange(1, N + 1, dtype=np.float64))
        assert np.max(np.abs(h[1:] - logn)) <= 1e-12

    def test_divisor_count_at_6(self):
        one = np.ones(11)
        h = dirichlet_convolve(one, one)
        assert h[6] == 4.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            dirichlet_convolve(np.ones(5), np.ones(6))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 60), st.data())
    def test_matches_brute_force(self, n, data):
        f = np.array([0.0] + data.draw(st.lists(
            st.floats(-3, 3, allow_nan=False), min_size=n, max_size=n)))
        g = np.array([0.0] + data.draw(st.lists(
            st.floats(-3, 3, allow_nan=False), min_size=n, max_size=n)))
        h = dirichlet_convolve(f, g)
        for m in range(1, n + 1):
            ref = math.fsum(f[d] * g[m // d] for d in brute_divisors(m))
            assert h[m] == pytest.approx(ref, abs=1e-10)


class TestMubarUpsilon:
    def test_mubar_examples(self, table_small):
        assert table_small.mubar(1) == 1.0
        assert table_small.mubar(2) == pytest.approx(-1.0 - math.sqrt(2.0), abs=1e-14)
        assert table_small.mubar(4) == pytest.approx(math.sqrt(2.0), abs=1e-14)

    def test_upsilon_examples(self, table_small):
        assert table_small.upsilon(1) == 1.0
        assert table_small.upsilon(3) == pytest.approx(1.0 - math.sqrt(3.0), abs=1e-14)
        assert table_small.upsilon(6) == pytest.approx(
            (1.0 - math.sqrt(2.0)) * (1.0 - math.sqrt(3.0)), abs=1e-12
        )

    def test_divisor_enumeration_oracle(self, table_small):
        for n in range(1, 300):
            mb = math.fsum(
                table_small.moebius(d) * math.sqrt(d) * table_small.moebius(n // d)
                for d in brute_divisors(n)
            )
            up = math.fsum(
                table_small.moebius(d) * math.sqrt(d) for d in brute_divisors(n)
            )
            assert table_small.mubar(n) == pytest.approx(mb, abs=1e-11)
            assert table_small.upsilon(n) == pytest.approx(up, abs=1e-11)

    def test_upsilon_prime_factor_product(self, table_small):
        # upsilon(n) = prod over distinct primes p | n of (1 - sqrt(p))
        for n in (2, 9, 30, 210, 1024, 9972):
            m, prod = n, 1.0
            while m > 1:
                p = int(table_small.spf[m])
                prod *= 1.0 - math.sqrt(p)
                while m % p == 0:
                    m //= p
            assert table_small.upsilon(n) == pytest.approx(prod, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 1000), st.integers(1, 1000))
    def test_multiplicativity(self, table_1e6, m, n):
        assume(math.gcd(m, n) == 1)
        assert table_1e6.mubar(m * n) == pytest.approx(
            table_1e6.mubar(m) * table_1e6.mubar(n), abs=1e-12 * max(1.0, abs(table_1e6.mubar(m * n)))
        )
        assert table_1e6.upsilon(m * n) == pytest.approx(
            table_1e6.upsilon(m) * table_1e6.upsilon(n), abs=1e-12 * max(1.0, abs(table_1e6.upsilon(m * n)))
        )

    def test_size_bounds(self, table_small):
        for n in range(1, 10**4 + 1):
            assert abs(table_small.upsilon(n)) <= math.sqrt(n) + 1e-9
            sigma_half = math.fsum(math.sqrt(d) for d in brute_divisors(n)) if n <= 300 else None
            if sigma_half is not None:
                assert abs(table_small.mubar(n)) <= sigma_half + 1e-9


class TestTableInvariants:
    def test_convolution_consistency(self, table_small):
        N = 10**4
        idx = np.arange(N + 1, dtype=np.float64)
        musq = table_small.mu[: N + 1].astype(np.float64) * np.sqrt(idx)
        mb = dirichlet_convolve(musq, table_small.mu[: N + 1].astype(np.float64))
        up = dirichlet_convolve(musq, np.ones(N + 1))
        assert np.max(np.abs(mb[1:] - table_small.mubar_arr[1:])) <= 1e-12
        assert np.max(np.abs(up[1:] - table_small.upsilon_arr[1:])) <= 1e-12

    def test_lambda_log_identity_to_1e4(self, table_small):
        N = 10**4
        h = dirichlet_convolve(np.asarray(table_small.lam[: N + 1]), np.ones(N + 1))
        for n in (2, 3, 100, 9999, 10**4):
            assert abs(h[n] - math.log(n)) <= 1e-12

    def test_dirichlet_series_cross_check(self, table_1e6):
        from fraczeta.zeta import zeta_em

        N = 10**6
        n = np.arange(1, N + 1, dtype=np.float64)
        partial = math.fsum((table_1e6.mubar_arr[1:] / n**3).tolist())
        target = 1.0 / (zeta_em(3.0).real * zeta_em(2.5).real)
        tail = 2.8 / N**1.5  # split of sum_{n>N} sigma_{1/2}(n)/n^3 at d = N
        assert abs(partial - target) <= 1e3 * tail

        partial_u = math.fsum((table_1e6.upsilon_arr[1:] / n**3).tolist())
        target_u = zeta_em(3.0).real / zeta_em(2.5).real
        assert abs(partial_u - target_u) <= 1e3 * tail
