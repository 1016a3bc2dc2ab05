import math

import numpy as np
import pytest

from fraczeta.explicit import (
    TruncatedSum,
    lhs_theorem1,
    printed_Pk,
    residue_at,
    rhs_theorem1,
    trivial_sum,
    zero_pair_terms,
    zero_sum,
)
from fraczeta.zeta import Hk_closed, ZeroEntry, ZeroTable, hk_limit_at_zero


class TestTruncatedSum:
    def test_validation(self):
        with pytest.raises(ValueError):
            TruncatedSum(math.nan, 1, 0.0)
        with pytest.raises(ValueError):
            TruncatedSum(1.0, 1, -1e-3)
        ts = TruncatedSum(1.0, 3, 0.5, note="x")
        assert ts.terms_used == 3


class TestLhsTheorem1:
    def test_tail_bound_k1(self, table_1e6):
        ts = lhs_theorem1(table_1e6, 1, 10.5, 10**6)
        assert 0.0 < ts.tail_bound <= 2.5e-6
        assert ts.terms_used > 70000  # prime powers up to 1e6

    def test_tail_bound_k2(self, table_1e6):
        ts = lhs_theorem1(table_1e6, 2, 5.5, 10**6)
        assert ts.tail_bound <= 1e-11

    def test_empty_range(self, table_1e6):
        with pytest.raises(ValueError):
            lhs_theorem1(table_1e6, 1, 10.5, 10)

    def test_integer_x_rejected(self, table_1e6):
        with pytest.raises(ValueError):
            lhs_theorem1(table_1e6, 1, 10.0, 10**4)

    def test_k_range(self, table_1e6):
        with pytest.raises(ValueError):
            lhs_theorem1(table_1e6, 5, 10.5, 10**4)

    def test_truncation_consistency(self, table_1e6):
        # enlarging N can only move the value by at most the smaller tail bound
        a = lhs_theorem1(table_1e6, 1, 10.5, 10**5)
        b = lhs_theorem1(table_1e6, 1, 10.5, 10**6)
        assert abs(a.value - b.value) <= a.tail_bound


class TestResidueAt:
    def test_p1_consistency(self):
        for x in (5.0, 10.0, 50.0):
            assert abs(residue_at(1, x, 1.0, 0.25) - printed_Pk(1, x)) <= 1e-9

    def test_k2_simple_pole_prediction(self):
        # adjudicates the pole order at s = 1: H_2(0) x^-2 / 2, no log term
        got = residue_at(2, 5.0, 1.0, 0.25)
        assert abs(got - hk_limit_at_zero(2) / 2.0 / 25.0) <= 1e-10

    def test_k2_s2_regular_point(self):
        assert abs(residue_at(2, 5.0, 2.0, 0.25)) <= 1e-10

    def test_radius_independence(self):
        a = residue_at(1, 10.5, 1.0, 0.15)
        b = residue_at(1, 10.5, 1.0, 0.30)
        assert abs(a - b) <= 1e-10

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            residue_at(1, 10.0, 2.0, 0.25)  # s0 beyond k
        with pytest.raises(ValueError):
            residue_at(1, 10.0, 1.0, 0.35)  # radius cap
        with pytest.raises(ValueError):
            residue_at(1, 0.5, 1.0, 0.25)  # x <= 1


class TestZeroSum:
    def test_empty_subset(self, zeros100):
        ts = zero_sum(1, 10.5, zeros100, count=0)
        assert ts.value == 0.0
        assert ts.terms_used == 0
        assert ts.tail_bound > 0.0

    def test_magnitudes_k1(self, zeros100):
        ts = zero_sum(1, 10.5, zeros100)
        assert abs(ts.value) <= 0.05
        # table-certified majorant with its 2x margin
        assert ts.tail_bound <= 2e-4

    def test_conjugate_pairing_real(self, zeros100):
        pairs = zero_pair_terms(1, 10.5, zeros100)
        assert pairs.shape == (100,)
        assert float(np.max(np.abs(pairs.imag))) <= 1e-15

    def test_unrefined_rejected(self):
        raw = ZeroTable(entries=(ZeroEntry(1, 14.134725),), source="raw")
        with pytest.raises(ValueError):
            zero_sum(1, 10.5, raw)

    def test_empty_table_rejected(self):
        with pytest.raises(ValueError):
            zero_sum(1, 10.5, ZeroTable(entries=(), source="empty"))

    def test_tail_decreases_with_more_zeros(self, zeros100):
        t20 = zero_sum(1, 10.5, zeros100, count=20).tail_bound
        t100 = zero_sum(1, 10.5, zeros100, count=100).tail_bound
        assert t100 < t20


class TestTrivialSum:
    def test_leading_term_k1_x10(self, zeros100):
        # first term: sign * x^-4 H_1(3)/4, with H_1(3) = -(zeta(3)-1)/3
        ts = trivial_sum(1, 10.0)
        h13 = Hk_closed(1, 3.0).real
        leading = -1.0 * 10.0**-4.0 * h13 / 4.0
        assert abs(leading) == pytest.approx(1.68e-6, rel=0.01)
        assert abs(ts.value - leading) <= 3e-8  # later terms are x^-2 down
        assert ts.tail_bound < 1e-18 / (1 - 0.01)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            trivial_sum(1, 0.9)

    def test_fast_decay_k4(self):
        ts = trivial_sum(4, 100.0)
        assert abs(ts.value) <= 1e-12


class TestRhsAssembly:
    def test_k1_structure(self, zeros100):
        rhs = rhs_theorem1(1, 10.5, zeros100)
        assert len(rhs.residues) == 1  # Q_1 structurally absent
        assert rhs.residues[0][0] == 1.0
        parts = [v for _, v in rhs.residues] + [rhs.zero_sum.value, rhs.trivial_sum.value]
        assert abs(rhs.total - math.fsum(parts)) <= 1e-15

    def test_k2_structure(self, zeros100):
        rhs = rhs_theorem1(2, 5.5, zeros100)
        assert [s0 for s0, _ in rhs.residues] == [1.0, 2.0]
        assert rhs.budget >= rhs.zero_sum.tail_bound


class TestPrintedPk:
    def test_values(self):
        assert printed_Pk(1, 10.0) == pytest.approx((math.log(2 * math.pi) - 2) / 20.0, rel=1e-15)
        assert printed_Pk(2, 10.0) == pytest.approx(0.0070196, abs=1e-7)

    def test_unsupported_k(self):
        with pytest.raises(ValueError):
            printed_Pk(3, 10.0)


class TestExplicitFormulaMatch:
    @pytest.mark.parametrize("x", [10.5, 20.25])
    def test_k1(self, table_1e6, zeros100, x):
        lhs = lhs_theorem1(table_1e6, 1, x, 10**6)
        rhs = rhs_theorem1(1, x, zeros100)
        budget = lhs.tail_bound + rhs.budget
        assert abs(lhs.value - rhs.total) <= max(1e-3, budget)

    @pytest.mark.parametrize("x", [5.5, 9.5])
    def test_k2(self, table_1e6, zeros100, x):
        lhs = lhs_theorem1(table_1e6, 2, x, 10**6)
        rhs = rhs_theorem1(2, x, zeros100)
        budget = lhs.tail_bound + rhs.budget
        assert abs(lhs.value - rhs.total) <= max(1e-6, budget)

    def test_sign_adjudication_k1(self, table_1e6, zeros100):
        x = 10.5
        lhs = lhs_theorem1(table_1e6, 1, x, 10**6)
        rhs_minus = rhs_theorem1(1, x, zeros100, sign=-1.0)
        rhs_plus = rhs_theorem1(1, x, zeros100, sign=+1.0)
        d_minus = abs(lhs.value - rhs_minus.total)
        d_plus = abs(lhs.value - rhs_plus.total)
        budget = lhs.tail_bound + rhs_minus.budget
        # conditional form: when the zero sum rises clearly above the
        # budget, flipping the sign must strictly worsen the match
        if abs(rhs_minus.zero_sum.value) > 10.0 * budget:
            assert d_plus > d_minus
        # in any configuration the adopted sign must not lose
        assert d_minus <= d_plus

    def test_printed_p2_adjudication(self, table_1e6, zeros100):
        # the report must be able to state which P_2 candidate matches;
        # the contour residue (simple pole, no log x) is the winner
        x = 5.5
        lhs = lhs_theorem1(table_1e6, 2, x, 10**6)
        rhs = rhs_theorem1(2, x, zeros100)
        with_printed = printed_Pk(2, x) + rhs.residues[1][1] + rhs.zero_sum.value + rhs.trivial_sum.value
        assert abs(lhs.value - rhs.total) < abs(lhs.value - with_printed)
