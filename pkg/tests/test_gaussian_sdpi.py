import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdpi.channels import awgn_capacity
from sdpi.core_prob import binary_entropy, q_function
from sdpi.errors import AccuracyError, DomainError
from sdpi.gaussian_sdpi import (
    A0, A1, A2, A5, concentration_radius, diag_achievability,
    gauss_hermite_input, gd_lower, gd_rate_small_t, gd_subgaussian, gh_lower,
    gh_upper_achievability, horizontal_constants, horizontal_report,
    ks_from_capacity_gap, ks_from_mmse_gap, ks_talagrand, t_lower_from_gap,
)


class TestGdLower:
    def test_zero(self):
        assert gd_lower(0.0, 1.0) == 0.0

    def test_frozen_value(self):
        # pinned against the random-coupling sweep oracle
        assert gd_lower(0.5, 1.0) == pytest.approx(8.614028673855235e-05, rel=1e-6)

    def test_positive_for_positive_t(self):
        for t in (0.2, 0.5, 1.0, 2.0):
            assert gd_lower(t, 1.0) > 0.0

    def test_nondecreasing_in_t(self):
        vals = [gd_lower(t, 1.0) for t in (0.1, 0.3, 0.6, 1.0, 2.0)]
        assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))

    def test_gap_below_t(self):
        for t in (0.1, 0.5, 1.0):
            assert gd_lower(t, 1.0) < t

    def test_domain(self):
        with pytest.raises(DomainError):
            gd_lower(-0.1, 1.0)
        with pytest.raises(DomainError):
            gd_lower(0.5, 0.0)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 3.0), st.floats(0.1, 8.0))
    def test_bracket_is_restriction(self, t, gamma):
        # evaluating the bracket at any single point never beats the max
        assert gd_lower(t, gamma) >= 0.0


class TestGdRateSmallT:
    def test_never_exceeds_full_bound(self):
        for u in (5.0, 10.0, 100.0):
            assert gd_rate_small_t(u, 1.0) <= gd_lower(1.0 / u, 1.0) + 1e-15

    def test_u100_clips_to_zero(self):
        # at u = 100 the bracket at x = 1/(2 u log u) is negative: the
        # entropy term still dominates there, so the restriction yields 0
        assert gd_rate_small_t(100.0, 1.0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            gd_rate_small_t(1.0, 1.0)
        with pytest.raises(DomainError):
            gd_rate_small_t(0.5, 1.0)


class TestGdSubgaussian:
    def test_formula_literal(self):
        # the closed-form bracket is negative in this range; the value is
        # recorded as-is (see the design notes in the module docstring)
        val = gd_subgaussian(0.1, 1.0, 1.0)
        assert val == pytest.approx(-0.0018107774067206612, rel=1e-9)

    def test_matches_assembled_formula(self):
        t, gamma, s = 0.2, 2.0, 1.5
        y = t / math.log(1.0 / t)
        expect = 2.0 * q_function(math.sqrt(2.0 * gamma * s * math.log(1.0 / y))) * (
            t - binary_entropy(y) - 0.5 * y * math.log1p(gamma / y))
        assert gd_subgaussian(t, gamma, s) == pytest.approx(expect, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gd_subgaussian(0.3, 1.0, 1.0)
        with pytest.raises(DomainError):
            gd_subgaussian(0.0, 1.0, 1.0)


class TestDiagAchievability:
    def test_sandwich(self):
        # fano <= exact MI <= H(X), gap shrinking fast in a
        for a in (4.0, 6.0, 8.0, 10.0):
            h_x, fano, mi = diag_achievability(a, 1.0)
            assert fano <= mi + 1e-9
            assert mi <= h_x + 1e-12

    def test_frozen_gaps(self):
        # gaps pinned by adaptive quadrature of H(X|Y)
        expected = {4.0: 2.585884783e-02, 6.0: 1.117972926e-03,
                    8.0: 2.083862106e-05, 10.0: 1.568825799e-07}
        for a, gap in expected.items():
            h_x, _, mi = diag_achievability(a, 1.0)
            assert h_x - mi == pytest.approx(gap, rel=1e-2)

    def test_domain(self):
        with pytest.raises(DomainError):
            diag_achievability(1.0, 1.0)
        with pytest.raises(DomainError):
            diag_achievability(4.0, 0.0)


class TestKsBounds:
    def test_mmse_gap_shape(self):
        # first term decreasing in L, second vanishing with epsilon
        v1 = ks_from_mmse_gap(1e-4, 1.0)
        v2 = ks_from_mmse_gap(1e-8, 1.0)
        assert v2 < v1

    def test_mmse_gap_formula(self):
        eps, gamma = 1e-6, 2.0
        L = math.log(1.0 / eps)
        expect = A0 / math.sqrt(gamma * L) + A1 * 3.0 * eps ** 0.25 * math.sqrt(gamma * L)
        assert ks_from_mmse_gap(eps, gamma) == pytest.approx(expect, rel=1e-12)

    def test_capacity_gap_needs_margin(self):
        with pytest.raises(DomainError):
            ks_from_capacity_gap(1.0, 1.0)

    def test_capacity_gap_formula(self):
        eps, gamma = 1e-6, 1.0
        L = math.log(gamma / (4.0 * eps))
        expect = (A0 * math.sqrt(2.0 / (gamma * L))
                  + A1 * 2.0 * (gamma * eps) ** 0.25 * math.sqrt(2.0 * L))
        assert ks_from_capacity_gap(eps, gamma) == pytest.approx(expect, rel=1e-12)

    def test_talagrand_positive(self):
        assert ks_talagrand(1e-6, 1.0) > 0.0


class TestConcentrationRadius:
    def test_values(self):
        r, bound = concentration_radius(1e-8)
        assert r == pytest.approx(0.1, abs=1e-12)
        assert bound == pytest.approx(A2 * 0.1, abs=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            concentration_radius(0.0)
        with pytest.raises(DomainError):
            concentration_radius(1.5)


class TestHorizontalConstants:
    def test_frozen_gamma_one(self):
        hc = horizontal_constants(1.0)
        assert hc.kappa == pytest.approx(21.969604755646486, rel=1e-9)
        assert hc.c1 == pytest.approx(15.78851819712327, rel=1e-9)
        assert hc.a5 == pytest.approx(A5, abs=0)
        assert hc.log_eps0 == pytest.approx(-1930.6541324772988, rel=1e-6)

    def test_eps0_underflows_for_gamma_one(self):
        # the certified validity threshold sits far below float64 range
        assert horizontal_constants(1.0).eps0 == 0.0

    def test_kappa_decreasing_then_increasing_in_gamma(self):
        # dominated by 1/sqrt(gamma) at small gamma and gamma^{5/4} at large
        k_small = horizontal_constants(0.01).kappa
        k_mid = horizontal_constants(1.0).kappa
        k_large = horizontal_constants(100.0).kappa
        assert k_small > k_mid
        assert k_large > k_mid

    def test_report_notes(self):
        rep = horizontal_report(1.0)
        assert rep.constants["kappa"] > 0
        assert any("TV upper bound" in n for n in rep.notes)


class TestTLowerFromGap:
    def test_outside_validity_raises(self):
        with pytest.raises(DomainError):
            t_lower_from_gap(1e-3, 1.0)
        with pytest.raises(DomainError):
            t_lower_from_gap(1e-300, 1.0)

    def test_log_eps_path(self):
        val = t_lower_from_gap(None, 1.0, log_eps=-5000.0)
        assert val == pytest.approx(-0.6299846816224508, rel=1e-9)

    def test_grows_double_logarithmically(self):
        v1 = t_lower_from_gap(None, 1.0, log_eps=-1e4)
        v2 = t_lower_from_gap(None, 1.0, log_eps=-1e8)
        assert v2 > v1
        assert v2 - v1 == pytest.approx(0.25 * math.log(1e4), rel=1e-9)

    def test_bad_epsilon(self):
        with pytest.raises(DomainError):
            t_lower_from_gap(0.0, 1.0)


class TestGhLower:
    def test_underflow_guard(self):
        assert gh_lower(1.0, 1.0) == 0.0

    def test_monotone_nonincreasing(self):
        hc_vals = [gh_lower(t, 0.01) for t in (0.0, 0.5, 1.0)]
        assert all(a >= b for a, b in zip(hc_vals, hc_vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            gh_lower(-0.1, 1.0)


class TestGaussHermiteInput:
    def test_moments(self):
        for m in (2, 3, 5, 8):
            x = gauss_hermite_input(m)
            assert x.mean() == pytest.approx(0.0, abs=1e-12)
            assert x.var() == pytest.approx(1.0, abs=1e-10)

    def test_two_atoms_is_rademacher(self):
        x = gauss_hermite_input(2)
        assert list(x.atoms) == pytest.approx([-1.0, 1.0], abs=1e-12)
        assert list(x.weights) == pytest.approx([0.5, 0.5], abs=1e-12)


class TestGhUpperAchievability:
    def test_m2_bound_exact_half(self):
        m, bound, gap = gh_upper_achievability(math.log(2.0), 1.0)
        assert m == 2
        assert bound == 0.5

    def test_measured_gap_below_bound(self):
        for m in range(2, 9):
            t = math.log(m) + 1e-9
            mm, bound, gap = gh_upper_achievability(t, 1.0)
            assert mm == m
            assert gap <= bound

    def test_gamma_zero(self):
        assert gh_upper_achievability(1.0, 0.0) == (2, 0.0, 0.0)

    def test_accuracy_cutoff(self):
        with pytest.raises(AccuracyError):
            gh_upper_achievability(math.log(65.0) + 1e-9, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            gh_upper_achievability(0.5, 1.0)
