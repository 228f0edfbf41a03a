"""Profiles, supersolution, solvability condition and closed forms."""

import math

import numpy as np
import pytest

from degenpde import (DomainError, RegimeMismatchError, absorption_asymptote,
                      closed_form_residual_bracket, derive, front_coordinate,
                      front_radius_theory, global_solvability_condition,
                      make_profile, profile_value, rescaled_time,
                      similarity_coord, solvability_amplitude_threshold,
                      space_map, supersolution_z, time_factors, u_from_v, vbar)

from conftest import make_e1, make_e2, make_e3


class TestProfileValue:
    def test_compact_at_origin(self, d2):
        prof = make_profile(d2, a=0.5)
        assert prof.kind == "zkb"
        assert profile_value(prof, 0.0) == 0.5

    def test_compact_front(self, d2):
        prof = make_profile(d2, a=0.5)
        assert front_coordinate(d2, 0.5) == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert profile_value(prof, math.sqrt(2.0)) == 0.0
        assert profile_value(prof, 3.0) == 0.0

    def test_fast_value(self, d3):
        prof = make_profile(d3, a=1.0)
        assert prof.kind == "fast"
        assert profile_value(prof, 1.0) == pytest.approx(16.0, abs=1e-12)

    def test_regime_mismatch(self, d3):
        with pytest.raises(RegimeMismatchError):
            profile_value(make_profile(d3, kind="zkb"), 0.5)

    def test_compact_support_exact(self, d2):
        xi_b = front_coordinate(d2, 0.5)
        prof = make_profile(d2, a=0.5)
        xi = np.linspace(0, 2 * xi_b, 2001)
        vals = profile_value(prof, xi)
        assert np.all(vals[xi >= xi_b] == 0.0)
        assert np.all(vals[xi < xi_b] > 0.0)

    def test_all_kinds_nonincreasing(self, d1, d2, d3):
        for d, a in ((d1, 1.0), (d2, 0.5), (d3, 1.0)):
            prof = make_profile(d, a=a)
            xi = np.linspace(0.0, 10.0, 10 ** 4)
            vals = profile_value(prof, xi)
            assert np.all(np.diff(vals) <= 1e-15)
        d_crit = derive(make_e1(m=1.0))
        vals = profile_value(make_profile(d_crit, a=1.0), np.linspace(0, 10, 10 ** 4))
        assert np.all(np.diff(vals) < 0)


class TestSupersolution:
    def test_beyond_front_vanishes(self, d2):
        assert supersolution_z(d2, 0.5, 1.0, 3.0) == 0.0

    def test_axis_value(self, d2):
        assert supersolution_z(d2, 0.5, 1.0, 0.0) == pytest.approx(
            0.5 * 4.0 ** -0.25, abs=1e-15)

    def test_linear_in_amplitude_at_axis(self, d2):
        # gamma2 = 1 makes the axis value linear in a
        z1 = supersolution_z(d2, 0.4, 2.0, 0.0)
        z2 = supersolution_z(d2, 0.8, 2.0, 0.0)
        assert z2 == pytest.approx(2 * z1, rel=1e-14)

    def test_factorization(self, d2):
        rng = np.random.default_rng(3)
        prof = make_profile(d2, a=0.5)
        for _ in range(100):
            t = rng.uniform(1.0, 5.0)
            r = rng.uniform(0.0, 3.0)
            direct = supersolution_z(d2, 0.5, t, r)
            composed = vbar(d2, t) * profile_value(prof, similarity_coord(d2, t, r))
            assert direct == composed

    def test_u_variables(self):
        d = derive(make_e1(q=0.5, beta=3.0, a=0.5))
        z = supersolution_z(d, 0.5, 1.0, 0.0)
        assert u_from_v(z, 0.5) == pytest.approx(z ** 2.0, rel=1e-14)


class TestResidualBracket:
    def test_e2_axis(self, d2):
        val = closed_form_residual_bracket(d2, 0.5, 0.0)
        assert val == pytest.approx(1 / 3 - 1 / 2 + 0.5 ** 4 / 3, abs=1e-15)
        assert val == pytest.approx(-0.14583333333333334, abs=1e-15)

    def test_front_limit(self, d2):
        xi_b = front_coordinate(d2, 0.5)
        val = closed_form_residual_bracket(d2, 0.5, xi_b * (1 - 1e-12))
        assert val == pytest.approx(1 / 3 - 1 / 2, abs=1e-10)

    def test_e1_positive(self, d1):
        # subcritical set: the bracket stays positive, no supersolution
        assert closed_form_residual_bracket(d1, 1.0, 0.0) == pytest.approx(1.5, abs=1e-15)

    def test_nonpositive_under_solvability(self, d2):
        xi = np.linspace(0.0, front_coordinate(d2, 0.5), 2000)
        vals = closed_form_residual_bracket(d2, 0.5, xi)
        assert global_solvability_condition(d2, 0.5)
        assert np.all(vals <= 1e-12)

    def test_monotone_in_xi_for_positive_l7(self, d2):
        # the positive-part term shrinks with xi, so for l7 > 0 the bracket
        # is non-increasing and its value at xi = 0 dominates all others
        xi = np.linspace(0.0, 2.0, 4000)
        vals = closed_form_residual_bracket(d2, 0.5, xi)
        assert np.all(np.diff(vals) <= 1e-15)
        assert np.all(vals <= vals[0])


class TestGlobalSolvability:
    def test_e2_small_amplitude(self, d2):
        assert global_solvability_condition(d2, 0.5)

    def test_e2_large_amplitude(self, d2):
        assert not global_solvability_condition(d2, 1.0)

    def test_e1_never(self, d1):
        for a in (0.01, 0.1, 1.0, 10.0):
            assert not global_solvability_condition(d1, a)

    def test_threshold_value(self, d2):
        a_star = solvability_amplitude_threshold(d2)
        assert a_star == pytest.approx(0.5 ** 0.25, rel=1e-14)
        assert global_solvability_condition(d2, a_star)
        assert not global_solvability_condition(d2, a_star * (1 + 1e-12))


class TestFrontRadius:
    def test_unit_tau(self, d2):
        assert front_radius_theory(d2, 0.5, 1.0) == pytest.approx(
            math.sqrt(2.0), rel=1e-14)

    def test_double_tau(self, d2):
        assert front_radius_theory(d2, 0.5, 2.0) == pytest.approx(2.0, rel=1e-14)

    def test_matches_similarity_front(self, d2):
        # the radius maps back to the front coordinate exactly
        for tau in (0.5, 1.0, 3.7):
            r = front_radius_theory(d2, 0.5, tau)
            xi = space_map(d2, r) * tau ** (-1.0 / d2.raw.p)
            assert abs(xi - front_coordinate(d2, 0.5)) <= 1e-12


class TestAbsorptionAsymptote:
    def test_reference_value(self, d1):
        assert absorption_asymptote(d1, 0.0, math.e, 0.0) == pytest.approx(
            math.exp(-1 / 3), rel=1e-14)

    def test_gaussian_tail(self, d1):
        assert absorption_asymptote(d1, 0.0, math.e, 40.0) < 1e-200

    def test_width_scaling(self, d1):
        t = 3.0
        ratio = absorption_asymptote(d1, 0.0, t, math.sqrt(t)) \
            / absorption_asymptote(d1, 0.0, t, 0.0)
        assert ratio == pytest.approx(math.exp(-1.0), rel=1e-14)

    def test_domain_errors(self, d1):
        with pytest.raises(DomainError):
            absorption_asymptote(d1, 0.0, 0.5, 0.0)
