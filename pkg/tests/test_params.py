"""Derived constants, branch flags and the similarity maps."""

import dataclasses
import math

import numpy as np
import pytest

from degenpde import (InvalidParamsError, ProblemParams, UndefinedConstantError,
                      classify, derive, fujita_exponent, rescaled_time,
                      similarity_coord, space_map, space_unmap, time_factors,
                      validate, vbar)
from degenpde.errors import DomainError

from conftest import make_e1, make_e2, make_e3, make_f2a


def bits_equal(x, y):
    if isinstance(x, float) and isinstance(y, float):
        return (math.isnan(x) and math.isnan(y)) or x == y
    return x == y


def random_admissible(rng):
    """Random parameter draw with all validation constraints satisfied."""
    while True:
        q = rng.uniform(0.0, 0.9)
        p = rng.uniform(2.0, 4.0)
        n1 = rng.uniform(0.0, 0.8)
        N = int(rng.integers(1, 4))
        n = rng.uniform(0.0, min(N - 0.1, p - n1 - 0.1)) if N > 1 else 0.0
        if p <= n + n1 + 0.05:
            continue
        params = ProblemParams(
            k=rng.uniform(0.3, 2.5), m=rng.uniform(0.3, 2.5), p=p, q=q,
            epsilon=1, n=n, n1=n1, l=rng.uniform(0.0, 2.0),
            beta=rng.uniform(1.2, 6.0) * (1 - q) + q, N=N)
        if validate(params):
            continue
        try:
            derive(params)
        except UndefinedConstantError:
            continue
        return params


class TestValidate:
    def test_e1_clean(self):
        assert validate(make_e1()) == []

    def test_dimension_bound(self):
        out = validate(make_e1(N=0))
        assert any("N >= 1" in v for v in out)

    def test_flux_density_bound(self):
        out = validate(make_e1(n1=3.0))
        assert any("p > n+n1" in v for v in out)

    def test_log_branch_flag_only_in_strict_mode(self):
        params = make_e1(n1=2.0)  # p = n + n1 exactly
        assert any("logarithmic" in v for v in validate(params))
        assert validate(params, permissive=True) == []

    def test_derive_rejects_invalid(self):
        with pytest.raises(InvalidParamsError):
            derive(make_e1(N=0))


class TestDerive:
    def test_e1_constants(self, d1):
        assert d1.gamma1 == 2.0
        assert d1.gamma2 == 1.0
        assert d1.b == 0.25
        assert d1.s == 1.0
        assert d1.l5 == 1.0
        assert d1.l7 == 1.0
        assert d1.beta2 == 3.0

    def test_e2_constants(self, d2):
        assert d2.l1 == pytest.approx(4.0 ** -0.25, abs=1e-15)
        assert d2.l6 == pytest.approx(4.0 ** -0.25, abs=1e-15)
        assert d2.l7 == 3.0
        # rescaled time follows 0.94281 * t^(3/4)
        for t in (1.0, 2.0, 16.0):
            assert rescaled_time(d2, t) == pytest.approx(
                (4.0 ** -0.25) * (4.0 / 3.0) * t ** 0.75, rel=1e-14)

    def test_e3_constants(self, d3):
        assert d3.gamma2 == -2.0
        assert d3.A == pytest.approx(64.0, abs=1e-12)

    def test_transformed_exponents_exact(self):
        params = ProblemParams(k=1.3, m=0.7, p=2.5, q=0.5, epsilon=1, n=0.0,
                               n1=0.0, l=0.0, beta=2.0, N=2)
        d = derive(params)
        assert d.m2 == 0.7 / 0.5 and d.k2 == 1.3 / 0.5
        assert d.beta2 == (2.0 - 0.5) / 0.5

    def test_q_zero_keeps_raw_exponents(self):
        d = derive(make_e1())
        assert d.m2 == 2.0 and d.k2 == 1.0 and d.beta2 == 3.0

    def test_negative_base_raises_with_symbol(self):
        # absorption with beta2 > 1 leaves the amplitude constant undefined
        with pytest.raises(UndefinedConstantError) as err:
            derive(make_e2(epsilon=-1))
        assert err.value.symbol == "l1"

    def test_round_trip_bit_identical(self):
        rng = np.random.default_rng(42)
        fields = [f.name for f in dataclasses.fields(derive(make_e1()))
                  if f.name not in ("raw", "undefined", "degeneracies")]
        for _ in range(100):
            params = random_admissible(rng)
            d = derive(params)
            d_rt = derive(ProblemParams.from_json(params.to_json()))
            for name in fields:
                assert bits_equal(getattr(d, name), getattr(d_rt, name)), name


class TestClassify:
    def test_e1_slow_subcritical(self, d1):
        regime = classify(d1)
        assert regime.diffusion == "slow"
        assert regime.solvability == "subcritical"
        assert fujita_exponent(d1) == (4.0, 4.0)

    def test_e3_fast(self, d3):
        assert classify(d3).diffusion == "fast"

    def test_critical_diffusion(self):
        d = derive(make_e1(m=1.0))
        assert classify(d).diffusion == "critical"
        assert "critical-diffusion" in d.degeneracies

    def test_e2_supercritical(self, d2):
        assert classify(d2).solvability == "supercritical"


class TestFujita:
    def test_e1_value(self, d1):
        b2c, bcu = fujita_exponent(d1)
        assert b2c == pytest.approx(4.0, abs=1e-14)
        assert bcu == pytest.approx(4.0, abs=1e-14)

    def test_matches_reduced_formula_when_densities_vanish(self):
        # with n = n1 = l = 0 the threshold is m + k(p-2) + q + p(1-q)/N
        rng = np.random.default_rng(7)
        for _ in range(100):
            q = rng.uniform(0.0, 0.9)
            params = ProblemParams(
                k=rng.uniform(0.5, 2.0), m=rng.uniform(0.5, 2.0),
                p=rng.uniform(2.0, 4.0), q=q, epsilon=1, n=0.0, n1=0.0,
                l=0.0, beta=q + 2 * (1 - q), N=int(rng.integers(1, 4)))
            d = derive(params)
            _, bcu = fujita_exponent(d)
            direct = params.m + params.k * (params.p - 2) + q \
                + params.p * (1 - q) / params.N
            assert bcu == pytest.approx(direct, rel=1e-12)

    def test_two_equivalent_forms(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            params = random_admissible(rng)
            d = derive(params)
            pp = params
            alt = 1 + (1 + pp.l) * (d.m2 + d.k2 * (pp.p - 2) - 1
                                    + (pp.p - pp.n - pp.n1) / (pp.N - pp.n))
            assert abs(alt - d.beta2_crit) <= 1e-12 * max(1.0, abs(alt))

    def test_linear_in_time_exponent(self, d1):
        d_shift = derive(make_e1(l=1.0))
        step = d1.m2 + d1.k2 * (d1.raw.p - 2) + (d1.raw.p - d1.raw.n1 - d1.raw.N) \
            / (d1.raw.N - d1.raw.n)
        assert d_shift.beta2_crit - d1.beta2_crit == pytest.approx(step, rel=1e-13)

    def test_threshold_balances_reaction_constant(self):
        # at beta2 = beta2_crit exactly, 1/l7 equals s/p
        rng = np.random.default_rng(13)
        for _ in range(200):
            params = random_admissible(rng)
            d = derive(params)
            beta_at_crit = params.q + (1 - params.q) * d.beta2_crit
            dc = derive(dataclasses.replace(params, beta=beta_at_crit))
            assert abs(1.0 / dc.l7 - dc.s / params.p) <= 1e-12


class TestTimeFactors:
    def test_e2_values(self, d2):
        vb, tau = time_factors(d2, 1.0)
        assert vb == pytest.approx(0.7071067811865476, abs=1e-15)
        assert tau == pytest.approx(0.9428090415820634, abs=1e-14)
        vb16, _ = time_factors(d2, 16.0)
        assert vb16 == pytest.approx(0.7071067811865476 / 2.0, abs=1e-15)

    def test_exponential_branch_at_origin(self):
        # beta2 = 1 with l = 0 selects vbar = exp(-l3 t^(l+1)); value 1 at t=0
        d = derive(make_e1(beta=1.0))
        assert d.vbar_case == "exp"
        assert vbar(d, 0.0) == 1.0
        with pytest.raises(UndefinedConstantError):
            rescaled_time(d, 1.0)

    def test_log_branch_domain(self):
        d = derive(make_e1(m=1.0))   # critical diffusion with beta2 = 3
        assert d.tau_case == "power"
        dd = derive(make_e1(m=1.0, beta=1.0), permissive=True)
        # here l5 = 0 = beta2 - 1 selects the logarithmic rescaled time
        assert dd.tau_case == "log"
        with pytest.raises(DomainError):
            rescaled_time(dd, 0.5)
        assert rescaled_time(dd, math.e) == pytest.approx(1.0, rel=1e-15)

    def test_tau_strictly_increasing_supercritical(self):
        rng = np.random.default_rng(17)
        found = 0
        while found < 50:
            params = random_admissible(rng)
            d = derive(params)
            if classify(d).diffusion != "slow" or d.beta2 < d.beta2_crit:
                continue
            found += 1
            ts = np.linspace(0.5, 20.0, 64)
            taus = [rescaled_time(d, t) for t in ts]
            assert np.all(np.diff(taus) > 0)

    def test_tau_positive_even_on_negated_branch(self):
        d = derive(make_f2a())
        assert d.tau_negated
        assert rescaled_time(d, 1.0) > 0
        assert rescaled_time(d, 2.0) > 0


class TestSpaceMap:
    def test_identity_reduction(self, d1):
        # exponent (p-n-n1)/p = 1 and coefficient p/(p-n-n1) = 1
        assert space_map(d1, 9.0) == 9.0

    def test_f2a_value(self):
        d = derive(make_f2a())
        assert space_map(d, 1.0) == pytest.approx(4.0 / 2.8, rel=1e-14)

    def test_log_branch(self):
        d = derive(make_e1(n1=2.0), permissive=True)
        assert space_map(d, math.e) == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(DomainError):
            space_map(d, 0.0)

    def test_unmap_round_trip(self, d2):
        for r in (0.3, 1.0, 2.5):
            assert space_unmap(d2, space_map(d2, r)) == pytest.approx(r, rel=1e-13)


class TestSimilarityCoord:
    def test_axis_value(self, d2):
        assert similarity_coord(d2, 1.0, 0.0) == 0.0

    def test_e2_value(self, d2):
        # 0.9428090415820634^(-1/2), i.e. 1.0299 at display precision
        assert similarity_coord(d2, 1.0, 1.0) == pytest.approx(
            0.9428090415820634 ** -0.5, rel=1e-14)

    def test_homogeneous_in_phi(self, d2):
        # doubling phi doubles xi at fixed t; phi = r here
        xi1 = similarity_coord(d2, 2.0, 1.0)
        xi2 = similarity_coord(d2, 2.0, 2.0)
        assert xi2 == pytest.approx(2 * xi1, rel=1e-14)
