"""Worst-case bounds: hand values, oracle equality, dominance, monotonicity."""

import math

import numpy as np
import pytest

from paoiq.errors import StabilityError, ValidationError
from paoiq.robust_bounds import (
    UncertaintyParams,
    bound_robust1_single,
    bound_robust2_single,
    bound_robust3_two,
    kingman_bound,
    paoi_from_system_bound,
    worst_case_exact_single,
    worst_case_exact_two,
)
from paoiq.simulator import SystemParams, simulate_fcfs


def py_enum_single(lam, mu, alpha, ga, gs, n):
    """Plain-Python enumeration, independent of the kernel backends."""
    ia = 1.0 / alpha
    return max((m + 1) / mu - m / lam + gs * (m + 1) ** ia + ga * m**ia for m in range(n))


def py_enum_two(lam, mu, alpha, ga, gs, n):
    ia = 1.0 / alpha
    best = 1.0 / mu + gs  # m = -1/2 boundary
    for j in range(1, n):
        m = 0.5 * j - 0.5
        v = 2 * (m + 1) / mu - m / lam + 2 * gs * (m + 1) ** ia + ga * m**ia
        best = max(best, v)
    return best


def random_single_tuples(count, seed):
    rng = np.random.default_rng(seed)
    for i in range(count):
        alpha = 2.0 if i % 10 == 0 else float(rng.uniform(1.05, 2.0))
        mu = float(rng.uniform(0.5, 2.0))
        lam = float(rng.uniform(0.05, 0.95)) * mu
        ga = 0.0 if i % 17 == 0 else float(rng.uniform(0.0, 10.0))
        gs = 0.0 if i % 23 == 0 else float(rng.uniform(0.0, 10.0))
        n = int(rng.integers(1, 501))
        yield SystemParams(lam, mu, n, 1), UncertaintyParams(alpha, ga, gs)


def random_two_tuples(count, seed):
    rng = np.random.default_rng(seed)
    for i in range(count):
        alpha = 2.0 if i % 10 == 0 else float(rng.uniform(1.05, 2.0))
        mu = float(rng.uniform(0.5, 2.0))
        lam = float(rng.uniform(0.05, 0.95)) * mu / 2.0
        ga = 0.0 if i % 17 == 0 else float(rng.uniform(0.0, 10.0))
        gs = 0.0 if i % 23 == 0 else float(rng.uniform(0.0, 10.0))
        n = int(rng.integers(1, 501))
        yield SystemParams(lam, mu, n, 2), UncertaintyParams(alpha, ga, gs)


class TestUncertaintyParams:
    def test_alpha_range(self):
        with pytest.raises(ValidationError):
            UncertaintyParams(1.0, 1.0, 1.0)
        with pytest.raises(ValidationError):
            UncertaintyParams(2.5, 1.0, 1.0)
        UncertaintyParams(2.0, 0.0, 0.0)

    def test_gamma_sign(self):
        with pytest.raises(ValidationError):
            UncertaintyParams(2.0, -0.1, 0.0)
        with pytest.raises(ValidationError):
            UncertaintyParams(2.0, 0.0, -0.1)


class TestExactSingle:
    def test_deterministic_light_load(self):
        # gammas zero, lam < mu: f decreases in m, max at m = 0 is 1/mu
        res = worst_case_exact_single(SystemParams(0.5, 1.0, 50, 1), UncertaintyParams(2, 0, 0))
        assert res.value == pytest.approx(1.0)
        assert res.m_star == 0

    def test_deterministic_overload_grows_linearly(self):
        # lam > mu allowed here; max sits at m = n-1
        res = worst_case_exact_single(SystemParams(2.0, 1.0, 5, 1), UncertaintyParams(2, 0, 0))
        assert res.value == pytest.approx(5.0 - 4.0 / 2.0)
        assert res.m_star == 4

    def test_matches_plain_python_enumeration(self):
        for sysp, unc in random_single_tuples(300, seed=31):
            if sysp.n > 60:
                continue
            res = worst_case_exact_single(sysp, unc)
            ref = py_enum_single(sysp.lam, sysp.mu, unc.alpha, unc.gamma_a, unc.gamma_s, sysp.n)
            assert res.value == pytest.approx(ref, rel=1e-12)

    def test_rejects_two_source_params(self):
        with pytest.raises(ValidationError):
            worst_case_exact_single(SystemParams(0.2, 1.0, 5, 2), UncertaintyParams(2, 1, 1))


class TestRobust1:
    def test_hand_value(self):
        res = bound_robust1_single(SystemParams(0.5, 1.0, 100, 1), UncertaintyParams(2, 1, 1))
        assert res.value == pytest.approx(3.0, rel=1e-12)

    def test_zero_variability_reduces_to_mean_interarrival(self):
        res = bound_robust1_single(SystemParams(0.25, 1.0, 100, 1), UncertaintyParams(2, 0, 0))
        assert res.value == pytest.approx(4.0)

    def test_requires_stability(self):
        with pytest.raises(StabilityError):
            bound_robust1_single(SystemParams(1.0, 1.0, 100, 1), UncertaintyParams(2, 1, 1))

    def test_dominates_exact(self):
        for sysp, unc in random_single_tuples(2000, seed=7):
            exact = worst_case_exact_single(sysp, unc).value
            relaxed = bound_robust1_single(sysp, unc).value
            assert exact <= relaxed * (1 + 1e-12) + 1e-12


class TestRobust2:
    def test_equals_enumeration_oracle(self):
        for sysp, unc in random_single_tuples(2000, seed=42):
            exact = worst_case_exact_single(sysp, unc).value
            closed = bound_robust2_single(sysp, unc).value
            assert abs(closed - exact) <= 1e-9 * abs(exact)

    def test_candidate_example_frozen_from_oracle(self):
        # alpha=2, gammas=1, lam=0.5, mu=1: l=1, candidates {0,1,2},
        # enumeration at n=100 gives f(1) = 1 + sqrt(2)
        sysp = SystemParams(0.5, 1.0, 100, 1)
        unc = UncertaintyParams(2.0, 1.0, 1.0)
        exact = worst_case_exact_single(sysp, unc)
        res = bound_robust2_single(sysp, unc)
        assert exact.value == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-12)
        assert res.value == pytest.approx(exact.value, rel=1e-12)
        assert res.m_star == 1

    def test_single_update(self):
        res = bound_robust2_single(SystemParams(0.5, 1.0, 1, 1), UncertaintyParams(2, 3, 2))
        assert res.value == pytest.approx(1.0 + 2.0)  # 1/mu + gamma_s

    def test_zero_gamma_falls_back_to_enumeration(self):
        res = bound_robust2_single(SystemParams(0.5, 1.0, 10, 1), UncertaintyParams(2, 0, 0))
        assert res.value == pytest.approx(1.0)

    def test_requires_stability(self):
        with pytest.raises(StabilityError):
            bound_robust2_single(SystemParams(1.0, 1.0, 10, 1), UncertaintyParams(2, 1, 1))


class TestExactTwo:
    def test_deterministic_hand_case(self):
        # gammas zero, lam=0.2, mu=1: max of 2(m+1) - 5m over the grid is at m=0
        res = worst_case_exact_two(SystemParams(0.2, 1.0, 10, 2), UncertaintyParams(2, 0, 0))
        assert res.value == pytest.approx(2.0)

    def test_single_update_boundary(self):
        res = worst_case_exact_two(SystemParams(0.2, 1.0, 1, 2), UncertaintyParams(2, 1, 0.5))
        assert res.value == pytest.approx(1.0 + 0.5)
        assert res.m_star == -0.5

    def test_matches_plain_python_enumeration(self):
        for sysp, unc in random_two_tuples(300, seed=13):
            if sysp.n > 60:
                continue
            res = worst_case_exact_two(sysp, unc)
            ref = py_enum_two(sysp.lam, sysp.mu, unc.alpha, unc.gamma_a, unc.gamma_s, sysp.n)
            assert res.value == pytest.approx(ref, rel=1e-12)


class TestRobust3:
    def test_equals_enumeration_oracle(self):
        for sysp, unc in random_two_tuples(2000, seed=314):
            exact = worst_case_exact_two(sysp, unc).value
            closed = bound_robust3_two(sysp, unc).value
            assert abs(closed - exact) <= 1e-9 * abs(exact)

    def test_deterministic_hand_case(self):
        res = bound_robust3_two(SystemParams(0.2, 1.0, 10, 2), UncertaintyParams(2, 0, 0))
        assert res.value == pytest.approx(2.0)

    def test_two_update_domain(self):
        # n=2: grid is {-1/2, 0}; f(0) = 2/mu + 2*gamma_s dominates
        res = bound_robust3_two(SystemParams(0.2, 1.0, 2, 2), UncertaintyParams(2, 1, 0.5))
        assert res.value == pytest.approx(2.0 + 1.0)

    def test_requires_two_source_stability(self):
        with pytest.raises(StabilityError):
            bound_robust3_two(SystemParams(0.5, 1.0, 10, 2), UncertaintyParams(2, 1, 1))


class TestKingman:
    def test_hand_value(self):
        res = kingman_bound(0.5, 1.0, 4.0, 1.0)
        assert res.value == pytest.approx(3.5)

    def test_deterministic_floor(self):
        assert kingman_bound(0.5, 1.0, 0.0, 0.0).value == pytest.approx(1.0)

    def test_requires_stability(self):
        with pytest.raises(StabilityError):
            kingman_bound(1.0, 1.0, 1.0, 1.0)

    def test_rejects_unavailable_variance(self):
        with pytest.raises(ValidationError):
            kingman_bound(0.5, 1.0, None, 1.0)


class TestPaoiConversion:
    def test_additive_shift(self):
        res = kingman_bound(0.5, 1.0, 4.0, 1.0)
        assert paoi_from_system_bound(res, 0.5) == pytest.approx(5.5)

    def test_zero_bound(self):
        from paoiq.robust_bounds import BoundResult

        assert paoi_from_system_bound(BoundResult(0.0, "robust2"), 1.0) == pytest.approx(1.0)


class TestProperties:
    def test_monotone_in_gammas_and_service_mean(self):
        rng = np.random.default_rng(66)
        for _ in range(300):
            alpha = float(rng.uniform(1.05, 2.0))
            mu = float(rng.uniform(0.5, 2.0))
            lam = float(rng.uniform(0.05, 0.9)) * mu
            ga, gs = float(rng.uniform(0, 5)), float(rng.uniform(0, 5))
            n = int(rng.integers(1, 200))
            sysp = SystemParams(lam, mu, n, 1)
            base = bound_robust2_single(sysp, UncertaintyParams(alpha, ga, gs)).value
            assert bound_robust2_single(sysp, UncertaintyParams(alpha, ga + 0.5, gs)).value >= base - 1e-12
            assert bound_robust2_single(sysp, UncertaintyParams(alpha, ga, gs + 0.5)).value >= base - 1e-12
            slower = SystemParams(lam, mu * 0.9, n, 1)  # larger 1/mu
            if lam < slower.mu:
                assert bound_robust2_single(slower, UncertaintyParams(alpha, ga, gs)).value >= base - 1e-12

    def test_exact_monotone_in_n(self):
        rng = np.random.default_rng(75)
        for _ in range(200):
            alpha = float(rng.uniform(1.05, 2.0))
            mu = float(rng.uniform(0.5, 2.0))
            lam = float(rng.uniform(0.05, 1.5)) * mu
            unc = UncertaintyParams(alpha, float(rng.uniform(0, 5)), float(rng.uniform(0, 5)))
            n = int(rng.integers(1, 100))
            v1 = worst_case_exact_single(SystemParams(lam, mu, n, 1), unc).value
            v2 = worst_case_exact_single(SystemParams(lam, mu, n + 10, 1), unc).value
            assert v2 >= v1 - 1e-12

    def test_continuous_at_alpha_boundary(self):
        sysp = SystemParams(0.5, 1.0, 200, 1)
        v2 = bound_robust2_single(sysp, UncertaintyParams(2.0, 1.5, 0.5)).value
        v2eps = bound_robust2_single(sysp, UncertaintyParams(2.0 - 1e-9, 1.5, 0.5)).value
        assert math.isfinite(v2) and math.isfinite(v2eps)
        assert v2 == pytest.approx(v2eps, rel=1e-6)

    def test_heavy_tail_coefficient_near_one(self):
        # the stationary-point exponent alpha/(1-alpha) explodes as alpha -> 1;
        # l overflowing the float range must select the endpoint, not crash
        rng = np.random.default_rng(31337)
        for _ in range(300):
            alpha = float(rng.uniform(1.0005, 1.05))
            mu = float(rng.uniform(0.5, 2.0))
            frac = float(rng.uniform(0.05, 0.95))
            unc = UncertaintyParams(alpha, float(rng.uniform(0, 10)), float(rng.uniform(0, 10)))
            n = int(rng.integers(1, 500))
            s1 = SystemParams(frac * mu, mu, n, 1)
            exact = worst_case_exact_single(s1, unc).value
            assert abs(bound_robust2_single(s1, unc).value - exact) <= 1e-9 * exact
            s2 = SystemParams(frac * mu / 2, mu, n, 2)
            exact2 = worst_case_exact_two(s2, unc).value
            assert abs(bound_robust3_two(s2, unc).value - exact2) <= 1e-9 * exact2

    def test_sample_path_soundness_with_empirical_gammas(self):
        # any realized path belongs to the uncertainty sets with its own
        # empirical gammas, so its S_n must sit below the exact worst case
        rng = np.random.default_rng(50)
        alpha = 2.0
        for _ in range(50):
            n = 150
            lam, mu = 0.7, 1.0
            t = rng.exponential(1.0 / lam, n)
            x = rng.exponential(1.0 / mu, n)
            sx = np.cumsum(x[::-1])[::-1]
            ln = np.arange(n, 0, -1, dtype=float)
            g_s = float(np.max((sx - ln / mu) / ln ** (1 / alpha)))
            st = np.cumsum(t[::-1])[::-1]
            mvals = np.arange(n, 0, -1, dtype=float)
            g_a = float(np.max(-(st - mvals / lam) / mvals ** (1 / alpha)))
            unc = UncertaintyParams(alpha, max(g_a, 0.0), max(g_s, 0.0))
            s_n = simulate_fcfs(t, x).system_times[-1]
            bound = worst_case_exact_single(SystemParams(lam, mu, n, 1), unc).value
            assert s_n <= bound + 1e-9
