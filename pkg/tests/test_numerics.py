import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import betainc as scipy_betainc

from glrdose import DoseData, beta_tail_exceeds, bisect, reg_inc_beta
from oracles import binomial_sum_beta_cdf, simpson_beta_cdf


class TestRegIncBeta:
    def test_closed_form_a_equals_one(self):
        # I_t(1, b) = 1 - (1 - t)^b
        assert reg_inc_beta(1, 4, 0.2) == pytest.approx(1 - 0.8**4, abs=1e-12)

    def test_polynomial_cdf(self):
        # Beta(2, 3) CDF is 6t^2 - 8t^3 + 3t^4
        assert reg_inc_beta(2, 3, 0.3) == pytest.approx(0.3483, abs=1e-10)

    def test_symmetry_midpoint(self):
        assert reg_inc_beta(3, 3, 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_endpoints(self):
        assert reg_inc_beta(2.5, 1.7, 0.0) == 0.0
        assert reg_inc_beta(2.5, 1.7, 1.0) == 1.0

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            reg_inc_beta(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            reg_inc_beta(1.0, -2.0, 0.5)
        with pytest.raises(ValueError):
            reg_inc_beta(1.0, 1.0, 1.5)

    @given(
        a=st.floats(0.5, 40.0),
        b=st.floats(0.5, 40.0),
        # keep 1 - t exactly representable so the identity is testable in floats
        t=st.floats(1e-6, 1.0 - 1e-6),
    )
    @settings(max_examples=150, deadline=None)
    def test_reflection_identity(self, a, b, t):
        assert reg_inc_beta(a, b, t) + reg_inc_beta(b, a, 1.0 - t) == pytest.approx(
            1.0, abs=1e-10
        )

    @given(a=st.floats(0.2, 30.0), b=st.floats(0.2, 30.0))
    @settings(max_examples=60, deadline=None)
    def test_nondecreasing_in_t(self, a, b):
        grid = [i / 100 for i in range(101)]
        values = [reg_inc_beta(a, b, t) for t in grid]
        assert values[0] == 0.0
        assert values[-1] == 1.0
        assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(values, values[1:]))

    def test_matches_binomial_sum_for_integer_shapes(self):
        for a in range(1, 8):
            for b in range(1, 8):
                for t in (0.05, 0.2, 0.25, 0.3, 0.5, 0.77):
                    assert reg_inc_beta(a, b, t) == pytest.approx(
                        binomial_sum_beta_cdf(a, b, t), abs=1e-10
                    )

    def test_matches_quadrature_for_fractional_shapes(self):
        # shapes of the continuous posterior extension: n*p + 1, n*(1-p) + 1
        for a, b in [(1.5904, 3.4096), (2.2, 4.8), (1.0, 7.0), (3.7, 1.3)]:
            for t in (0.15, 0.2, 0.25, 0.3, 0.35):
                assert reg_inc_beta(a, b, t) == pytest.approx(
                    simpson_beta_cdf(a, b, t), abs=1e-8
                )

    def test_matches_scipy(self):
        for a, b in [(0.5, 0.5), (1.9, 8.4), (12.0, 3.3), (40.0, 40.0)]:
            for t in (0.01, 0.2, 0.5, 0.9, 0.999):
                assert reg_inc_beta(a, b, t) == pytest.approx(
                    float(scipy_betainc(a, b, t)), abs=1e-12
                )


class TestBetaTailExceeds:
    def test_all_events_exceeds(self):
        # tail is 1 - 0.25^4 = 0.99609
        assert beta_tail_exceeds(DoseData(3, 3), 0.25, 0.95)

    def test_two_of_three_falls_short(self):
        # tail is 1 - (4 * 0.25^3 - 3 * 0.25^4) = 0.94921875
        assert not beta_tail_exceeds(DoseData(3, 2), 0.25, 0.95)

    def test_no_events_falls_short(self):
        assert not beta_tail_exceeds(DoseData(3, 0), 0.25, 0.95)

    def test_requires_patients(self):
        with pytest.raises(ValueError):
            beta_tail_exceeds(DoseData(0, 0), 0.25, 0.95)


class TestBisect:
    def test_linear_root(self):
        assert bisect(lambda t: t - 0.5, 0.0, 1.0, tol=1e-9) == pytest.approx(
            0.5, abs=1e-9
        )

    def test_quadratic_root(self):
        assert bisect(lambda t: t * t - 0.25, 0.0, 1.0, tol=1e-9) == pytest.approx(
            0.5, abs=1e-9
        )

    def test_step_function_switch(self):
        assert bisect(lambda t: 1.0 if t < 0.3 else -1.0, 0.0, 1.0, tol=1e-8) == pytest.approx(
            0.3, abs=1e-7
        )

    def test_rejects_missing_bracket(self):
        with pytest.raises(ValueError):
            bisect(lambda t: t + 1.0, 0.0, 1.0)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            bisect(lambda t: t - 0.5, 0.0, 1.0, tol=0.0)
