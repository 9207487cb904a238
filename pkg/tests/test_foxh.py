import math

import numpy as np
import pytest
from scipy.special import gamma as spgamma

from gammaratio import (
    ContourConfig,
    DomainError,
    RatioSpec,
    SingularPointError,
    UnsupportedParameterError,
    derive,
    fox_h,
    meijer_g,
    mellin_check,
)
from gammaratio.foxh import gamma_product_ratio_at, subtracted_gamma_ratio


def beta_density(alpha, beta, x):
    """Closed form of the representing density for the p=q=1 unit family."""
    return x**alpha * (1.0 - x) ** (beta - 1.0) / spgamma(beta)


class TestContourConfig:
    def test_defaults_valid(self):
        cfg = ContourConfig()
        assert cfg.truncation_T == 400.0
        assert cfg.quad_rel_tol == 1e-8

    def test_rejects_small_truncation(self):
        with pytest.raises(DomainError):
            ContourConfig(truncation_T=5.0)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(DomainError):
            ContourConfig(quad_rel_tol=1e-2)
        with pytest.raises(DomainError):
            ContourConfig(quad_rel_tol=1e-15)

    def test_abscissa_must_clear_pole(self, spec_mixed_scale):
        inv = derive(spec_mixed_scale)
        with pytest.raises(DomainError):
            ContourConfig(abscissa_c=-0.5).resolve_abscissa(inv)

    def test_default_abscissa(self, spec_mixed_scale):
        inv = derive(spec_mixed_scale)
        assert ContourConfig().resolve_abscissa(inv) == pytest.approx(1.0)


class TestFoxH:
    def test_constant_density(self, spec_inverse_x):
        # W(x) = 1/x has representing density identically 1 on (0, 1).
        ev = fox_h(spec_inverse_x, 0.3)
        assert ev.value == pytest.approx(1.0, abs=1e-10)
        assert ev.value == ev.leading_part + ev.remainder_part
        assert ev.error_estimate >= 0.0

    def test_beta_closed_form(self):
        for alpha, beta in ((0.0, 1.0), (1.0, 3.0), (3.0, 0.5), (0.5, 2.5)):
            spec = RatioSpec(A=(1.0,), a=(alpha,), B=(1.0,), b=(alpha + beta,))
            for x in (0.2, 0.5, 0.8):
                got = fox_h(spec, x).value
                assert got == pytest.approx(beta_density(alpha, beta, x), rel=1e-8)

    def test_support_vanishes(self, spec_mixed_scale, spec_equal_scales):
        for spec in (spec_mixed_scale, spec_equal_scales):
            rho = derive(spec).rho
            for mult in (1.1, 2.0, 10.0):
                assert abs(fox_h(spec, mult * rho).value) <= 1e-7

    def test_positive_on_support_for_lcm(self, spec_mixed_scale, spec_equal_scales):
        cfg = ContourConfig()
        for spec in (spec_mixed_scale, spec_equal_scales):
            rho = derive(spec).rho
            for frac in np.linspace(0.08, 0.92, 12):
                assert fox_h(spec, frac * rho, cfg).value >= -10.0 * cfg.quad_rel_tol

    def test_rejects_near_support_endpoint(self, spec_equal_scales):
        rho = derive(spec_equal_scales).rho
        with pytest.raises(SingularPointError):
            fox_h(spec_equal_scales, rho * (1.0 + 1e-9))

    def test_rejects_nonpositive_mu(self):
        spec = RatioSpec(A=(1,), a=(1,), B=(1,), b=(0,))
        with pytest.raises(UnsupportedParameterError):
            fox_h(spec, 0.5)

    def test_rejects_unequal_sums(self, spec_bernstein_only):
        with pytest.raises(DomainError):
            fox_h(spec_bernstein_only, 0.5)

    def test_warns_for_tiny_mu(self):
        spec = RatioSpec(A=(1.0,), a=(0.2,), B=(1.0,), b=(0.3,))
        with pytest.warns(RuntimeWarning, match="slow contour decay"):
            fox_h(spec, 0.5)

    def test_parts_sum_exactly(self, spec_equal_scales):
        ev = fox_h(spec_equal_scales, 0.4)
        assert ev.value == ev.leading_part + ev.remainder_part

    def test_quadrature_failure_raises_with_estimate(self, spec_equal_scales, monkeypatch):
        import gammaratio.foxh as foxh_mod
        from gammaratio import QuadratureAccuracyError

        # Force every quadrature path to disagree across contours.
        monkeypatch.setattr(foxh_mod, "_fourier_re", lambda contour, c, omega, cfg: (c, 1e6, False))
        monkeypatch.setattr(foxh_mod, "_fourier_truncated", lambda contour, c, omega, cfg: (c, 1e6))
        with pytest.raises(QuadratureAccuracyError) as exc:
            fox_h(spec_equal_scales, 0.4)
        assert exc.value.error_estimate > 0.0
        assert math.isfinite(exc.value.best_estimate)


class TestMeijerG:
    def test_constant_density(self):
        assert meijer_g((0.0,), (1.0,), 0.5).value == pytest.approx(1.0, abs=1e-10)

    def test_closed_form(self):
        # alpha=1, beta=2: density x(1-x)/Gamma(2) evaluated at 0.5.
        assert meijer_g((1.0,), (3.0,), 0.5).value == pytest.approx(0.25, rel=1e-9)

    def test_near_right_endpoint_finite(self):
        ev = meijer_g((0.5,), (2.0,), 0.999)
        assert math.isfinite(ev.value)

    def test_rejects_outside_support(self):
        with pytest.raises(DomainError):
            meijer_g((0.0,), (1.0,), 1.0)
        with pytest.raises(DomainError):
            meijer_g((0.0,), (1.0,), 1.5)

    def test_rejects_nonpositive_gap(self):
        with pytest.raises(UnsupportedParameterError):
            meijer_g((1.0,), (1.0,), 0.5)


class TestSubtractedIntegrand:
    def test_conjugate_symmetry(self, spec_equal_scales, spec_mixed_scale):
        for spec in (spec_equal_scales, spec_mixed_scale):
            c = max(derive(spec).gamma_pole, 0.0) + 1.0
            for t in (0.3, 2.0, 17.5, 130.0):
                up = subtracted_gamma_ratio(spec, complex(c, t))
                down = subtracted_gamma_ratio(spec, complex(c, -t))
                assert down == pytest.approx(up.conjugate(), rel=1e-10)

    def test_trivial_spec_integrand_vanishes(self, spec_inverse_x):
        # Gamma(s)/Gamma(s+1) = s^-1 exactly, so the subtraction is exact.
        for t in (0.5, 3.0, 40.0):
            assert abs(subtracted_gamma_ratio(spec_inverse_x, complex(1.0, t))) < 1e-15

    def test_decay_law(self, spec_equal_scales):
        # |g(c+it)| <= C t^-(mu+1): fit C on [50, 400], verify beyond.
        spec = spec_equal_scales
        inv = derive(spec)
        c = max(inv.gamma_pole, 0.0) + 1.0
        fit_ts = np.linspace(50.0, 400.0, 8)
        C = max(
            abs(subtracted_gamma_ratio(spec, complex(c, t))) * t ** (inv.mu + 1.0) for t in fit_ts
        )
        for t in (600.0, 1000.0, 2500.0):
            bound = 1.2 * C * t ** (-inv.mu - 1.0)
            assert abs(subtracted_gamma_ratio(spec, complex(c, t))) <= bound


class TestMellin:
    def test_trivial_identity(self, spec_inverse_x):
        lhs, rhs = mellin_check(spec_inverse_x, 2.0)
        assert rhs == pytest.approx(0.5, rel=1e-12)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_mixed_scale_s1(self, spec_mixed_scale):
        lhs, rhs = mellin_check(spec_mixed_scale, 1.0)
        exact = spgamma(2.4) * spgamma(5.4) * spgamma(1.9) / (spgamma(3.0) * spgamma(11.0))
        assert rhs == pytest.approx(exact, rel=1e-12)
        assert abs(lhs - rhs) / rhs <= 1e-6

    def test_equal_scales_s2(self, spec_equal_scales):
        lhs, rhs = mellin_check(spec_equal_scales, 2.0)
        assert abs(lhs - rhs) / rhs <= 1e-6

    def test_rejects_s_left_of_pole(self, spec_mixed_scale):
        with pytest.raises(DomainError):
            mellin_check(spec_mixed_scale, -0.3)

    def test_gamma_product_helper(self, spec_equal_scales):
        spec = spec_equal_scales
        exact = math.prod(spgamma(Ai * 2.0 + ai) for Ai, ai in zip(spec.A, spec.a)) / math.prod(
            spgamma(Bj * 2.0 + bj) for Bj, bj in zip(spec.B, spec.b)
        )
        assert gamma_product_ratio_at(spec, 2.0) == pytest.approx(exact, rel=1e-12)
