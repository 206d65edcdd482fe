import numpy as np
from django.test import SimpleTestCase
from scipy import special

from adf.exceptions import DomainError, InvalidArgumentError, OutOfRegimeError
from adf.utils.asymptotics import (
    GeneratingFunction, Singularity, asymptotic_log_det, asymptotic_rate, calibrate_fh_variant,
    corollary_check, e_b_term, edge_symbol_coefficients, exact_vs_asymptotic_table, fh_log_det,
    fourier_coeff_wadf, limit_generating, matched_constant, rate_alpha_derivative, toeplitz_log_det,
    truncated_generating,
)
from adf.utils.closedform import NearFieldFactors
from adf.utils.geometry import SampledFunction


class StrongSzegoTest(SimpleTestCase):
    def test_constant_symbol(self):
        """Test E_b = N·log b is the exact log det of b·I."""
        for N in (2, 8, 64):
            self.assertAlmostEqual(e_b_term(2.0, N), N * np.log(2.0), delta=1e-9)
            self.assertAlmostEqual(toeplitz_log_det([2.0] + [0.0] * (N - 1), N), N * np.log(2.0), delta=1e-9)

    def test_bessel_oracle(self):
        """Test b = e^{0.1cosθ} against the determinant of its Bessel-entry Toeplitz matrix."""
        N = 32
        exact = toeplitz_log_det(special.iv(np.arange(N), 0.1), N)
        asymptotic = e_b_term(lambda theta: np.exp(0.1 * np.cos(theta)), N)
        self.assertAlmostEqual(asymptotic, 0.0025, delta=1e-9)
        self.assertAlmostEqual(exact, asymptotic, delta=5e-4)

    def test_rejects_non_positive_smooth_parts(self):
        """Test log b needs b > 0."""
        with self.assertRaises(DomainError):
            e_b_term(lambda theta: np.cos(theta), 8)


class GeneratingFunctionTest(SimpleTestCase):
    def test_singularity_validation(self):
        """Test exponents must exceed −1/2 and locations lie in [−π, π)."""
        with self.assertRaises(InvalidArgumentError):
            Singularity(0.0, -0.5)
        with self.assertRaises(InvalidArgumentError):
            Singularity(np.pi, -0.2)

    def test_smooth_part_must_be_positive(self):
        """Test a vanishing smooth part is rejected."""
        with self.assertRaises(DomainError):
            GeneratingFunction(np.zeros(16))

    def test_symbol_carries_the_singular_factor(self):
        """Test s(θ) = b·|2 − 2cos(θ − θ_r)|^{α_r}."""
        gf = GeneratingFunction.from_callable(3.0, (Singularity(0.5, -0.25),))
        theta = np.array([-2.0, 0.0, 1.5])
        expected = 3.0 * (2.0 - 2.0 * np.cos(theta - 0.5)) ** -0.25
        np.testing.assert_allclose(gf.symbol(theta), expected, rtol=1e-12)

    def test_no_singularities_reduces_to_szego(self):
        """Test the Fisher–Hartwig value without singularities is E_b."""
        gf = GeneratingFunction.from_callable(lambda t: 2.0 + np.cos(t))
        self.assertAlmostEqual(fh_log_det(gf, 16), e_b_term(lambda t: 2.0 + np.cos(t), 16), places=12)


class WadfCoefficientTest(SimpleTestCase):
    def test_flat_wadf_coefficients(self):
        """Test c_ℓ = 2 sin(βℓ)/(βℓ) for w̃ = 1."""
        wadf = SampledFunction.constant(1.0, 513)
        self.assertAlmostEqual(fourier_coeff_wadf(wadf, 0.5, 0).real, 2.0, places=12)
        self.assertAlmostEqual(abs(fourier_coeff_wadf(wadf, 0.5, 3) - 2.0 * np.sin(1.5) / 1.5), 0.0, delta=1e-4)
        self.assertAlmostEqual(abs(fourier_coeff_wadf(wadf, 0.5, 30) - 2.0 * np.sin(15.0) / 15.0), 0.0, places=10)

    def test_truncated_symbol_is_real_partial_sum(self):
        """Test g_N(θ) = c_0 + 2Re Σ c_ℓ e^{jℓθ} at θ = 0."""
        wadf = SampledFunction.constant(1.0, 257)
        coefficients = [fourier_coeff_wadf(wadf, 0.5, lag) for lag in range(4)]
        expected = coefficients[0].real + 2.0 * sum(c.real for c in coefficients[1:])
        self.assertAlmostEqual(truncated_generating(wadf, 0.5, 4, 0.0), expected, places=12)

    def test_limit_symbol(self):
        """Test s = 1 + (2πρ/(βz0²))·w̃(θ/β) inside the support and 1 outside."""
        factors = NearFieldFactors(tau=0.0, beta=1.0, z0=3.0, rho=10.0)
        gf = limit_generating(SampledFunction.constant(2.0, 129), 1.0, factors, samples=256)
        inside = np.abs(gf.angles) < 1.0
        np.testing.assert_allclose(gf.smooth[inside], 1.0 + factors.symbol_scale * 2.0)
        np.testing.assert_allclose(gf.smooth[~inside], 1.0)
        self.assertEqual(gf.singularities, ())

    def test_limit_symbol_edge_poles(self):
        """Test edge poles of w̃ become singularities at ±β."""
        factors = NearFieldFactors(tau=0.0, beta=1.0, z0=3.0, rho=10.0)
        gf = limit_generating(SampledFunction.constant(2.0, 129, edge_order=-0.25), 1.0, factors, samples=256)
        self.assertEqual([s.location for s in gf.singularities], [-1.0, 1.0])
        self.assertEqual({s.exponent for s in gf.singularities}, {-0.25})

    def test_limit_symbol_needs_beta_below_pi(self):
        """Test β ≥ π is outside the regime."""
        factors = NearFieldFactors(tau=0.0, beta=1.0, z0=3.0, rho=10.0)
        with self.assertRaises(OutOfRegimeError):
            limit_generating(SampledFunction.constant(1.0, 33), np.pi, factors)


class FisherHartwigTest(SimpleTestCase):
    def test_calibration_selects_the_log_form(self):
        """Test the log form tracks the dense determinant with shrinking error."""
        calibration = calibrate_fh_variant(alpha=-0.25, beta=np.pi / 2, b=2.0, sizes=(8, 16, 32, 64))
        self.assertEqual(calibration.selected, 'log')
        self.assertTrue(calibration.monotone('log'))

    def test_relative_error_at_largest_size(self):
        """Test the asymptotic log det is within 5% at N = 64."""
        rows = exact_vs_asymptotic_table(-0.25, -0.25, np.pi / 2, (8, 16, 32, 64), b=2.0, variant='log')
        self.assertEqual([row.N for row in rows], [8, 16, 32, 64])
        self.assertLess(rows[-1].rel_error, 0.05)

    def test_edge_symbol_without_singularities(self):
        """Test zero exponents give the coefficients of a constant."""
        coefficients = edge_symbol_coefficients(0.0, 0.0, 1.0, 4, b=3.0)
        np.testing.assert_allclose(coefficients, [3.0, 0.0, 0.0, 0.0], atol=1e-10)

    def test_zero_exponents_drop_out(self):
        """Test α = 0 leaves only N·log b."""
        self.assertAlmostEqual(asymptotic_log_det(0.0, 0.0, 1.0, 32, 2.5), 32 * np.log(2.5), places=12)

    def test_unknown_variant(self):
        """Test the variant name is checked."""
        with self.assertRaises(InvalidArgumentError):
            asymptotic_log_det(-0.2, -0.2, 1.0, 16, 2.0, variant='bare')

    def test_asymptotic_rate_in_bits(self):
        """Test α = 0 gives N·log2 of the matched constant."""
        factors = NearFieldFactors(tau=0.0, beta=0.99, z0=3.0, rho=10.0)
        expected = 4 * np.log2(matched_constant(factors, 64))
        self.assertAlmostEqual(asymptotic_rate(0.0, 0.99, 4, factors, 64), expected, places=12)

    def test_alpha_derivative_matches_finite_differences(self):
        """Test ∂C/∂α1 against a central difference of the asymptotic rate."""
        h = 1e-5
        for variant in ('log', 'printed'):
            for alpha1, alpha2 in ((-0.25, -0.25), (-0.3, -0.1)):
                upper = asymptotic_log_det(alpha1 + h, alpha2, 0.9, 16, 2.0, variant)
                lower = asymptotic_log_det(alpha1 - h, alpha2, 0.9, 16, 2.0, variant)
                numeric = (upper - lower) / (2.0 * h) / np.log(2.0)
                analytic = rate_alpha_derivative(alpha1, alpha2, 0.9, 16, variant)
                self.assertAlmostEqual(analytic, numeric, delta=1e-6 * max(1.0, abs(numeric)))


class CorollaryTest(SimpleTestCase):
    def test_constant_symbol_maximizes_szego_term(self):
        """Test the flat symbol wins among equal-power candidates at low frequency."""
        report = corollary_check([
            ('constant', 2.0),
            ('ripple', lambda t: 2.0 + 0.5 * np.cos(t)),
        ], N=64)
        self.assertTrue(report.asserted)
        self.assertTrue(report.holds)
        self.assertEqual(report.maximizer, 'constant')
        self.assertEqual(report.ordering(), ['constant', 'ripple'])

    def test_high_frequency_is_not_asserted(self):
        """Test the claim is withheld when kπ² ≥ N/4."""
        report = corollary_check([
            ('constant', 2.0),
            ('fast', lambda t: 2.0 + 0.5 * np.cos(4 * t)),
        ], N=16)
        self.assertFalse(report.asserted)
        self.assertFalse(report.holds)
        self.assertEqual(report.candidates[1].frequency, 4)

    def test_power_must_match(self):
        """Test candidates with different ∫b dθ are rejected."""
        with self.assertRaises(InvalidArgumentError):
            corollary_check([('constant', 2.0), ('louder', 3.0)], N=16)
