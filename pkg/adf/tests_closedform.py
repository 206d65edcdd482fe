import numpy as np
from django.test import SimpleTestCase
from scipy import special

from adf.exceptions import DomainError, InfeasibleParametersError, InvalidArgumentError, OutOfRegimeError
from adf.utils.closedform import (
    AdfFamilyParams, NearFieldFactors, cadf_closed, closed_form_placement, feasibility_margin, gamma_norm,
    nearfield_factors, optimal_adf, positions_closed, simplified_adf, weighted_adf,
)
from adf.utils.geometry import ReceiveArray, SampledFunction, TransmitArray, uniform_apf


class NearFieldFactorsTest(SimpleTestCase):
    def setUp(self):
        self.tx = TransmitArray(M=64, d=0.015)
        self.rx = ReceiveArray(N=4, d=0.015, z0=3.0)

    def test_broadside_beta(self):
        """Test β = π·A_T/z0 for half-wavelength receive spacing at broadside."""
        factors = nearfield_factors(self.tx, self.rx, 0.03, 10.0)
        self.assertAlmostEqual(factors.beta, 0.9896, delta=1e-4)
        self.assertAlmostEqual(factors.tau, 0.0, places=12)

    def test_fresnel_convention_halves_beta(self):
        """Test the Fresnel slope is half the printed one."""
        printed = nearfield_factors(self.tx, self.rx, 0.03, 10.0)
        fresnel = nearfield_factors(self.tx, self.rx, 0.03, 10.0, convention='fresnel')
        self.assertAlmostEqual(fresnel.beta, printed.beta / 2.0, places=12)

    def test_tau_for_tilted_array(self):
        """Test τ = A_T·cosθ_T/(2z0)."""
        tx = TransmitArray(M=64, d=0.015, theta=np.pi / 3)
        factors = nearfield_factors(tx, self.rx, 0.03, 10.0)
        self.assertAlmostEqual(factors.tau, 0.945 * 0.5 / 6.0, places=12)

    def test_out_of_regime(self):
        """Test β ≥ π raises."""
        with self.assertRaises(OutOfRegimeError):
            nearfield_factors(self.tx, ReceiveArray(N=4, d=0.015, z0=0.5), 0.03, 10.0)
        with self.assertRaises(OutOfRegimeError):
            NearFieldFactors(tau=0.0, beta=3.5, z0=3.0, rho=10.0)

    def test_weighted_adf_divides_the_envelope(self):
        """Test w̃ = w/(1 − τp)²."""
        w = SampledFunction.constant(2.0, 5)
        wadf = weighted_adf(w, 0.5)
        np.testing.assert_allclose(wadf.values, 2.0 / (1.0 - 0.5 * np.linspace(-1, 1, 5)) ** 2)


class OptimalAdfTest(SimpleTestCase):
    def setUp(self):
        tx = TransmitArray(M=64, d=0.015, theta=np.pi / 3)
        rx = ReceiveArray(N=4, d=0.015, z0=3.0)
        self.factors = nearfield_factors(tx, rx, 0.03, 10.0)

    def test_normalization_integral(self):
        """Test γ_α makes the singular family carry M − 1 antennas to within 1e-6."""
        M, tau, bias = 64, self.factors.tau, self.factors.bias
        for alpha in np.linspace(-0.49, -0.01, 9):
            with self.subTest(alpha=alpha):
                gamma = gamma_norm(alpha, M, self.factors)
                edge_moment = special.beta(0.5, 1.0 + 2.0 * alpha) + tau ** 2 * special.beta(1.5, 1.0 + 2.0 * alpha)
                mass = gamma * edge_moment - bias * (2.0 + 2.0 * tau ** 2 / 3.0)
                self.assertAlmostEqual(mass, M - 1, delta=1e-6)
                w = optimal_adf(AdfFamilyParams(alpha, M, self.factors))
                self.assertAlmostEqual(w.integral(), M - 1, delta=1e-6)

    def test_gamma_reference_values(self):
        """Test γ at M = 16 with τ = 0 and a negligible bias."""
        factors = NearFieldFactors(tau=0.0, beta=0.99, z0=3.0, rho=1e12)
        self.assertAlmostEqual(gamma_norm(-0.25, 16, factors), 15.0 / np.pi, delta=1e-6)
        self.assertAlmostEqual(gamma_norm(-0.25, 16, factors), 4.7746, delta=1e-4)
        self.assertAlmostEqual(gamma_norm(-0.375, 16, factors), 15.0 / special.beta(0.5, 0.25), delta=1e-6)
        self.assertAlmostEqual(gamma_norm(-0.375, 16, factors), 2.8604, delta=1e-4)

    def test_gamma_is_continuous_at_zero(self):
        """Test γ_α tends to (M − 1)/2 as α → 0⁻."""
        factors = NearFieldFactors(tau=0.0, beta=0.99, z0=3.0, rho=1e12)
        for alpha in (-1e-9, -1e-15):
            with self.subTest(alpha=alpha):
                self.assertAlmostEqual(gamma_norm(alpha, 16, factors), 7.5, delta=1e-6)

    def test_small_edge_order_is_close_to_flat(self):
        """Test α = −1e-4 stays within 1% of the α = 0 density away from the endpoints."""
        factors = NearFieldFactors(tau=0.0, beta=0.99, z0=3.0, rho=1e12)
        flat = optimal_adf(AdfFamilyParams(0.0, 16, factors)).density()[1:-1]
        near = optimal_adf(AdfFamilyParams(-1e-4, 16, factors)).density()[1:-1]
        self.assertLess(np.max(np.abs(near - flat) / flat), 1e-2)

    def test_family_mass_and_sign(self):
        """Test every member is non-negative with ∫w = M − 1."""
        for alpha in (-0.4, -0.25, 0.0):
            w = optimal_adf(AdfFamilyParams(alpha, 64, self.factors))
            self.assertAlmostEqual(w.integral(), 63.0, places=9)
            self.assertGreaterEqual(w.values.min(), 0.0)

    def test_zero_order_is_the_envelope(self):
        """Test α = 0 gives a density proportional to (1 − τp)²."""
        w = optimal_adf(AdfFamilyParams(0.0, 64, self.factors), size=257)
        envelope = (1.0 - self.factors.tau * w.grid) ** 2
        ratio = w.values / envelope
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)

    def test_low_snr_is_infeasible(self):
        """Test a bias above γ_α makes the family negative."""
        weak = NearFieldFactors(tau=0.0, beta=0.99, z0=3.0, rho=1e-3)
        params = AdfFamilyParams(-0.25, 64, weak)
        self.assertLess(feasibility_margin(params), 0.0)
        with self.assertRaises(InfeasibleParametersError):
            optimal_adf(params)

    def test_feasible_margin(self):
        """Test the default 64-antenna scenario is feasible."""
        self.assertGreater(feasibility_margin(AdfFamilyParams(-0.25, 64, self.factors)), 0.0)
        self.assertEqual(feasibility_margin(AdfFamilyParams(0.0, 64, self.factors)), float('inf'))

    def test_alpha_range(self):
        """Test α outside (−0.5, 0] is rejected."""
        with self.assertRaises(InvalidArgumentError):
            AdfFamilyParams(-0.5, 64, self.factors)
        with self.assertRaises(InvalidArgumentError):
            simplified_adf(0.2, 16)


class ClosedFormPositionsTest(SimpleTestCase):
    def test_arcsine_positions(self):
        """Test p(m) = sin(π(m − 8.5)/15) for M = 16, α = −1/4."""
        self.assertAlmostEqual(positions_closed(12, -0.25, 16), 0.6691, delta=1e-4)
        for m in range(1, 17):
            self.assertAlmostEqual(positions_closed(m, -0.25, 16), np.sin(np.pi * (m - 8.5) / 15.0), places=10)

    def test_positions_round_trip_through_the_cadf(self):
        """Test Φ(p(m)) = m."""
        for alpha in (-0.4, -0.25, -0.1):
            for m in range(1, 17):
                self.assertAlmostEqual(cadf_closed(positions_closed(m, alpha, 16), alpha, 16), m, delta=1e-8)

    def test_cadf_end_values(self):
        """Test Φ(−1) = 1, Φ(0) = (M + 1)/2 and Φ(1) = M."""
        self.assertAlmostEqual(cadf_closed(-1.0, -0.3, 32), 1.0, places=12)
        self.assertAlmostEqual(cadf_closed(0.0, -0.3, 32), 16.5, places=12)
        self.assertAlmostEqual(cadf_closed(1.0, -0.3, 32), 32.0, places=12)

    def test_zero_order_is_the_ula(self):
        """Test α = 0 reproduces uniform positions."""
        np.testing.assert_allclose(closed_form_placement(0.0, 16).positions, uniform_apf(16).positions, atol=1e-10)

    def test_domain_checks(self):
        """Test indices and positions outside their ranges."""
        with self.assertRaises(DomainError):
            positions_closed(0, -0.25, 16)
        with self.assertRaises(DomainError):
            cadf_closed(1.5, -0.25, 16)
