import numpy as np
from django.test import SimpleTestCase

from adf.exceptions import DegenerateDensityError, InvalidArgumentError
from adf.utils import quadrature
from adf.utils.closedform import closed_form_placement, simplified_adf
from adf.utils.geometry import (
    Placement, ReceiveArray, SampledFunction, TransmitArray, discretize_adf, empirical_adf,
    flexible_curve, minimum_spacing, place_on_curve, rayleigh_distance, receive_coordinates, uniform_apf,
)
from adf.utils.specfun import complete_beta


class ArrayGeometryTest(SimpleTestCase):
    def test_transmit_aperture(self):
        """Test A_T = (M − 1)·d."""
        tx = TransmitArray(M=64, d=0.015)
        self.assertAlmostEqual(tx.aperture, 0.945, places=12)
        np.testing.assert_allclose(tx.axis, [1.0, 0.0, 0.0], atol=1e-15)

    def test_invalid_arrays(self):
        """Test the array preconditions."""
        with self.assertRaises(InvalidArgumentError):
            TransmitArray(M=1, d=0.01)
        with self.assertRaises(InvalidArgumentError):
            TransmitArray(M=8, d=0.0)
        with self.assertRaises(InvalidArgumentError):
            ReceiveArray(N=4, d=0.01, z0=-1.0)

    def test_receive_array_is_centered_on_z0(self):
        """Test the receive ULA sits symmetrically around (0, 0, z0)."""
        points = receive_coordinates(ReceiveArray(N=4, d=0.015, z0=3.0))
        np.testing.assert_allclose(points[:, 0], [-0.0225, -0.0075, 0.0075, 0.0225], atol=1e-15)
        np.testing.assert_allclose(points[:, 2], 3.0)

    def test_rayleigh_distance(self):
        """Test 2A²/λ."""
        self.assertAlmostEqual(rayleigh_distance(0.945, 0.03), 59.535, places=9)


class PlacementTest(SimpleTestCase):
    def test_uniform_apf(self):
        """Test the ULA positions for M = 5."""
        np.testing.assert_allclose(uniform_apf(5).positions, [-1.0, -0.5, 0.0, 0.5, 1.0], atol=1e-15)

    def test_placement_validation(self):
        """Test ordering, range and pinning checks."""
        with self.assertRaises(InvalidArgumentError):
            Placement([-1.0, 0.2, 0.2, 1.0])
        with self.assertRaises(InvalidArgumentError):
            Placement([-1.2, 0.0, 1.0], endpoint_pinned=False)
        with self.assertRaises(InvalidArgumentError):
            Placement([-0.9, 0.0, 1.0])
        self.assertEqual(len(Placement([-0.9, 0.0, 0.5], endpoint_pinned=False)), 3)

    def test_placements_compare_by_value(self):
        """Test equality and hashing follow the positions."""
        self.assertEqual(uniform_apf(4), uniform_apf(4))
        self.assertEqual(len({uniform_apf(4), uniform_apf(4)}), 1)

    def test_minimum_spacing(self):
        """Test the physical gap of a ULA is its spacing d."""
        tx = TransmitArray(M=8, d=0.015)
        self.assertAlmostEqual(minimum_spacing(uniform_apf(8), tx), 0.015, places=12)


class QuadratureTest(SimpleTestCase):
    def test_trapezoid_weights_without_edge_factor(self):
        """Test the α = 0 weights are the trapezoid rule."""
        weights = quadrature.product_weights(5)
        np.testing.assert_allclose(weights, [0.25, 0.5, 0.5, 0.5, 0.25])

    def test_edge_weights_integrate_the_edge_factor(self):
        """Test Σ W_i = ∫(1 − p²)^{2α} dp = B(1/2, 1 + 2α)."""
        for alpha in (-0.45, -0.25, -0.1):
            weights = quadrature.product_weights(129, alpha)
            self.assertAlmostEqual(weights.sum(), complete_beta(0.5, 1.0 + 2.0 * alpha), places=10)

    def test_fourier_weights_at_zero_frequency(self):
        """Test ω = 0 reduces to the product weights."""
        np.testing.assert_allclose(quadrature.fourier_weights(65, -0.25, 0.0), quadrature.product_weights(65, -0.25))

    def test_filon_is_exact_for_linear_densities(self):
        """Test ∫ e^{−jωp} dp = 2 sin ω / ω above the Filon threshold."""
        for omega in (12.0, 25.0, 80.0):
            value = quadrature.fourier_weights(33, 0.0, omega).sum()
            self.assertAlmostEqual(abs(value - 2.0 * np.sin(omega) / omega), 0.0, places=12)

    def test_cumulative_ends_at_the_integral(self):
        """Test the running integral ends at Σ W_i u_i."""
        w = SampledFunction(np.linspace(1.0, 3.0, 41), -0.2)
        self.assertAlmostEqual(w.cumulative()[-1], w.integral(), places=12)


class SampledFunctionTest(SimpleTestCase):
    def test_constant_integral(self):
        """Test ∫ c dp = 2c on [−1, 1]."""
        self.assertAlmostEqual(SampledFunction.constant(3.5, 64).integral(), 7.0, places=12)

    def test_rejects_negative_values_and_bad_edge_order(self):
        """Test the density invariants."""
        with self.assertRaises(InvalidArgumentError):
            SampledFunction([1.0, -0.1, 1.0])
        with self.assertRaises(InvalidArgumentError):
            SampledFunction([1.0, 1.0], edge_order=-0.5)

    def test_density_is_infinite_only_at_populated_poles(self):
        """Test w(±1) is infinite with an edge pole and zero where u vanishes."""
        w = SampledFunction([0.0, 1.0, 1.0, 2.0], edge_order=-0.25)
        density = w.density()
        self.assertEqual(density[0], 0.0)
        self.assertTrue(np.isinf(density[-1]))

    def test_empirical_adf_keeps_the_mass(self):
        """Test the histogram density integrates to M − 1."""
        w = empirical_adf(uniform_apf(8), 33)
        self.assertAlmostEqual(w.integral(), 7.0, places=12)


class DiscretizationTest(SimpleTestCase):
    def test_constant_density_gives_the_ula(self):
        """Test a flat density discretizes to uniform positions."""
        placement = discretize_adf(SampledFunction.constant(1.0, 256), 16)
        np.testing.assert_allclose(placement.positions, uniform_apf(16).positions, atol=1e-12)
        self.assertTrue(placement.endpoint_pinned)

    def test_edge_density_matches_closed_form_positions(self):
        """Test the numeric pipeline reproduces the closed-form positions."""
        numeric = discretize_adf(simplified_adf(-0.25, 16), 16)
        np.testing.assert_allclose(numeric.positions, closed_form_placement(-0.25, 16).positions, atol=1e-6)

    def test_zero_density_is_degenerate(self):
        """Test an all-zero density cannot be discretized."""
        with self.assertRaises(DegenerateDensityError):
            discretize_adf(SampledFunction.constant(0.0, 32), 8)


class FlexibleCurveTest(SimpleTestCase):
    def test_quarter_order_is_the_lower_semicircle(self):
        """Test α = −1/4, R = 1 gives y = −√(1 − x²)."""
        curve = flexible_curve(-0.25, 1.0)
        deviation = np.abs(curve.y + np.sqrt(np.clip(1.0 - curve.x ** 2, 0.0, None)))
        self.assertLess(deviation.max(), 1e-6)
        self.assertAlmostEqual(curve.length, np.pi, places=9)

    def test_zero_order_is_flat(self):
        """Test α = 0 gives the straight segment of length 2R."""
        curve = flexible_curve(0.0, 2.0, samples=65)
        np.testing.assert_array_equal(curve.y, 0.0)
        self.assertAlmostEqual(curve.length, 4.0, places=12)

    def test_projections_follow_the_arcsine_law(self):
        """Test equal-arc points on the semicircle project to the arcsine CDF."""
        M = 256
        points = place_on_curve(flexible_curve(-0.25, 1.0, samples=129), M)
        x = np.sort(points[:, 0])
        cdf = 0.5 + np.arcsin(np.clip(x, -1.0, 1.0)) / np.pi
        ranks = np.arange(M)
        distance = max(np.max((ranks + 1) / M - cdf), np.max(cdf - ranks / M))
        self.assertLess(distance, 0.02)

    def test_rejects_orders_outside_the_family(self):
        """Test α must lie in (−0.5, 0]."""
        with self.assertRaises(InvalidArgumentError):
            flexible_curve(0.1, 1.0)
