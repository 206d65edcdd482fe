import numpy as np
from django.test import SimpleTestCase

from adf.exceptions import DegenerateDensityError, IllConditionedError, InvalidArgumentError
from adf.utils.channel import (
    ChannelScenario, GramMatrix, channel_matrix, continuous_responses, gram_from_responses,
)
from adf.utils.geometry import ReceiveArray, SampledFunction, TransmitArray, discretize_adf, uniform_apf
from adf.utils.harness import scatterer_arc
from adf.utils.rate import achievable_rate_discrete, rate_functional
from adf.utils.variational import (
    OptimizerConfig, functional_gradient, gradient_from_responses, optimize_adf, project_constraints,
)

WAVELENGTH = 0.0299792458


def rician_scenario():
    scatterers = scatterer_arc(20, 3.0, (np.pi / 6, 5 * np.pi / 6), seed=11)
    return ChannelScenario.rician(WAVELENGTH, 10.0, scatterers)


class ProjectionTest(SimpleTestCase):
    def test_clips_and_rescales(self):
        """Test negatives are clipped and the mass is reset to M − 1."""
        w = project_constraints(np.array([-1.0, 2.0, 4.0, -3.0, 1.0]), 8)
        self.assertGreaterEqual(w.values.min(), 0.0)
        self.assertAlmostEqual(w.integral(), 7.0, places=12)
        self.assertEqual(w.values[0], 0.0)

    def test_optional_cap(self):
        """Test the cap bounds the density at M − 1 before rescaling."""
        raw = np.array([0.0, 100.0, 1.0, 1.0, 1.0])
        capped = project_constraints(raw, 4, cap=True)
        uncapped = project_constraints(raw, 4)
        self.assertLess(capped.values[1] / capped.values[2], uncapped.values[1] / uncapped.values[2])

    def test_all_negative_is_degenerate(self):
        """Test a density with no positive part cannot be projected."""
        with self.assertRaises(DegenerateDensityError):
            project_constraints(-np.ones(16), 8)


class OptimizerConfigTest(SimpleTestCase):
    def test_defaults(self):
        """Test ε_th = 1e−6·(M − 1) and the unit-mass step."""
        config = OptimizerConfig()
        self.assertAlmostEqual(config.threshold_for(64), 63e-6, places=15)
        self.assertAlmostEqual(config.step_for(64), 1e-3 * 63 ** 2, places=12)
        self.assertEqual(OptimizerConfig(step_units='raw').step_for(64), 1e-3)

    def test_validation(self):
        """Test invalid settings are rejected."""
        for options in ({'max_iterations': 0}, {'step_size': -1.0}, {'threshold': -1e-3},
                        {'grid_multiplier': 0}, {'snr': 0.0}, {'step_units': 'per-antenna'}):
            with self.assertRaises(InvalidArgumentError):
                OptimizerConfig(**options)


class FunctionalGradientTest(SimpleTestCase):
    def setUp(self):
        self.tx = TransmitArray(M=64, d=WAVELENGTH / 2)
        self.rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        grid = np.linspace(-1.0, 1.0, 512)
        self.w = SampledFunction(31.5 * (1.0 + 0.3 * grid ** 2) / 1.1, 0.0)

    def assert_matches_finite_differences(self, scenario):
        rho, M = 10.0, self.tx.M
        responses = continuous_responses(self.w, self.tx, self.rx, scenario)
        gradient = functional_gradient(self.w, self.tx, self.rx, scenario, rho)
        points = np.random.default_rng(7).choice(self.w.size, 20, replace=False)
        for i in points:
            step = 1e-3 * self.w.values[i]
            rates = []
            for sign in (1.0, -1.0):
                values = self.w.values.copy()
                values[i] += sign * step
                w = self.w.with_values(values)
                rates.append(rate_functional(gram_from_responses(responses, w, M), rho))
            numeric = (rates[0] - rates[1]) / (2.0 * step * self.w.weights[i])
            self.assertAlmostEqual(gradient[i] / numeric, 1.0, delta=1e-4)

    def test_gradient_matches_finite_differences_los(self):
        """Test the functional derivative against central differences (LoS)."""
        self.assert_matches_finite_differences(ChannelScenario.los(WAVELENGTH))

    def test_gradient_matches_finite_differences_rician(self):
        """Test the functional derivative against central differences (Rician)."""
        self.assert_matches_finite_differences(rician_scenario())

    def test_gradient_is_even_for_a_mirror_symmetric_geometry(self):
        """Test broadside arrays and a flat density give δC/δw(−p) = δC/δw(p)."""
        w = SampledFunction.constant(31.5, 512)
        gradient = functional_gradient(w, self.tx, self.rx, ChannelScenario.los(WAVELENGTH), 10.0)
        np.testing.assert_allclose(gradient, gradient[::-1], rtol=1e-9, atol=0.0)

    def test_ill_conditioned_system(self):
        """Test cond(I + ρK) above 1e12 raises."""
        gram = GramMatrix(np.diag([1e13, 0.0]))
        with self.assertRaises(IllConditionedError):
            gradient_from_responses(np.zeros((2, 3), dtype=complex), gram, 10.0, 8)


class OptimizeAdfTest(SimpleTestCase):
    def setUp(self):
        self.tx = TransmitArray(M=64, d=WAVELENGTH / 2)
        self.rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        self.scenario = ChannelScenario.los(WAVELENGTH)
        self.config = OptimizerConfig(max_iterations=50, step_size=1e-3, snr=10.0)

    def test_every_iterate_satisfies_the_constraints(self):
        """Test w ≥ 0 and ∫w = M − 1 along the projected ascent."""
        M, rho = 64, 10.0
        w = SampledFunction.constant((M - 1) / 2.0, 8 * M)
        responses = continuous_responses(w, self.tx, self.rx, self.scenario)
        for _ in range(50):
            gram = gram_from_responses(responses, w, M)
            gradient = gradient_from_responses(responses, gram, rho, M)
            w = project_constraints(w.values + self.config.step_for(M) * gradient, M)
            self.assertGreaterEqual(w.values.min(), 0.0)
            self.assertAlmostEqual(w.integral(), M - 1, delta=1e-9)

    def test_trace(self):
        """Test the trace layout and the best-iterate bookkeeping."""
        trace = optimize_adf(self.config, self.tx, self.rx, self.scenario)
        self.assertEqual(len(trace.rates), trace.iterations + 1)
        self.assertEqual(trace.deltas[0], 0.0)
        self.assertGreaterEqual(trace.best_rate, trace.initial_rate)
        self.assertEqual(trace.best_rate, max(trace.rates))
        self.assertAlmostEqual(trace.final_adf.integral(), 63.0, delta=1e-9)
        self.assertEqual(trace.rows()[0], (0, trace.initial_rate, 0.0))

    def test_large_threshold_stops_after_one_step(self):
        """Test the stopping rule on ‖Δw‖."""
        config = OptimizerConfig(max_iterations=50, threshold=1e6, snr=10.0)
        trace = optimize_adf(config, self.tx, self.rx, self.scenario)
        self.assertTrue(trace.converged)
        self.assertEqual(trace.iterations, 1)

    def test_zero_step_keeps_the_initial_density(self):
        """Test η = 0 gives a constant trace that converges at the first stop check."""
        tx = TransmitArray(M=16, d=WAVELENGTH / 2)
        config = OptimizerConfig(max_iterations=50, step_size=0.0, snr=10.0)
        trace = optimize_adf(config, tx, self.rx, self.scenario)
        self.assertEqual(trace.iterations, 1)
        self.assertTrue(trace.converged)
        self.assertEqual(len(trace.rates), 2)
        self.assertAlmostEqual(trace.rates[1], trace.rates[0], places=12)
        np.testing.assert_allclose(trace.final_adf.values, 7.5, rtol=1e-12)

    def test_raw_step_barely_moves_the_density(self):
        """Test an unscaled η = 1e-3 leaves the flat start within 0.1% after 50 steps."""
        config = OptimizerConfig(max_iterations=50, step_size=1e-3, snr=10.0, step_units='raw')
        trace = optimize_adf(config, self.tx, self.rx, self.scenario)
        np.testing.assert_allclose(trace.final_adf.values, 31.5, rtol=1e-3)

    def test_densifies_the_edges(self):
        """Test the optimized density is heavier near |p| = 1 than near the center."""
        trace = optimize_adf(self.config, self.tx, self.rx, self.scenario)
        w = trace.final_adf
        density = w.density()
        self.assertGreater(density[np.abs(w.grid) > 0.8].mean(), density[np.abs(w.grid) < 0.2].mean())

    def test_beats_the_uniform_array(self):
        """Test the discretized optimum is at least as good as the ULA."""
        trace = optimize_adf(self.config, self.tx, self.rx, self.scenario)
        placement = discretize_adf(trace.final_adf, 64)
        rate = achievable_rate_discrete(channel_matrix(placement, self.tx, self.rx, self.scenario), 10.0)
        ula = achievable_rate_discrete(channel_matrix(uniform_apf(64), self.tx, self.rx, self.scenario), 10.0)
        self.assertGreaterEqual(rate, ula)
