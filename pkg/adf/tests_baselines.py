import numpy as np
from django.test import SimpleTestCase

from adf.exceptions import InvalidArgumentError
from adf.utils.baselines import (
    BaselineConfig, antenna_selection_greedy, greedy_multiplication_count, random_placement, random_placements,
    ula_placement, variational_multiplication_count,
)
from adf.utils.channel import ChannelScenario, channel_matrix
from adf.utils.geometry import ReceiveArray, TransmitArray, uniform_apf
from adf.utils.rate import achievable_rate_discrete

WAVELENGTH = 0.0299792458


class BaselineConfigTest(SimpleTestCase):
    def test_default_grid_is_twice_m(self):
        """Test P_AS defaults to 2M."""
        self.assertEqual(BaselineConfig('AS').grid_size(32), 64)
        self.assertEqual(BaselineConfig('AS', p_as=40).grid_size(32), 40)

    def test_validation(self):
        """Test scheme names, trial counts, seeds and grid sizes."""
        with self.assertRaises(InvalidArgumentError):
            BaselineConfig('UCA')
        with self.assertRaises(InvalidArgumentError):
            BaselineConfig('MC', trials=0)
        with self.assertRaises(InvalidArgumentError):
            BaselineConfig('MC', seed=2 ** 64)
        with self.assertRaises(InvalidArgumentError):
            BaselineConfig('AS', p_as=10).grid_size(16)


class RandomPlacementTest(SimpleTestCase):
    def test_pinned_and_sorted(self):
        """Test every draw starts at −1, ends at 1 and increases."""
        for placement in random_placements(16, 5, seed=3):
            self.assertTrue(placement.endpoint_pinned)
            self.assertEqual(placement.positions[0], -1.0)
            self.assertEqual(placement.positions[-1], 1.0)
            self.assertTrue(np.all(np.diff(placement.positions) > 0.0))

    def test_reproducible_per_trial(self):
        """Test a trial's draw depends only on (seed, trial)."""
        batch = random_placements(16, 5, seed=42)
        self.assertEqual(batch[3], random_placement(16, 42, 3))
        self.assertEqual(batch, random_placements(16, 5, seed=42))
        self.assertNotEqual(batch[0], batch[1])
        self.assertNotEqual(batch[0], random_placements(16, 1, seed=43)[0])

    def test_large_seed(self):
        """Test the full unsigned 64-bit seed range is accepted."""
        self.assertEqual(len(random_placement(8, 2 ** 64 - 1, 0)), 8)

    def test_validation(self):
        """Test M ≥ 2 and trials ≥ 1."""
        with self.assertRaises(InvalidArgumentError):
            random_placements(1, 3, seed=0)
        with self.assertRaises(InvalidArgumentError):
            random_placements(8, 0, seed=0)


class GreedySelectionTest(SimpleTestCase):
    def setUp(self):
        self.scenario = ChannelScenario.los(WAVELENGTH)

    def test_selects_m_grid_points(self):
        """Test the selection has M sorted points from the candidate grid."""
        tx = TransmitArray(M=16, d=WAVELENGTH / 2)
        rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        placement = antenna_selection_greedy(tx, rx, self.scenario, 16, 32, 10.0)
        grid = np.linspace(-1.0, 1.0, 32)
        self.assertEqual(len(placement), 16)
        self.assertTrue(np.all(np.diff(placement.positions) > 0.0))
        self.assertTrue(all(np.isclose(grid, p, atol=0.0, rtol=0.0).any() for p in placement.positions))

    def test_single_receive_antenna_beats_the_ula(self):
        """Test with N = 1 the greedy choice is optimal over the grid, which contains the ULA."""
        M = 16
        tx = TransmitArray(M=M, d=WAVELENGTH / 2)
        rx = ReceiveArray(N=1, d=WAVELENGTH / 2, z0=3.0)
        greedy = antenna_selection_greedy(tx, rx, self.scenario, M, 2 * M - 1, 10.0)
        rate = achievable_rate_discrete(channel_matrix(greedy, tx, rx, self.scenario), 10.0)
        ula = achievable_rate_discrete(channel_matrix(ula_placement(M), tx, rx, self.scenario), 10.0)
        self.assertGreaterEqual(rate, ula - 1e-12)

    def test_four_receive_antennas_beat_the_ula(self):
        """Test with N = 4 and the ULA on the candidate grid the greedy choice is no worse."""
        rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        for M in (8, 16, 32, 64):
            with self.subTest(M=M):
                tx = TransmitArray(M=M, d=WAVELENGTH / 2)
                greedy = antenna_selection_greedy(tx, rx, self.scenario, M, 2 * M - 1, 10.0)
                rate = achievable_rate_discrete(channel_matrix(greedy, tx, rx, self.scenario), 10.0)
                ula = achievable_rate_discrete(channel_matrix(ula_placement(M), tx, rx, self.scenario), 10.0)
                self.assertGreaterEqual(rate, ula - 1e-12)

    def test_full_grid_selection_is_the_grid(self):
        """Test P_AS = M selects every candidate."""
        tx = TransmitArray(M=8, d=WAVELENGTH / 2)
        rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        placement = antenna_selection_greedy(tx, rx, self.scenario, 8, 8, 10.0)
        np.testing.assert_allclose(placement.positions, uniform_apf(8).positions, atol=1e-15)
        self.assertTrue(placement.endpoint_pinned)

    def test_grid_smaller_than_m(self):
        """Test P_AS < M is rejected."""
        tx = TransmitArray(M=8, d=WAVELENGTH / 2)
        rx = ReceiveArray(N=4, d=WAVELENGTH / 2, z0=3.0)
        with self.assertRaises(InvalidArgumentError):
            antenna_selection_greedy(tx, rx, self.scenario, 8, 4, 10.0)


class MultiplicationCountTest(SimpleTestCase):
    def test_counts(self):
        """Test P_AS(N + MN²) + MN³ and I(χMN² + N³)."""
        self.assertEqual(greedy_multiplication_count(64, 4, 128), 128 * (4 + 64 * 16) + 64 * 64)
        self.assertEqual(variational_multiplication_count(50, 64, 4, 8), 50 * (8 * 64 * 16 + 64))
