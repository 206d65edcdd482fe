import numpy as np
from django.test import SimpleTestCase

from adf.exceptions import InvalidArgumentError
from adf.utils.channel import ChannelScenario, GramMatrix, channel_matrix, gram_continuous
from adf.utils.geometry import ReceiveArray, SampledFunction, TransmitArray, uniform_apf
from adf.utils.rate import RatePoint, achievable_rate_discrete, rate_functional


class AchievableRateTest(SimpleTestCase):
    def test_orthogonal_channel(self):
        """Test K_f = I gives N·log2(1 + ρ)."""
        H = np.zeros((2, 4), dtype=complex)
        H[0, 0] = H[1, 1] = 2.0
        self.assertAlmostEqual(achievable_rate_discrete(H, 10.0), 2.0 * np.log2(11.0), places=12)

    def test_rate_functional_from_eigenvalues(self):
        """Test log2 det(I + ρK) for a diagonal Gram."""
        K = GramMatrix(np.diag([0.5, 0.1, 0.0]))
        self.assertAlmostEqual(rate_functional(K, 4.0), np.log2(3.0) + np.log2(1.4), places=12)

    def test_rate_grows_with_snr(self):
        """Test the rate is increasing in ρ."""
        tx, rx = TransmitArray(M=16, d=0.015), ReceiveArray(N=4, d=0.015, z0=3.0)
        H = channel_matrix(uniform_apf(16), tx, rx, ChannelScenario.los(0.03))
        rates = [achievable_rate_discrete(H, rho) for rho in (1.0, 10.0, 100.0)]
        self.assertTrue(rates[0] < rates[1] < rates[2])

    def test_invalid_snr(self):
        """Test ρ must be a positive finite power ratio."""
        K = GramMatrix(np.eye(2))
        for rho in (0.0, -1.0, np.inf):
            with self.assertRaises(InvalidArgumentError):
                rate_functional(K, rho)

    def test_rate_point_invariants(self):
        """Test negative rates and SNRs are rejected."""
        self.assertEqual(RatePoint(3.2, 10.0, scheme='ULA').scheme, 'ULA')
        with self.assertRaises(InvalidArgumentError):
            RatePoint(-0.1, 10.0)
        with self.assertRaises(InvalidArgumentError):
            RatePoint(1.0, 0.0)

    def test_continuous_rate_approaches_the_ula(self):
        """Test the flat-density rate converges to the ULA rate as M grows."""
        wavelength = 0.0299792458
        scenario = ChannelScenario.los(wavelength)
        rx = ReceiveArray(N=4, d=wavelength / 2, z0=3.0)
        gaps = []
        for M in (16, 64, 256):
            tx = TransmitArray(M=M, d=wavelength / 2)
            w = SampledFunction.constant((M - 1) / 2.0, 8 * M)
            continuous = rate_functional(gram_continuous(w, tx, rx, scenario), 10.0)
            discrete = achievable_rate_discrete(channel_matrix(uniform_apf(M), tx, rx, scenario), 10.0)
            gaps.append(abs(continuous - discrete) / discrete)
        self.assertTrue(gaps[0] > gaps[1] > gaps[2], gaps)
        self.assertLess(gaps[-1], 0.02)

    def test_receive_phases_leave_the_rate_unchanged(self):
        """Test scaling the receive rows of H by unit-modulus factors keeps the rate."""
        rng = np.random.default_rng(7)
        tx, rx = TransmitArray(M=16, d=0.015), ReceiveArray(N=4, d=0.015, z0=3.0)
        H = channel_matrix(uniform_apf(16), tx, rx, ChannelScenario.los(0.03)).entries
        D = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, 4))
        self.assertAlmostEqual(
            achievable_rate_discrete(D[:, None] * H, 10.0), achievable_rate_discrete(H, 10.0), places=12,
        )

    def test_rate_functional_is_unitarily_invariant(self):
        """Test log2 det(I + ρK) is unchanged under K ↦ UKUᴴ."""
        rng = np.random.default_rng(3)
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        K = A @ A.conj().T / 4.0
        U, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        rotated = U @ K @ U.conj().T
        rotated = 0.5 * (rotated + rotated.conj().T)
        self.assertAlmostEqual(rate_functional(rotated, 10.0), rate_functional(K, 10.0), places=10)
